"""Command-line entry point: ``weillab <command> ...``.

Exit codes: 0 when every non-heuristic check passes, 1 when a mathematical
check fails on the data, 2 on bad input or an exhausted resource.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .errors import CheckFailure, InputError, WeilLabError
from .geometry import load_spec
from .positivity import LocalFactor
from .zetarec import ZetaFunction
from . import pipeline as pl


def bundled_fixtures_dir() -> Path:
    return Path(str(resources.files("weillab") / "data" / "varieties"))


def resolve_spec_path(arg: str) -> Path:
    """A path, or the stem of a bundled fixture such as ``e_f5``."""
    path = Path(arg)
    if path.exists():
        return path
    bundled = bundled_fixtures_dir() / (path.name if path.suffix == ".json" else path.name + ".json")
    if bundled.exists():
        return bundled
    raise InputError(f"no such spec file: {arg}")


def _config(args) -> pl.RunConfig:
    return pl.RunConfig(budget=getattr(args, "budget", None), max_m=getattr(args, "max_m", None),
                        holdout=getattr(args, "holdout", 2), dim=getattr(args, "dim", None),
                        tolerance=getattr(args, "tolerance", None), threads=getattr(args, "threads", 1),
                        timings=getattr(args, "timings", False))


def _common(sp, *, enum=True, fit=True):
    if enum:
        sp.add_argument("--max-m", type=int, help="largest extension degree to count over")
        sp.add_argument("--budget", type=int, help="max enumeration units per count "
                        "(default 1e8, or WEILLAB_BUDGET)")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for enumeration")
    if fit:
        sp.add_argument("--holdout", type=int, default=2, help="coefficients held back for validation")
        sp.add_argument("--tolerance", type=float, help="relative tolerance for root classification")
    sp.add_argument("--out", help="write the JSON report here instead of stdout")
    sp.add_argument("--emit-table", choices=["tsv"], help="print a flat table instead of JSON")
    sp.add_argument("--timings", action="store_true", help="include wall-clock timings")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weillab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"weillab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("count", help="point counts N_1..N_max-m")
    sp.add_argument("spec")
    _common(sp, fit=False)

    sp = sub.add_parser("zeta", help="counts, zeta function and (with --dim) the Weil checks")
    sp.add_argument("spec")
    sp.add_argument("--dim", type=int, help="dimension n; enables the verification battery")
    _common(sp)

    sp = sub.add_parser("expsum", help="exponential sums of a polynomial and their L-function")
    sp.add_argument("spec", help="polynomial in the variety-spec JSON format (affine model)")
    sp.add_argument("--no-extend", action="store_true",
                    help="never extrapolate sums beyond the enumeration budget")
    _common(sp)

    sp = sub.add_parser("positivity", help="tensor-power positivity and dominance")
    sp.add_argument("--factors", help='JSON list of factors: [{"poly": ["1", "-3/2", ...]}, ...]')
    sp.add_argument("--random", type=int, default=0, help="add this many random factors")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--k-max", type=int, default=3)
    sp.add_argument("-T", type=int, default=20, dest="T")
    sp.add_argument("--zeta", action="append", default=[],
                    help="zeta JSON (a zeta report or {P, Q, q}); checked for dominance")
    sp.add_argument("--T-dominance", type=int, default=15, dest="T_dom")
    _common(sp, enum=False, fit=False)

    sp = sub.add_parser("tau", help="Delta q-expansion and the Ramanujan bound")
    sp.add_argument("--max-n", type=int, default=10000)
    sp.add_argument("--check-primes-up-to", type=int, default=97)
    _common(sp, enum=False, fit=False)

    sp = sub.add_parser("verify-all", help="run the bundled fixture suite")
    sp.add_argument("--data", help="directory of fixture JSON files (default: bundled)")
    sp.add_argument("--positivity-count", type=int, default=500)
    _common(sp, fit=False)
    sp.add_argument("--holdout", type=int, default=2)
    sp.add_argument("--tolerance", type=float)
    return ap


def _load_factors(path) -> list[LocalFactor]:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        return [LocalFactor.parse(f["poly"] if isinstance(f, dict) else f,
                                  f.get("q_x") if isinstance(f, dict) else None,
                                  f.get("deg_x", 1) if isinstance(f, dict) else 1) for f in raw]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed factor file: {exc}") from exc


def _load_zeta(path) -> tuple[str, ZetaFunction]:
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    if "stages" in d:
        d = d["stages"]["zeta"]
    return Path(path).stem, ZetaFunction.from_dict(d)


def run(args) -> pl.Report:
    cfg = _config(args)
    if args.command == "count":
        return pl.count_report(load_spec(resolve_spec_path(args.spec)), cfg)
    if args.command == "zeta":
        return pl.zeta_report(load_spec(resolve_spec_path(args.spec)), cfg)
    if args.command == "expsum":
        return pl.expsum_report(load_spec(resolve_spec_path(args.spec)), cfg, extend=not args.no_extend)
    if args.command == "positivity":
        factors = _load_factors(args.factors) if args.factors else []
        factors += pl.random_local_factors(args.random, args.seed)
        if not factors and not args.zeta:
            raise InputError("give --factors, --random N or --zeta")
        return pl.positivity_report(factors, cfg, args.k_max, args.T, [_load_zeta(z) for z in args.zeta],
                                    args.T_dom)
    if args.command == "tau":
        return pl.tau_report(args.max_n, args.check_primes_up_to, cfg)
    if args.command == "verify-all":
        root = Path(args.data) if args.data else bundled_fixtures_dir()
        files = sorted(root.glob("*.json"))
        if not files:
            raise InputError(f"no fixtures in {root}")
        return pl.verify_all(files, cfg, positivity_count=args.positivity_count)
    raise InputError(f"unknown command {args.command}")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except InputError as exc:
        print(f"weillab: error: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(f"weillab: check failed: {exc}", file=sys.stderr)
        return 1
    except WeilLabError as exc:
        print(f"weillab: internal error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"weillab: error: {exc}", file=sys.stderr)
        return 2
    if args.emit_table:
        table = pl.flat_table(report.to_dict())
        sys.stdout.write("".join("\t".join(row) + "\n" for row in table))
        if args.out:
            _emit(report.dumps(), args.out)
    else:
        _emit(report.dumps(), args.out)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
