"""End-to-end runs that turn inputs into deterministic JSON reports.

Every report is a plain dict of strings, ints, bools and lists, so dumping it
with sorted keys gives byte-identical output for identical inputs.  Thread
counts and wall-clock timings are deliberately left out unless timings are
requested, because they would break that property.
"""

from __future__ import annotations

import json
import random
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__
from .errors import CheckFailure, InputError, NoRationalFit, WeilLabError
from .expsum import (DegreeDivisibleByP, _separate, abs_bound_check, exp_sum_series, hypotheses, kunneth_product,
                     lfunction_from_sums, purity_check)
from .geometry import CountSeries, VarietySpec, count_points, count_series, smoothness_probe
from .modulartau import delta_expansion, naive_delta_expansion, ramanujan_check
from .positivity import (LocalFactor, closed_point_factors, dominance_check,
                         tensor_local_factor_series, tensor_logderiv_series)
from .weilverify import (CLASS_TOL, ci_bound_check, duality_check, functional_equation_check,
                         weight_split)
from .zetarec import DEFAULT_HOLDOUT, expand_counts, hankel_zero_test, rational_reconstruct, zeta_series


@dataclass
class RunConfig:
    budget: int | None = None
    max_m: int | None = None
    holdout: int = DEFAULT_HOLDOUT
    dim: int | None = None
    tolerance: float | None = None
    threads: int = 1
    timings: bool = False

    def __post_init__(self):
        if self.budget is not None and self.budget < 1:
            raise InputError("budget must be >= 1")
        if self.holdout < 1:
            raise InputError("holdout must be >= 1")

    def echo(self) -> dict:
        # threads are excluded: reports must not depend on parallelism
        return {"budget": self.budget, "max_m": self.max_m, "holdout": self.holdout,
                "dim": self.dim, "tolerance": self.tolerance}


@dataclass
class Report:
    kind: str
    config: dict
    stages: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    hypotheses: dict = field(default_factory=dict)
    timings: dict | None = None

    def check(self, name: str, holds: bool, mode: str, **extra):
        self.checks.append({"name": name, "holds": bool(holds), "mode": mode, **extra})

    @property
    def passed(self) -> bool:
        return all(c["holds"] for c in self.checks if c["mode"] != "heuristic")

    def to_dict(self) -> dict:
        d = {"tool": "weillab", "version": __version__, "kind": self.kind, "config": self.config,
             "stages": self.stages, "checks": self.checks, "hypotheses": self.hypotheses,
             "passed": self.passed}
        if self.timings is not None:
            d["timings"] = self.timings
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


class _Clock:
    def __init__(self, on: bool):
        self.on, self.data, self.t = on, {}, time.perf_counter()

    def lap(self, name: str):
        if self.on:
            now = time.perf_counter()
            self.data[name] = f"{now - self.t:.3f}"
            self.t = now


# -- zeta ------------------------------------------------------------------------------

def suggested_max_m(spec: VarietySpec, holdout: int = DEFAULT_HOLDOUT) -> int:
    """Terms needed when the Betti numbers are those of a smooth model.

    Plane curves of degree d use 2g + 2 with g = (d-1)(d-2)/2, projective
    space P^n uses n + 1; anything else falls back to 6.  This is advice,
    not a guarantee: the auto-raise and the holdout catch a short guess.
    """
    if spec.model == "projective":
        if not spec.polys:
            return spec.n_amb + 1 + holdout
        if spec.n_amb == 3 and len(spec.polys) == 1:
            d = spec.polys[0].total_degree()
            return (d - 1) * (d - 2) + 2 + 1 + holdout
    return 6


def _record_counts(rep: Report, counts, series, raised: int):
    rep.stages["counts"] = [str(c) for c in counts.counts]
    rep.stages["series"] = [str(c) for c in series.coeffs]
    rep.stages["max_m_raised"] = raised


def zeta_report(spec: VarietySpec, cfg: RunConfig, smooth_probe_m: int = 1, max_raise: int = 8) -> Report:
    """count -> series -> reconstruction -> (with a dimension) the verification battery.

    Input and resource problems propagate as :class:`InputError`; a holdout
    mismatch or a failed check is recorded in the report.
    """
    rep = Report("zeta", {**cfg.echo(), "spec": spec.to_dict()})
    clock = _Clock(cfg.timings)
    n = cfg.dim if cfg.dim is not None else spec.declared_dim
    rep.hypotheses = {
        "model": spec.model,
        "proper": spec.model == "projective",
        "geometric_irreducibility": "assumed",
        "pure_dimension": "assumed" if n is not None else "not declared",
    }
    if spec.model == "projective":
        try:
            probe = smoothness_probe(spec, smooth_probe_m, cfg.budget, cfg.threads)
        except InputError as exc:
            probe = {"verdict": "not_checked", "reason": str(exc), "heuristic": True}
        rep.hypotheses["smoothness"] = probe
        rep.check("smoothness_probe", probe["verdict"] != "singular_point",
                  "exact" if probe["verdict"] == "singular_point" else "heuristic")
    else:
        rep.hypotheses["smoothness"] = {"verdict": "not_checked", "heuristic": True}
    max_m = cfg.max_m if cfg.max_m is not None else suggested_max_m(spec, cfg.holdout)
    counts = count_series(spec, max_m, cfg.budget, cfg.threads)
    raised = 0
    while True:
        series = zeta_series(counts)
        try:
            z = rational_reconstruct(series, cfg.holdout, counts.q)
            break
        except NoRationalFit:
            # several fits of the same minimal size: one more count decides
            if raised >= max_raise:
                raise
            raised += 1
            m = len(counts.counts) + 1
            counts = CountSeries(counts.q, counts.counts + (count_points(spec, m, cfg.budget, cfg.threads),))
        except CheckFailure as exc:
            _record_counts(rep, counts, series, raised)
            rep.check("holdout", False, "exact", error=str(exc))
            return _finish(rep, clock)
    clock.lap("count_and_reconstruct")
    _record_counts(rep, counts, series, raised)
    max_m = len(counts.counts)
    rep.stages["zeta"] = z.to_dict()
    rep.check("holdout", True, "exact", held_out=cfg.holdout)
    rep.check("roundtrip_counts", all(expand_counts(z, m) == counts[m] for m in range(1, max_m + 1)), "exact")
    dP, dQ = z.degrees
    k = max(0, dP - dQ + 1)
    if k + 2 * dQ < len(series.coeffs):
        # the recurrence given by Q kills every Hankel window past deg P
        rep.check("hankel_vanishes", hankel_zero_test(series.coeffs, dQ, k), "exact", size=dQ + 1, shift=k)
    if n is None:
        return _finish(rep, clock)
    tol = cfg.tolerance if cfg.tolerance is not None else CLASS_TOL
    split = None
    try:
        split = weight_split(z, n, tol)
        rep.stages["weight_split"] = split.to_dict()
        rep.check("weight_split", True, "float", tolerance=tol,
                  max_rel_deviation=f"{split.max_rel_deviation:.3e}")
    except CheckFailure as exc:
        rep.check("weight_split", False, "float", tolerance=tol, error=str(exc))
    clock.lap("weights")
    fe = functional_equation_check(z, n, split)
    rep.stages["functional_equation"] = fe.to_dict()
    rep.check("functional_equation", fe.holds, "exact", epsilon=fe.epsilon, chi=fe.chi)
    if fe.hypothesis_violation:
        rep.hypotheses["functional_equation"] = fe.hypothesis_violation
    if fe.rule_consistent is not None:
        rep.check("epsilon_rule", fe.rule_consistent, "exact", N=fe.N_mult)
    if split is not None:
        du = duality_check(split)
        rep.stages["duality"] = du.to_dict()
        rep.check("duality", du.holds, "float", tolerance=du.tolerance,
                  worst=f"{du.worst:.3e}")
        if spec.model == "projective" and spec.declared_dim is not None:
            ci = ci_bound_check(spec, z, split)
            rep.stages["ci_bound"] = ci
            rep.check("ci_bound", ci["holds"], "exact")
    return _finish(rep, clock)


def _finish(rep: Report, clock: _Clock) -> Report:
    if clock.on:
        rep.timings = clock.data
    return rep


# -- exponential sums ---------------------------------------------------------------------

def expsum_report(spec: VarietySpec, cfg: RunConfig, extend: bool = True, max_raise: int = 8) -> Report:
    """Sums S_m, the bound for every enumerated S_m, the L-function and its purity.

    When the minimal number of terms admits several fits, max-m is raised one
    step at a time (up to ``max_raise``) and the number of raises is reported.
    """
    rep = Report("expsum", {**cfg.echo(), "spec": spec.to_dict()})
    clock = _Clock(cfg.timings)
    hyp = hypotheses(spec)
    rep.hypotheses = hyp
    d, n, q = hyp["d"], hyp["n"], spec.q
    if d == 0:
        # constant Q: S_m = psi(c) q^(mn), nothing for the bound to say
        from .cyclotomic import CyclotomicInt
        c = sum(cf for _, cf in spec.polys[0].terms) % spec.p
        sums = exp_sum_series(spec, cfg.max_m or 3, cfg.budget, cfg.threads, False, cfg.holdout)
        rep.hypotheses["trivial_sum"] = True
        rep.stages["sums"] = sums.to_dict()
        ok = all(S == CyclotomicInt.zeta_power(spec.p, spec.a * m * c) * (q ** m) ** n
                 for m, S in enumerate(sums.sums, start=1))
        rep.check("trivial_sum", ok, "exact")
        return _finish(rep, clock)
    if not hyp["degree_prime_to_p"]:
        rep.hypotheses["warning"] = "degree divisible by p"
    need = (d - 1) ** n + cfg.holdout + 1
    max_m = cfg.max_m if cfg.max_m is not None else need
    raised = 0
    while True:
        with warnings.catch_warnings():
            # the divisibility is already recorded among the hypotheses
            warnings.simplefilter("ignore", DegreeDivisibleByP)
            sums = exp_sum_series(spec, max_m, cfg.budget, cfg.threads, extend, cfg.holdout)
        try:
            L = lfunction_from_sums(sums.sums, q, n, d, cfg.holdout, check_degree=False)
            break
        except NoRationalFit:
            if raised >= max_raise:
                raise
            raised += 1
            max_m += 1
        except CheckFailure as exc:
            L = None
            rep.check("lfunction", False, "exact", error=str(exc))
            break
    clock.lap("sums")
    rep.stages["sums"] = sums.to_dict()
    rep.stages["max_m_raised"] = raised
    for m, (S, prov) in enumerate(zip(sums.sums, sums.provenance), start=1):
        if prov != "enumerated":
            continue
        b = abs_bound_check(S, d, n, q ** m)
        rep.stages.setdefault("bounds", []).append({"m": m, **b})
        rep.check(f"bound_m{m}", b["holds"], b["mode"])
    if d == 2 and sums.provenance[0] == "enumerated":
        b = rep.stages["bounds"][0]
        rep.check("gauss_equality", b.get("equality", False), b["mode"])
    if L is not None:
        rep.stages["lfunction"] = L.to_dict()
        rep.check("lfunction_degree", L.degree == L.expected_degree, "exact",
                  degree=L.degree, expected=L.expected_degree)
        rep.check("lfunction_side", L.side_matches_parity, "exact", side=L.side)
        pur = purity_check(L)
        rep.stages["purity"] = pur
        rep.check("purity", pur["holds"], "float", tolerance=pur["tolerance"])
        sep = _separate(spec.polys[0])
        if n == 2 and sep is not None and sep[2] == 0 and sep[0] == 0 and sep[1][0][1] == sep[1][1][1]:
            one = VarietySpec.build(spec.p, spec.a, "affine", ["x"], [sep[1][0][1]])
            s1 = exp_sum_series(one, d + cfg.holdout + raised, cfg.budget, cfg.threads, extend, cfg.holdout)
            L1 = lfunction_from_sums(s1.sums, q, 1, d, cfg.holdout)
            rep.stages["kunneth_factor"] = L1.to_dict()
            rep.check("kunneth", kunneth_product(L1) == L.poly, "exact")
    clock.lap("lfunction")
    return _finish(rep, clock)


# -- positivity ------------------------------------------------------------------------------

def random_local_factors(count: int, seed: int = 0, max_deg: int = 4) -> list[LocalFactor]:
    """Constant term 1, other coefficients num/den with num in [-9, 9] and den in [1, 9]."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        deg = rng.randint(1, max_deg)
        coeffs = [Fraction(1)] + [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(deg)]
        out.append(LocalFactor(tuple(coeffs)))
    return out


def positivity_report(factors: Sequence[LocalFactor], cfg: RunConfig, k_max: int = 3, T: int = 20,
                      zetas: Sequence = (), T_dom: int = 15) -> Report:
    rep = Report("positivity", {**cfg.echo(), "k_max": k_max, "T": T, "T_dominance": T_dom,
                                "factors": len(factors)})
    clock = _Clock(cfg.timings)
    negatives = []
    for idx, f in enumerate(factors):
        for k in range(1, k_max + 1):
            try:
                tensor_logderiv_series(f, k, T)
                tensor_local_factor_series(f, k, T)
            except CheckFailure as exc:
                negatives.append({"factor": idx, "k": k, "error": str(exc)})
    rep.stages["negative_coefficients"] = negatives
    rep.check("nonnegative_series", not negatives, "exact", factors=len(factors))
    doms = []
    for name, z in zetas:
        facs, mult = closed_point_factors(z, T_dom)
        ok = dominance_check(facs, T_dom, mult)
        series_ok = z.series(T_dom) == _product_series(facs, mult, T_dom)
        doms.append({"zeta": name, "dominance": ok, "euler_product_matches": series_ok})
        rep.check(f"dominance_{name}", ok and series_ok, "exact")
    rep.stages["dominance"] = doms
    clock.lap("positivity")
    return _finish(rep, clock)


def _product_series(facs, mult, T):
    from .polynomial import series_mul, series_pow
    prod = [1] + [0] * T
    for f, e in zip(facs, mult):
        if e:
            prod = series_mul(prod, series_pow(f, e, T + 1), T + 1)
    return [int(c) for c in prod]


# -- tau --------------------------------------------------------------------------------------

def tau_report(max_n: int, primes_up_to: int, cfg: RunConfig, oracle_n: int = 200) -> Report:
    from .ffield import is_prime
    rep = Report("tau", {**cfg.echo(), "max_n": max_n, "check_primes_up_to": primes_up_to})
    clock = _Clock(cfg.timings)
    exp = delta_expansion(max_n)
    clock.lap("expansion")
    rows = [ramanujan_check(p, exp) for p in range(2, primes_up_to + 1) if is_prime(p)]
    rep.stages["primes"] = rows
    rep.check("ramanujan_bound", all(r["bound_holds"] for r in rows), "exact", primes=len(rows))
    rep.check("root_moduli", all(r["moduli_ok"] for r in rows), "float", tolerance=1e-9)
    n = min(oracle_n, max_n)
    rep.check("pentagonal_vs_naive", naive_delta_expansion(n).coeffs == exp.coeffs[:n], "exact", N=n)
    clock.lap("checks")
    return _finish(rep, clock)


# -- counts -----------------------------------------------------------------------------------

def count_report(spec: VarietySpec, cfg: RunConfig) -> Report:
    rep = Report("count", {**cfg.echo(), "spec": spec.to_dict()})
    clock = _Clock(cfg.timings)
    max_m = cfg.max_m if cfg.max_m is not None else 1
    counts = count_series(spec, max_m, cfg.budget, cfg.threads)
    rep.stages["q"] = str(spec.q)
    rep.stages["counts"] = [str(c) for c in counts.counts]
    clock.lap("count")
    return _finish(rep, clock)


# -- the exponential-sum grid ---------------------------------------------------------------------

def diagonal_spec(p: int, a: int, d: int, n: int) -> VarietySpec:
    """Q = x_1^d + ... + x_n^d as an affine spec."""
    names = ["x", "y", "z", "w"][:n] if n <= 4 else [f"x{i}" for i in range(n)]
    terms = [[1] + [d if j == i else 0 for j in range(n)] for i in range(n)]
    return VarietySpec.build(p, a, "affine", names, [terms], name=f"diag_q{p ** a}_d{d}_n{n}")


def expsum_grid(qs=((3, 1), (5, 1), (7, 1), (3, 2)), ds=(2, 3, 4), ns=(1, 2)):
    """Every diagonal Q with gcd(d, p) = 1 over the given fields."""
    return [diagonal_spec(p, a, d, n) for p, a in qs for d in ds if d % p for n in ns]


# -- verify-all -----------------------------------------------------------------------------------

def load_fixture(path) -> tuple[VarietySpec, dict]:
    """A variety spec plus the optional suite keys "expect" and "max_m"."""
    from .geometry import spec_from_dict
    from pathlib import Path
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    d.setdefault("name", Path(path).stem)
    meta = {"expect": d.get("expect", "pass"), "max_m": d.get("max_m")}
    if meta["expect"] not in ("pass", "violation"):
        raise InputError(f"{path}: expect must be 'pass' or 'violation'")
    return spec_from_dict(d), meta


def verify_all(fixtures: Sequence, cfg: RunConfig, positivity_count: int = 500, tau_n: int = 10000,
               tau_primes: int = 97) -> Report:
    """Run every fixture through the zeta battery, then the sum grid, positivity and tau.

    A fixture marked "violation" passes the suite when its own report fails.
    """
    rep = Report("verify-all", cfg.echo())
    clock = _Clock(cfg.timings)
    rows, zetas = [], []
    for path in fixtures:
        spec, meta = load_fixture(path)
        sub = RunConfig(cfg.budget, meta["max_m"], cfg.holdout, None, cfg.tolerance, cfg.threads)
        try:
            r = zeta_report(spec, sub)
            outcome = "pass" if r.passed else "violation"
            failed = [c["name"] for c in r.checks if not c["holds"] and c["mode"] != "heuristic"]
            if "zeta" in r.stages and outcome == "pass":
                from .zetarec import ZetaFunction
                zetas.append((spec.name, ZetaFunction.from_dict(r.stages["zeta"])))
        except WeilLabError as exc:
            outcome, failed = "error", [type(exc).__name__]
        rows.append({"fixture": spec.name, "expect": meta["expect"], "outcome": outcome, "failed": failed})
        rep.check(f"fixture_{spec.name}", outcome == meta["expect"], "exact")
        clock.lap(f"fixture_{spec.name}")
    rep.stages["fixtures"] = rows
    grid = []
    for spec in expsum_grid():
        try:
            r = expsum_report(spec, RunConfig(cfg.budget, None, cfg.holdout, None, None, cfg.threads))
            grid.append({"case": spec.name, "passed": r.passed,
                         "failed": [c["name"] for c in r.checks if not c["holds"]]})
        except WeilLabError as exc:
            grid.append({"case": spec.name, "passed": False, "failed": [type(exc).__name__]})
        rep.check(f"expsum_{spec.name}", grid[-1]["passed"], "exact")
    rep.stages["expsum"] = grid
    clock.lap("expsum")
    pos = positivity_report(random_local_factors(positivity_count), RunConfig(), zetas=zetas)
    rep.stages["positivity"] = {"passed": pos.passed, "checks": pos.checks}
    rep.check("positivity", pos.passed, "exact")
    clock.lap("positivity")
    tau = tau_report(tau_n, tau_primes, RunConfig())
    rep.stages["tau"] = {"passed": tau.passed, "checks": tau.checks}
    rep.check("tau", tau.passed, "exact")
    clock.lap("tau")
    return _finish(rep, clock)


# -- flat tables --------------------------------------------------------------------------------

def flat_table(report: dict) -> list[list[str]]:
    """A header plus rows, for plotting outside the package."""
    kind, st = report["kind"], report["stages"]
    if kind in ("count", "zeta"):
        return [["m", "N_m"]] + [[str(m), c] for m, c in enumerate(st.get("counts", []), start=1)]
    if kind == "expsum":
        prov = st.get("sums", {}).get("provenance", [])
        bounds = {b["m"]: b for b in st.get("bounds", [])}
        rows = [["m", "provenance", "abs", "bound", "holds"]]
        for m, pv in enumerate(prov, start=1):
            b = bounds.get(m, {})
            rows.append([str(m), pv, b.get("abs", ""), b.get("bound", ""), str(b.get("holds", ""))])
        return rows
    if kind == "tau":
        return [["p", "a_p", "bound_holds", "worst_rel_deviation"]] + [
            [str(r["p"]), r["a_p"], str(r["bound_holds"]), r["worst_rel_deviation"]] for r in st["primes"]]
    return [["check", "holds", "mode"]] + [[c["name"], str(c["holds"]), c["mode"]] for c in report["checks"]]
