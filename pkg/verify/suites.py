"""Named verification suites with seeded, parallel trials."""
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.constants import (
    STATUS_CONVERGED, SUITE_BETA_CANONICAL, SUITE_BETA_CHARACTERIZATION, SUITE_BETA_SIZE_BOUND,
    SUITE_BETA_TO_COVERING, SUITE_CANONICAL_GUARANTEE, SUITE_COVERING_TO_BETA, SUITE_DGA, SUITE_EQUIVALENCE,
    SUITE_HYBRID, SUITE_INCOHERENT_GROWTH, SUITE_INCOHERENT_LEBESGUE, SUITE_PROPERTY_A, SUITE_SELF_CHECKS,
    SUITE_WCGA_CO_RATE, SUITE_WCGA_RATE, SUITE_WGAFR_CO_RATE
)
from config.settings import settings
from descent.algorithms import proof_step_violations, run_wcga_co, run_wgafr_co, write_descent_csv
from descent.energy import Potential, check_energy, make_norm_composite_energy, make_quadratic_energy
from descent.equivalence import check_equivalence_co
from dictionary.atomic_norm import check_R1_beta
from dictionary.atoms import (
    build_canonical, build_equiangular, build_incoherent, build_random_sphere
)
from dictionary.covering import (
    covering_from_beta, dictionary_from_covering, equispaced_circle_covering, verify_covering
)
from dictionary.metrics import beta_bruteforce, beta_canonical, beta_cardinality_bound, beta_upper
from greedy.chebyshev import run_wcga, run_woga
from greedy.config import GreedyConfig
from greedy.dga import dga_decrease_violations, run_dga
from greedy.guarantees import attach_guarantee
from greedy.pursuit import run_hybrid, run_wga
from greedy.relaxed import run_wgafr
from greedy.trace import Trace, write_trace_csv
from spaces.modulus import estimate_modulus
from spaces.norms import directional_derivative, dual_norm, norm, norming_functional, pair
from spaces.space import SmoothSpace
from utils.errors import InvalidParameterError, WindowTooSmallError
from utils.formatters import format_verdict
from verify.checks import check_lebesgue, explore_property_A_lebesgue
from verify.experiments import a1_target, gaussian_target, perturb, power_law_target, sparse_target
from verify.oracles import IncoherenceProfile
from verify.rates import check_exponential, fit_rate

logger = logging.getLogger(__name__)

RATE_WINDOW = (16, 256)
# finite-termination algorithms measured where d stays well above the window
WIDE_WINDOW = (16, 64)
WIDE_D = 256
WIDE_N = 512
PASS_FRACTION = 0.8


@dataclass
class SuiteBudget:
    """Trial count, wall-clock cap and worker count for one suite."""

    seeds: Optional[int] = None
    max_seconds: float = math.inf
    workers: int = field(default_factory=lambda: settings.WORKERS)

    def __post_init__(self):
        if self.seeds is not None and self.seeds < 1:
            raise InvalidParameterError("seeds", "must be at least 1")
        if self.max_seconds <= 0:
            raise InvalidParameterError("max_seconds", "must be positive")
        if self.workers < 1:
            raise InvalidParameterError("workers", "must be at least 1")


@dataclass
class SuiteReport:
    """Suite outcome; passed is None for exploratory suites."""

    suite: str
    spec: dict
    seed: int
    metrics: dict
    passed: Optional[bool]
    artifacts: List[str] = field(default_factory=list)
    created_at: str = ""

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "spec": self.spec,
            "seed": self.seed,
            "metrics": self.metrics,
            "pass": self.passed,
            "artifacts": self.artifacts,
            "created_at": self.created_at,
        }


@dataclass
class SuiteContext:
    budget: SuiteBudget
    seed: int
    out_dir: Optional[str]
    deadline: float

    def seeds(self, default: int) -> List[int]:
        count = self.budget.seeds or default
        return [self.seed * 1000 + k for k in range(count)]

    def artifact(self, name: str) -> Optional[str]:
        if self.out_dir is None:
            return None
        return os.path.join(self.out_dir, name)


SuiteOutcome = Tuple[dict, dict, Optional[bool], List[str]]


def run_trials(trial: Callable[[int], dict], seeds: Sequence[int], ctx: SuiteContext) -> List[Optional[dict]]:
    """
    Run trial(seed) for each seed on the worker pool.

    Results come back in seed order whatever the worker count; trials
    that would start after the deadline are skipped and returned as None.
    """
    def guarded(seed: int) -> Optional[dict]:
        if time.monotonic() > ctx.deadline:
            return None
        return trial(seed)

    if ctx.budget.workers == 1:
        return [guarded(seed) for seed in seeds]
    with ThreadPoolExecutor(max_workers=ctx.budget.workers) as pool:
        return list(pool.map(guarded, seeds))


def _tally(results: List[Optional[dict]], threshold: float = 1.0) -> Tuple[dict, bool]:
    completed = [r for r in results if r is not None]
    passes = sum(1 for r in completed if r["pass"])
    fraction = passes / len(completed) if completed else 0.0
    summary = {
        "launched": len(results),
        "completed": len(completed),
        "passed_trials": passes,
        "pass_fraction": fraction,
        "trials": completed,
    }
    return summary, bool(completed) and fraction >= threshold - 1e-12


def _rate_verdict(values, max_slope: float, floor: float, converged: bool,
                  window: Tuple[int, int] = RATE_WINDOW) -> dict:
    """Slope check on window; a run that converged before the window fills passes."""
    try:
        fit = fit_rate(values, window, floor=floor)
    except WindowTooSmallError:
        return {"slope": None, "converged": converged, "pass": converged}
    return {"slope": fit.slope, "converged": converged, "pass": fit.slope <= max_slope}


def _save_trace(ctx: SuiteContext, trace: Trace, name: str, artifacts: List[str]):
    path = ctx.artifact(name)
    if path is not None:
        write_trace_csv(trace, path)
        artifacts.append(path)


# Suites

def _suite_beta_canonical(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"grid_2d": 1_000_000, "restarts": 64, "upper_dims": [4, 16, 64]}
    metrics = {}
    ok = True
    for d, resolution, tol in ((2, 1_000_000, 1e-4), (3, settings.BETA_GRID_3D, 1e-3)):
        estimate = beta_bruteforce(build_canonical(SmoothSpace.euclidean(d)), grid_resolution=resolution)
        exact = d ** -0.5
        passed = abs(estimate.upper - exact) <= tol and estimate.lower <= exact + 1e-12
        metrics[f"bruteforce_d{d}"] = {**estimate.as_dict(), "exact": exact, "pass": passed}
        ok = ok and passed
    for d in spec["upper_dims"]:
        estimate = beta_upper(build_canonical(SmoothSpace.euclidean(d)), restarts=64, seed=ctx.seed)
        exact = d ** -0.5
        passed = abs(estimate.upper - exact) <= 1e-3
        metrics[f"multistart_d{d}"] = {**estimate.as_dict(), "exact": exact, "pass": passed}
        ok = ok and passed
    return spec, metrics, ok, []


def _suite_canonical_guarantee(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 2, "dictionary": "canonical", "t": 1.0, "m_max": 50, "algorithms": ["woga", "wcga", "wgafr"]}
    sp = SmoothSpace.euclidean(2)
    canonical = build_canonical(sp)
    certified = beta_canonical(2).lower
    cfg = GreedyConfig(t=1.0, max_iter=50)
    artifacts: List[str] = []
    first = ctx.seeds(20)[0]

    def trial(seed: int) -> dict:
        rng = np.random.default_rng(seed)
        f0 = gaussian_target(2, rng)
        random_D = build_random_sphere(sp, 6, seed=seed)
        random_beta = beta_bruteforce(random_D).lower
        result = {"seed": seed, "pass": True}
        runs = (
            ("woga", lambda: run_woga(f0, canonical, cfg), certified),
            ("wcga", lambda: run_wcga(f0, canonical, sp, cfg), certified),
            ("wgafr", lambda: run_wgafr(f0, canonical, sp, cfg), certified),
            ("wcga_random", lambda: run_wcga(f0, random_D, sp, cfg), random_beta),
        )
        for name, run, beta in runs:
            if beta <= 0:
                continue
            trace = attach_guarantee(run(), sp, beta, cfg.t)
            report = check_exponential(trace.residual_norms(), trace.factor)
            result[name] = report.as_dict()
            result["pass"] = result["pass"] and report.passed
            if seed == first and name == "wcga":
                _save_trace(ctx, trace, f"{SUITE_CANONICAL_GUARANTEE}_wcga_seed{seed}.csv", artifacts)
        return result

    summary, ok = _tally(run_trials(trial, ctx.seeds(20), ctx))
    return spec, summary, ok, artifacts


def _suite_wcga_rate(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 16, "N": 64, "n_atoms": 20, "window": list(RATE_WINDOW), "max_slope": -0.4, "eps": 1e-3,
            "wide": {"d": WIDE_D, "N": WIDE_N, "target": "power_law", "window": list(WIDE_WINDOW),
                     "algorithms": ["wcga", "woga"]}}
    sp = SmoothSpace.euclidean(16)
    wide_sp = SmoothSpace.euclidean(WIDE_D)
    cfg = GreedyConfig(max_iter=256)
    wide_cfg = GreedyConfig(max_iter=WIDE_WINDOW[1])
    eps = spec["eps"]
    artifacts: List[str] = []
    first = ctx.seeds(10)[0]

    def trial(seed: int) -> dict:
        rng = np.random.default_rng(seed)
        D = build_random_sphere(sp, 64, seed=seed)
        f0 = a1_target(D, 20, rng=rng)
        noisy = perturb(f0, eps, rng)
        result = {"seed": seed, "pass": True}
        runs = (
            ("wcga", lambda f: run_wcga(f, D, sp, cfg)),
            ("wgafr", lambda f: run_wgafr(f, D, sp, cfg)),
            ("woga", lambda f: run_woga(f, D, cfg)),
        )
        for name, run in runs:
            trace = run(f0)
            verdict = _rate_verdict(
                trace.residual_norms(), -0.4, cfg.stop_norm, trace.status == STATUS_CONVERGED
            )
            plateau = float(run(noisy).residual_norms()[-1])
            verdict["noisy_residual"] = plateau
            verdict["noise_pass"] = plateau <= 2.0 * eps * 1.5
            result[name] = verdict
            result["pass"] = result["pass"] and verdict["pass"] and verdict["noise_pass"]
            if seed == first:
                _save_trace(ctx, trace, f"{SUITE_WCGA_RATE}_{name}_seed{seed}.csv", artifacts)

        wide_D = build_random_sphere(wide_sp, WIDE_N, seed=seed)
        wide_f0 = power_law_target(wide_D, rng=rng)
        wide_runs = (
            ("wcga", lambda f: run_wcga(f, wide_D, wide_sp, wide_cfg)),
            ("woga", lambda f: run_woga(f, wide_D, wide_cfg)),
        )
        for name, run in wide_runs:
            trace = run(wide_f0)
            verdict = _rate_verdict(trace.residual_norms(), -0.4, wide_cfg.stop_norm, False, WIDE_WINDOW)
            result[f"{name}_wide"] = verdict
            result["pass"] = result["pass"] and verdict["pass"]
        return result

    summary, ok = _tally(run_trials(trial, ctx.seeds(10), ctx), PASS_FRACTION)
    return spec, summary, ok, artifacts


def _descent_rate_suite(ctx: SuiteContext, algorithm: str) -> Tuple[dict, bool, List[str]]:
    sp = SmoothSpace.euclidean(16)
    cfg = GreedyConfig(max_iter=256)
    run = run_wcga_co if algorithm == "wcga_co" else run_wgafr_co
    artifacts: List[str] = []
    first = ctx.seeds(10)[0]

    def trial(seed: int) -> dict:
        rng = np.random.default_rng(seed)
        D = build_random_sphere(sp, 64, seed=seed)
        E = make_quadratic_energy(a1_target(D, 20, rng=rng))
        trace = run(E, D, sp, cfg)
        gaps = trace.gaps()
        verdict = _rate_verdict(gaps, -0.8, 0.5 * cfg.stop_norm ** 2, trace.status == STATUS_CONVERGED)
        if seed == first and ctx.out_dir is not None:
            path = ctx.artifact(f"{algorithm}_seed{seed}.csv")
            write_descent_csv(trace, path)
            artifacts.append(path)
        return {"seed": seed, **verdict}

    summary, ok = _tally(run_trials(trial, ctx.seeds(10), ctx), PASS_FRACTION)
    return summary, ok, artifacts


def _suite_wgafr_co_rate(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 16, "N": 64, "energy": "quadratic", "algorithm": "wgafr_co",
            "window": list(RATE_WINDOW), "max_slope": -0.8}
    summary, ok, artifacts = _descent_rate_suite(ctx, "wgafr_co")
    return spec, summary, ok, artifacts


def _suite_wcga_co_rate(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 16, "N": 64, "energy": "quadratic", "algorithm": "wcga_co",
            "window": list(RATE_WINDOW), "max_slope": -0.8, "step_check_d": 2,
            "wide": {"d": WIDE_D, "N": WIDE_N, "target": "power_law", "window": list(WIDE_WINDOW)}}
    summary, ok, artifacts = _descent_rate_suite(ctx, "wcga_co")

    wide_sp = SmoothSpace.euclidean(WIDE_D)
    wide_cfg = GreedyConfig(max_iter=WIDE_WINDOW[1])

    def wide_trial(seed: int) -> dict:
        D = build_random_sphere(wide_sp, WIDE_N, seed=seed)
        E = make_quadratic_energy(power_law_target(D, rng=np.random.default_rng(seed)))
        trace = run_wcga_co(E, D, wide_sp, wide_cfg)
        verdict = _rate_verdict(trace.gaps(), -0.8, 0.5 * wide_cfg.stop_norm ** 2, False, WIDE_WINDOW)
        return {"seed": seed, **verdict}

    wide_summary, wide_ok = _tally(run_trials(wide_trial, ctx.seeds(10), ctx), PASS_FRACTION)
    summary["wide"] = wide_summary

    sp = SmoothSpace.euclidean(2)
    canonical = build_canonical(sp)
    beta = beta_canonical(2).lower
    step_results = []
    for seed in ctx.seeds(10):
        E = make_quadratic_energy(gaussian_target(2, np.random.default_rng(seed)))
        for run in (run_wcga_co, run_wgafr_co):
            trace = run(E, canonical, sp, GreedyConfig(max_iter=50), beta=beta)
            violations = proof_step_violations(trace.gaps(), trace.proof_B, E.q)
            step_results.append({"seed": seed, "algorithm": trace.algorithm, "proof_B": trace.proof_B,
                                 "violations": len(violations), "pass": not violations})
    steps_ok = all(r["pass"] for r in step_results)
    summary["step_inequality"] = step_results
    return spec, summary, ok and wide_ok and steps_ok, artifacts


def _suite_beta_size_bound(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 3, "a": [2, 3], "tol": 1e-3}
    sp = SmoothSpace.euclidean(3)

    def trial(seed: int) -> dict:
        rng = np.random.default_rng(seed)
        a = 2 if seed % 2 == 0 else 3
        N = int(rng.integers(3, 3 ** a + 1))
        D = build_random_sphere(sp, N, seed=seed)
        estimate = beta_bruteforce(D)
        bound = beta_cardinality_bound(3, a)
        vacuous = bound >= 1.0
        return {"seed": seed, "a": a, "N": N, "beta_upper": estimate.upper, "bound": bound,
                "vacuous": vacuous, "pass": vacuous or estimate.upper <= bound + spec["tol"]}

    summary, ok = _tally(run_trials(trial, ctx.seeds(100), ctx))
    summary["vacuous_trials"] = sum(1 for r in summary["trials"] if r["vacuous"])
    return spec, summary, ok, []


def _suite_beta_characterization(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 2, "n_samples": 32, "max_width": 0.1, "random_dictionaries": ctx.budget.seeds or 5}
    sp = SmoothSpace.euclidean(2)
    dictionaries = [build_canonical(sp), build_equiangular(3)]
    dictionaries += [build_random_sphere(sp, 6, seed=s) for s in ctx.seeds(5)]

    def trial(index: int) -> dict:
        D = dictionaries[index]
        report = check_R1_beta(D, n_samples=spec["n_samples"], seed=ctx.seed + index)
        lo, hi = report.product_bracket
        contains = lo <= 1.0 + 1e-9 and hi >= 1.0 - 1e-9
        return {"dictionary": D.label, **report.as_dict(), "width": report.product_width,
                "pass": report.passed and contains and report.product_width <= spec["max_width"]}

    summary, ok = _tally(run_trials(trial, list(range(len(dictionaries))), ctx))
    return spec, summary, ok, []


def _suite_incoherent_lebesgue(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 20, "N": 40, "mu": 0.25, "m": [1, 2, 3], "C1": 2, "C2": 3.0, "tol": 1e-8}

    def trial(seed: int) -> dict:
        rng = np.random.default_rng(seed)
        D = build_incoherent(20, 40, 0.25, max_attempts=5_000_000, seed=seed)
        result = {"seed": seed, "achieved_N": D.N, "pass": True}
        for m in spec["m"]:
            f0, _, _ = sparse_target(D, m, rng)
            report = check_lebesgue(D, f0, m)
            exact = report.sigma <= 1e-10 and report.residual <= spec["tol"]
            result[f"m{m}"] = {**report.as_dict(), "exact_recovery": exact}
            result["pass"] = result["pass"] and exact and report.passed
        return result

    summary, ok = _tally(run_trials(trial, ctx.seeds(20), ctx))
    return spec, summary, ok, []


def _suite_covering_to_beta(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 2, "radii": [0.3, 0.5, 0.7], "tol": 1e-3}
    metrics = {}
    ok = True
    for r in spec["radii"]:
        cov = equispaced_circle_covering(r)
        covered = verify_covering(cov, seed=ctx.seed)
        D = dictionary_from_covering(cov)
        estimate = beta_bruteforce(D)
        claim = D.metadata["beta_lower_claim"]
        passed = covered.passed and estimate.lower >= claim - spec["tol"]
        metrics[f"r{r:g}"] = {"centers": D.N, "claim": claim, "beta": estimate.as_dict(),
                              "covering": covered.as_dict(), "pass": passed}
        ok = ok and passed
    return spec, metrics, ok, []


def _suite_beta_to_covering(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"dims": [2, 3], "samples": settings.COVERING_SAMPLES}
    metrics = {}
    ok = True
    for d in spec["dims"]:
        D = build_canonical(SmoothSpace.euclidean(d))
        cov = covering_from_beta(D, beta=beta_canonical(d).lower)
        report = verify_covering(cov, seed=ctx.seed)
        metrics[f"canonical_d{d}"] = {"radius": cov.radius, **report.as_dict()}
        ok = ok and report.passed
    for seed in ctx.seeds(3):
        D = build_random_sphere(SmoothSpace.euclidean(2), 5, seed=seed)
        cov = covering_from_beta(D)
        report = verify_covering(cov, seed=seed)
        metrics[f"random_seed{seed}"] = {"beta": cov.metadata["beta"], "radius": cov.radius, **report.as_dict()}
        ok = ok and report.passed
    return spec, metrics, ok, []


def _suite_equivalence(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"p": 2, "potential": "square", "max_d": 16, "tie_tol": settings.TIE_TOL}

    def trial(seed: int) -> dict:
        rng = np.random.default_rng(seed)
        d = int(rng.integers(2, 17))
        N = int(rng.integers(d, 4 * d + 1))
        sp = SmoothSpace.euclidean(d)
        D = build_random_sphere(sp, N, seed=seed)
        report = check_equivalence_co(gaussian_target(d, rng), D, sp, GreedyConfig(max_iter=2 * d))
        return {"seed": seed, "d": d, "N": N, **report.as_dict()}

    summary, ok = _tally(run_trials(trial, ctx.seeds(50), ctx))
    return spec, summary, ok, []


def _suite_dga(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 8, "N": 32, "t": 1.0, "b": 0.5, "max_iter": 10000, "relative_target": 1e-3}
    sp = SmoothSpace.euclidean(8)
    plane = SmoothSpace.euclidean(2)
    canonical = build_canonical(plane)

    def trial(seed: int) -> dict:
        rng = np.random.default_rng(seed)
        D = build_random_sphere(sp, 32, seed=seed)
        f0 = gaussian_target(8, rng)
        target = 1e-3 * norm(f0, sp)
        trace = run_dga(f0, D, sp, GreedyConfig(t=1.0, b=0.5, max_iter=10000, stop_norm=target))
        violations = dga_decrease_violations(trace, 1.0, 0.5)
        final = float(trace.residual_norms()[-1])

        g0 = gaussian_target(2, rng)
        planar = run_dga(g0, canonical, plane, GreedyConfig(t=1.0, b=0.5, max_iter=10000, stop_norm=1e-10))
        sum_bound = norm(g0, plane) * math.sqrt(2.0) / (1.0 * (1.0 - 0.5)) + 1e-6
        return {
            "seed": seed,
            "iterations": trace.iterations,
            "final_ratio": final / trace.initial_norm,
            "violations": len(violations),
            "canonical_sum": planar.coeff_sum,
            "canonical_bound": sum_bound,
            "pass": final <= target and not violations and planar.coeff_sum <= sum_bound,
        }

    summary, ok = _tally(run_trials(trial, ctx.seeds(20), ctx))
    return spec, summary, ok, []


def _suite_self_checks(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"exponents": [1.5, 2.0, 3.0, 4.0], "samples": 500, "fd_step": 1e-5}
    rng = np.random.default_rng(ctx.seed)
    metrics = {}
    ok = True
    for p in spec["exponents"]:
        sp = SmoothSpace.lp(5, p)
        pairing = 0.0
        dual = 0.0
        derivative = 0.0
        for _ in range(spec["samples"]):
            x = rng.standard_normal(5)
            y = rng.standard_normal(5)
            F = norming_functional(x, sp)
            size = norm(x, sp)
            pairing = max(pairing, abs(pair(F, x) - size) / max(1.0, size))
            dual = max(dual, abs(dual_norm(F, sp) - 1.0))
            unit_x = x / size
            unit_y = y / norm(y, sp)
            derivative = max(derivative, abs(
                directional_derivative(unit_x, unit_y, sp) - pair(norming_functional(unit_x, sp), unit_y)
            ))
        modulus = estimate_modulus(sp, [0.01, 0.02, 0.05, 0.1, 0.2, 0.5], 200, seed=ctx.seed)
        passed = pairing <= 1e-10 and dual <= 1e-10 and derivative <= 1e-4 and modulus.dominated
        metrics[f"p{p:g}"] = {"pairing": pairing, "dual_norm": dual, "derivative": derivative,
                              "modulus_dominated": modulus.dominated, "pass": passed}
        ok = ok and passed

    euclid = SmoothSpace.euclidean(4)
    center = rng.standard_normal(4)
    center /= np.linalg.norm(center)
    energies = {
        "quadratic": make_quadratic_energy(rng.standard_normal(4)),
        "composite_square": make_norm_composite_energy(center, Potential.square(), euclid),
        "composite_quartic": make_norm_composite_energy(center, Potential.quartic(), euclid, q=2.0, gamma=12.0),
    }
    for name, E in energies.items():
        report = check_energy(E, euclid, n_samples=1000, seed=ctx.seed)
        metrics[name] = report.as_dict()
        ok = ok and report.passed
    return spec, metrics, ok, []


def _suite_property_a(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 8, "N": 12, "mu": 0.3, "K": 3, "Dmax": 6, "r": 0.5}
    profile = IncoherenceProfile(K=3, Dmax=6, r=0.5)

    def trial(seed: int) -> dict:
        rng = np.random.default_rng(seed)
        D = build_incoherent(8, 12, 0.3, seed=seed)
        if D.N < profile.K:
            return {"seed": seed, "achieved_N": D.N, "pass": None}
        f0, support, coefficients = sparse_target(D, profile.K, rng)
        return {"seed": seed, "achieved_N": D.N,
                **explore_property_A_lebesgue(D, f0, support, coefficients, profile)}

    results = run_trials(trial, ctx.seeds(5), ctx)
    return spec, {"trials": [r for r in results if r is not None]}, None, []


def _suite_incoherent_growth(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 32, "mus": [0.25, 0.3, 0.35, 0.4], "N_target": 1000, "max_attempts": 20000}
    rows = []
    for mu in spec["mus"]:
        D = build_incoherent(spec["d"], spec["N_target"], mu, max_attempts=spec["max_attempts"], seed=ctx.seed)
        rows.append({"mu": mu, "d_mu_squared": D.metadata["d_mu_squared"], "achieved": D.N,
                     "log_achieved": D.metadata["log_achieved"]})
    xs = [r["d_mu_squared"] for r in rows]
    ys = [r["log_achieved"] for r in rows]
    slope = float(np.polyfit(xs, ys, 1)[0])
    return spec, {"rows": rows, "trend_slope": slope, "trend_increasing": slope > 0}, None, []


def _suite_hybrid(ctx: SuiteContext) -> SuiteOutcome:
    spec = {"d": 16, "N": 64, "mu": 0.5, "m": 200, "n_atoms": 20}
    cfg = GreedyConfig(max_iter=200)

    def trial(seed: int) -> dict:
        rng = np.random.default_rng(seed)
        D = build_incoherent(16, 64, 0.5, seed=seed)
        f0 = a1_target(D, min(20, D.N), rng=rng)
        hybrid = float(run_hybrid(f0, D, cfg).residual_norms()[-1])
        pure = float(run_wga(f0, D, cfg).residual_norms()[-1])
        return {"seed": seed, "hybrid": hybrid, "wga": pure, "pass": hybrid <= pure * (1.0 + 1e-9) + 1e-14}

    summary, _ = _tally(run_trials(trial, ctx.seeds(50), ctx))
    return spec, summary, None, []


SUITES: Dict[str, Callable[[SuiteContext], SuiteOutcome]] = {
    SUITE_BETA_CANONICAL: _suite_beta_canonical,
    SUITE_CANONICAL_GUARANTEE: _suite_canonical_guarantee,
    SUITE_WCGA_RATE: _suite_wcga_rate,
    SUITE_WGAFR_CO_RATE: _suite_wgafr_co_rate,
    SUITE_WCGA_CO_RATE: _suite_wcga_co_rate,
    SUITE_BETA_SIZE_BOUND: _suite_beta_size_bound,
    SUITE_BETA_CHARACTERIZATION: _suite_beta_characterization,
    SUITE_INCOHERENT_LEBESGUE: _suite_incoherent_lebesgue,
    SUITE_COVERING_TO_BETA: _suite_covering_to_beta,
    SUITE_BETA_TO_COVERING: _suite_beta_to_covering,
    SUITE_EQUIVALENCE: _suite_equivalence,
    SUITE_DGA: _suite_dga,
    SUITE_SELF_CHECKS: _suite_self_checks,
    SUITE_PROPERTY_A: _suite_property_a,
    SUITE_INCOHERENT_GROWTH: _suite_incoherent_growth,
    SUITE_HYBRID: _suite_hybrid,
}


def run_theorem_suite(name: str, budget: Optional[SuiteBudget] = None, seed: int = 0,
                      out_dir: Optional[str] = None) -> SuiteReport:
    """
    Run one named suite.

    Args:
        name: Suite name (see SUITES)
        budget: Trials, wall-clock cap and workers
        seed: Base seed; trial seeds are derived from it
        out_dir: Directory for trace artifacts (none written when omitted)

    Returns:
        SuiteReport; failures are report contents, not exceptions

    Raises:
        InvalidParameterError: For an unknown suite name
    """
    if name not in SUITES:
        raise InvalidParameterError("suite", f"unknown suite '{name}'; choose from {sorted(SUITES)}")
    budget = budget or SuiteBudget()
    ctx = SuiteContext(budget=budget, seed=seed, out_dir=out_dir,
                       deadline=time.monotonic() + budget.max_seconds)
    started = time.monotonic()
    logger.info(f"Running suite {name} (seed={seed}, workers={budget.workers})")
    spec, metrics, passed, artifacts = SUITES[name](ctx)
    report = SuiteReport(
        suite=name,
        spec=spec,
        seed=seed,
        metrics=metrics,
        passed=passed,
        artifacts=artifacts,
        created_at=datetime.now(timezone.utc).isoformat(),
    )
    logger.info(f"Suite {name}: {format_verdict(passed)} in {time.monotonic() - started:.1f}s")
    return report
