"""The `run` command: a configured experiment over one or more seeds, its trace CSVs and report JSON."""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from cli.config import RunConfig, load_run_config
from config.constants import (
    ALGO_DGA, ALGO_HYBRID, ALGO_WCGA, ALGO_WCGA_CO, ALGO_WGA, ALGO_WGAFR, ALGO_WGAFR_CO, ALGO_WOGA,
    EXIT_FAILURE, EXIT_OK, RECIPE_CANONICAL, RECIPE_EQUIANGULAR, RECIPE_FILE, RECIPE_INCOHERENT,
    RECIPE_LASSO, RECIPE_RANDOM_SPHERE, STATUS_CONVERGED, STATUS_OPTIMUM, TARGET_A1, TARGET_ATOM,
    TARGET_LASSO, TARGET_SPARSE
)
from descent.algorithms import DescentTrace, run_wcga_co, run_wgafr_co, write_descent_csv
from descent.energy import Energy, Potential, make_norm_composite_energy, make_quadratic_energy
from descent.lasso import coefficients_to_x, lasso_recast, make_lasso_instance
from dictionary.atoms import (
    Dictionary, build_canonical, build_equiangular, build_incoherent, build_random_sphere
)
from dictionary.io import load_dictionary
from greedy.chebyshev import run_wcga, run_woga
from greedy.dga import run_dga
from greedy.guarantees import attach_guarantee
from greedy.pursuit import run_hybrid, run_wga
from greedy.relaxed import run_wgafr
from greedy.trace import Trace, write_trace_csv
from utils.errors import ConfigError, WindowTooSmallError
from utils.formatters import format_verdict
from utils.io import write_json
from verify.experiments import a1_target, perturb, sparse_target
from verify.rates import fit_rate

logger = logging.getLogger(__name__)

TRACE_FILE = "trace.csv"
REPORT_FILE = "report.json"


@dataclass
class Problem:
    """Dictionary, target and (for descent runs) energy of one experiment."""

    D: Dictionary
    f0: np.ndarray
    energy: Optional[Energy] = None
    extras: Dict[str, Any] = field(default_factory=dict)


@dataclass
class RunResult:
    traces: List[Union[Trace, DescentTrace]]
    report: Dict[str, Any]
    passed: bool
    artifacts: List[str] = field(default_factory=list)


def build_dictionary(cfg: RunConfig) -> Tuple[Dictionary, Dict[str, Any]]:
    """
    Build the configured dictionary.

    Returns:
        Tuple of (dictionary, extras); lasso runs carry their instance in extras
    """
    spec = cfg.dictionary
    recipe = spec["recipe"]
    seed = cfg.seed if spec["seed"] is None else spec["seed"]
    extras: Dict[str, Any] = {}

    if recipe == RECIPE_CANONICAL:
        D = build_canonical(cfg.space)
    elif recipe == RECIPE_RANDOM_SPHERE:
        D = build_random_sphere(cfg.space, spec["N"], seed=seed)
    elif recipe == RECIPE_INCOHERENT:
        if not cfg.space.is_euclidean:
            raise ConfigError("dictionary.recipe", "incoherent packings live in l_2")
        D = build_incoherent(cfg.space.d, spec["N"], spec["mu"], max_attempts=spec["max_attempts"], seed=seed)
    elif recipe == RECIPE_EQUIANGULAR:
        D = build_equiangular(spec["n"])
    elif recipe == RECIPE_FILE:
        D = load_dictionary(spec["path"], ambient=cfg.space)
        if D.d != cfg.space.d:
            raise ConfigError("dictionary.path", f"file holds atoms of dimension {D.d}, space.d is {cfg.space.d}")
    elif recipe == RECIPE_LASSO:
        instance = make_lasso_instance(cfg.space.d, spec["n"], spec["sparsity"], spec["noise"], seed=seed)
        D, energy, scale = lasso_recast(instance.Phi, instance.y)
        extras.update({"instance": instance, "energy": energy, "scale": scale})
    else:
        raise ConfigError("dictionary.recipe", f"unsupported recipe {recipe}")
    logger.info(f"Dictionary {D.label}: d={D.d} N={D.N}")
    return D, extras


def build_target(cfg: RunConfig, D: Dictionary, extras: Dict[str, Any],
                 rng: np.random.Generator) -> Tuple[np.ndarray, Dict[str, Any]]:
    """Target f0 (before noise) and a description of how it was made."""
    spec = cfg.target
    kind = spec["kind"]
    info: Dict[str, Any] = {"kind": kind}
    if kind == TARGET_ATOM:
        if abs(spec["index"]) > D.N:
            raise ConfigError("target.index", f"must lie in [-{D.N}, {D.N}] without 0")
        f0 = D.signed_atom(spec["index"])
    elif kind == TARGET_A1:
        f0 = a1_target(D, spec["n_atoms"], spec["budget"], rng=rng)
        info["budget"] = spec["budget"]
    elif kind == TARGET_SPARSE:
        f0, support, coefficients = sparse_target(D, spec["sparsity"], rng)
        info.update({"support": [int(j) + 1 for j in support], "coefficients": coefficients.tolist()})
    elif kind == TARGET_LASSO:
        instance = extras["instance"]
        f0 = instance.y.copy()
        info["support"] = [int(j) + 1 for j in instance.support]
    else:
        f0 = np.array(spec["values"], dtype=float)
    return f0, info


def build_energy(cfg: RunConfig, f0: np.ndarray, extras: Dict[str, Any]) -> Energy:
    if "energy" in extras:
        return extras["energy"]
    options = cfg.energy
    if options is None:
        if cfg.space.is_euclidean:
            return make_quadratic_energy(f0)
        return make_norm_composite_energy(f0, Potential.square(), cfg.space)
    if options["potential"] == "power":
        if options["power"] is None:
            raise ConfigError("energy.power", "is required for the power potential")
        potential = Potential.power(options["power"])
    else:
        potential = Potential.by_name(options["potential"])
    return make_norm_composite_energy(f0, potential, cfg.space, q=options["q"], gamma=options["gamma"])


def build_problem(cfg: RunConfig) -> Problem:
    """Dictionary, target and energy, fully determined by cfg.seed."""
    D, extras = build_dictionary(cfg)
    target_rng = np.random.default_rng([cfg.seed, 1])
    f0, info = build_target(cfg, D, extras, target_rng)
    eps = cfg.target["noise"]
    if eps > 0:
        f0 = perturb(f0, eps, target_rng)
        info["noise"] = eps
    energy = build_energy(cfg, f0, extras) if cfg.is_descent else None
    extras["target"] = info
    return Problem(D=D, f0=f0, energy=energy, extras=extras)


def execute(problem: Problem, cfg: RunConfig) -> Union[Trace, DescentTrace]:
    """Dispatch to the configured algorithm."""
    D, f0, sp, params = problem.D, problem.f0, cfg.space, cfg.params
    algorithm = cfg.algorithm
    logger.info(f"Running {algorithm} for up to {params.max_iter} iterations (seed={cfg.seed})")
    if algorithm == ALGO_WCGA:
        trace = run_wcga(f0, D, sp, params)
    elif algorithm == ALGO_WGAFR:
        trace = run_wgafr(f0, D, sp, params)
    elif algorithm == ALGO_WOGA:
        trace = run_woga(f0, D, params)
    elif algorithm == ALGO_WGA:
        trace = run_wga(f0, D, params)
    elif algorithm == ALGO_HYBRID:
        trace = run_hybrid(f0, D, params, switch_iter=cfg.switch_iter)
    elif algorithm == ALGO_DGA:
        trace = run_dga(f0, D, sp, params)
    elif algorithm == ALGO_WCGA_CO:
        return run_wcga_co(problem.energy, D, sp, params, beta=cfg.beta)
    elif algorithm == ALGO_WGAFR_CO:
        return run_wgafr_co(problem.energy, D, sp, params, beta=cfg.beta)
    else:
        raise ConfigError("algorithm", f"unsupported algorithm {algorithm}")

    if cfg.beta is not None and algorithm in (ALGO_WCGA, ALGO_WGAFR, ALGO_WOGA):
        trace = attach_guarantee(trace, sp, cfg.beta, params.t)
    return trace


def _error_values(trace: Union[Trace, DescentTrace]) -> Optional[np.ndarray]:
    if isinstance(trace, DescentTrace):
        return trace.gaps()
    return trace.residual_norms()


def evaluate_checks(trace: Union[Trace, DescentTrace], cfg: RunConfig) -> Tuple[Dict[str, Any], bool]:
    """
    Rate fit on the configured window plus the configured assertions.

    A run that converged before the window filled satisfies max_slope.
    """
    values = _error_values(trace)
    results: Dict[str, Any] = {"window": list(cfg.check.window), "rate": None}
    passed = True
    if values is None:
        results["rate_skipped"] = "energy minimum unknown"
    else:
        try:
            results["rate"] = fit_rate(values, cfg.check.window, floor=0.0).as_dict()
        except WindowTooSmallError as e:
            results["rate_skipped"] = str(e)

    if cfg.check.max_slope is not None:
        rate = results["rate"]
        if rate is None:
            ok = trace.status in (STATUS_CONVERGED, STATUS_OPTIMUM)
        else:
            ok = rate["slope"] <= cfg.check.max_slope
        results["max_slope"] = {"limit": cfg.check.max_slope, "pass": ok}
        passed = passed and ok
    if cfg.check.max_final is not None:
        final = None if values is None else float(values[-1])
        ok = final is not None and final <= cfg.check.max_final
        results["max_final"] = {"limit": cfg.check.max_final, "value": final, "pass": ok}
        passed = passed and ok
    return results, passed


@dataclass
class SeedOutcome:
    """One seeded execution: the problem it solved, its trace and its checks."""

    seed: int
    problem: Problem
    trace: Union[Trace, DescentTrace]
    checks: Dict[str, Any]
    passed: bool


def _run_section(cfg: RunConfig, outcome: SeedOutcome) -> Dict[str, Any]:
    problem, trace = outcome.problem, outcome.trace
    section: Dict[str, Any] = {
        "algorithm": cfg.algorithm,
        "seed": outcome.seed,
        "space": cfg.space.describe(),
        "dictionary": problem.D.describe(),
        "target": problem.extras["target"],
        "summary": trace.summary(),
        "checks": outcome.checks,
        "pass": outcome.passed,
    }
    if "scale" in problem.extras:
        x_hat = coefficients_to_x(trace.coefficients, problem.extras["scale"])
        section["lasso"] = {
            "x_hat": x_hat.tolist(),
            "x_true": problem.extras["instance"].x_true.tolist(),
            "l1_norm": float(np.sum(np.abs(x_hat))),
        }
    return section


def build_report(cfg: RunConfig, outcomes: List[SeedOutcome], artifacts: List[str]) -> Dict[str, Any]:
    """
    Report for a run; repeated runs nest one section per seed under "runs".

    Sections follow seed order regardless of the worker count.
    """
    passed = all(o.passed for o in outcomes)
    if len(outcomes) == 1:
        report = _run_section(cfg, outcomes[0])
    else:
        report = {
            "algorithm": cfg.algorithm,
            "seed": cfg.seed,
            "repeats": cfg.repeats,
            "runs": [_run_section(cfg, o) for o in outcomes],
            "passed_runs": sum(1 for o in outcomes if o.passed),
            "pass": passed,
        }
    report["artifacts"] = artifacts
    report["created_at"] = datetime.now(timezone.utc).isoformat()
    return report


def run_seed(cfg: RunConfig, seed: int) -> SeedOutcome:
    """Build, execute and check the configured experiment for one seed."""
    seeded = replace(cfg, seed=seed)
    problem = build_problem(seeded)
    trace = execute(problem, seeded)
    checks, passed = evaluate_checks(trace, seeded)
    return SeedOutcome(seed=seed, problem=problem, trace=trace, checks=checks, passed=passed)


def run_seeds(cfg: RunConfig) -> List[SeedOutcome]:
    """
    Execute every repeat on a pool of cfg.workers threads.

    Outcomes come back in seed order; the worker count changes wall time only.
    """
    seeds = cfg.seeds
    if cfg.workers == 1 or len(seeds) == 1:
        return [run_seed(cfg, seed) for seed in seeds]
    with ThreadPoolExecutor(max_workers=min(cfg.workers, len(seeds))) as pool:
        return list(pool.map(lambda seed: run_seed(cfg, seed), seeds))


def _trace_path(cfg: RunConfig, seed: int) -> str:
    if cfg.repeats == 1:
        return os.path.join(cfg.out_dir, TRACE_FILE)
    return os.path.join(cfg.out_dir, f"trace_seed{seed}.csv")


def run_experiment(cfg: RunConfig) -> RunResult:
    """Build, execute, check and write outputs for every repeat of one configuration."""
    outcomes = run_seeds(cfg)

    artifacts: List[str] = []
    if "csv" in cfg.formats:
        for outcome in outcomes:
            path = _trace_path(cfg, outcome.seed)
            if isinstance(outcome.trace, DescentTrace):
                write_descent_csv(outcome.trace, path)
            else:
                write_trace_csv(outcome.trace, path)
            artifacts.append(path)
    report = build_report(cfg, outcomes, artifacts)
    if "json" in cfg.formats:
        path = os.path.join(cfg.out_dir, REPORT_FILE)
        write_json(path, report)
        artifacts.append(path)

    passed = report["pass"]
    for outcome in outcomes:
        trace = outcome.trace
        logger.info(f"{cfg.algorithm} seed={outcome.seed} finished ({trace.status}, "
                    f"{trace.iterations} iterations): {format_verdict(outcome.passed)}")
    if cfg.repeats > 1:
        logger.info(f"{report['passed_runs']}/{cfg.repeats} runs passed: {format_verdict(passed)}")
    return RunResult(traces=[o.trace for o in outcomes], report=report, passed=passed, artifacts=artifacts)


def cmd_run(config_path: str) -> int:
    """
    Run the experiment described by a JSON config.

    Returns:
        EXIT_OK when every configured check passes, EXIT_FAILURE otherwise
    """
    cfg = load_run_config(config_path)
    if cfg.verbosity:
        logging.getLogger().setLevel(cfg.verbosity)
    result = run_experiment(cfg)
    return EXIT_OK if result.passed else EXIT_FAILURE
