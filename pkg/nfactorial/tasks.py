"""
Task runners behind the command line.

Each runner takes canonical string-valued inputs and returns a pydantic
outputs model; run_task wraps it in a TaskResult and consults the cache.
verify_all fans the acceptance jobs out over a process pool.
"""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel

from nfactorial import ENGINE_VERSION
from nfactorial.cache import ResultCache
from nfactorial.charp import (
    box_comparison,
    conjecture_instance,
    counterexample_remark_c,
    phi_identity_checks,
)
from nfactorial.config import Settings
from nfactorial.errors import BoundExceeded, NFactorialError, UsageError
from nfactorial.exactalg import CoefficientField
from nfactorial.grfiltration import gr_vs_a, validate_coinvariant_model
from nfactorial.harmonics import (
    HarmonicSpace,
    admissible_vanishing_cases,
    bigraded_triples,
    gorenstein_check,
    harmonic_space,
    lemma_vanish,
    lowest_sign_report,
    regular_rep_check,
    sign_analysis,
    slice_traces,
    tau_symmetry,
    top_class_check,
)
from nfactorial.hilbpoints import (
    colength,
    family_fibre,
    ideal_sigma,
    corner_criterion,
    maximal_rank_check,
    n_descent,
)
from nfactorial.models import (
    CharPOutputs,
    DimOutputs,
    FibreOutputs,
    GrOutputs,
    HilbOutputs,
    LowestSignOutputs,
    NilpairOutputs,
    CounterexampleOutputs,
    SignOutputs,
    SpringerOutputs,
    TaskResult,
    TSigmaOutputs,
)
from nfactorial.nilpairs import MAX_N as NILPAIR_MAX_N
from nfactorial.nilpairs import pnp_report
from nfactorial.partitions import (
    Partition,
    box_plus_row,
    diagram_stats,
    dual,
    is_b_fixed,
    partitions_of,
)
from nfactorial.springer import (
    dcp_generators,
    graded_quotient,
    hilbert_series,
    multinomial_dimension,
    permutation_stable,
    tanisaki_generators,
    verify_box_plus_row_ideals,
)
from nfactorial.symgroup import identity, long_cycle, transposition
from nfactorial.tsigma import tsigma_report

logger = logging.getLogger(__name__)

Inputs = Dict[str, Any]
Outputs = Tuple[BaseModel, str]

MODES = {"exact": "exact", "consensus": "modular_consensus"}
FIBRE_PARAMETERS = (Fraction(0), Fraction(1), Fraction(5), Fraction(-1, 2))
LOWEST_SIGN_RANGE = (2, 3, 4)
CHARP_PRIMES = (2, 3)
NILPAIR_BOUND = 8
COLENGTH_BOUND = 10
PHI_SAMPLES = 500


def _check_n(n: int, bound: int) -> None:
    if n > bound:
        raise BoundExceeded(f"n={n} exceeds the configured bound {bound} (see --max-n, --deep)")


def _mode(inputs: Inputs) -> str:
    try:
        return MODES[inputs.get("mode", "exact")]
    except KeyError:
        raise UsageError(f"mode must be one of {sorted(MODES)}, got {inputs['mode']!r}")


def _named_generators(n: int) -> Dict[str, Tuple[int, ...]]:
    if n == 1:
        return {"identity": identity(1)}
    return {"transposition": transposition(n), "long_cycle": long_cycle(n)}


def _harmonics(sigma: Partition, inputs: Inputs, settings: Settings) -> HarmonicSpace:
    field_ = CoefficientField.parse(inputs.get("field", "q"))
    mode = _mode(inputs)
    if mode != "exact" and field_.p:
        raise UsageError("consensus mode chooses its own primes; use --field q")
    _check_n(sigma.n, settings.effective_max_n)
    return harmonic_space(
        sigma,
        max_n=settings.effective_max_n,
        mode=mode,
        seed=settings.prime_seed,
        workers=settings.workers,
        field_=field_,
    )


def _sign_triples(H: HarmonicSpace) -> Tuple[List[List[int]], bool]:
    signs = sign_analysis(H)
    top = H.top_bidegree
    only_top = all(m == (1 if g == top else 0) for g, m in signs.items())
    return bigraded_triples({g: m for g, m in signs.items() if m}), only_top


# ==================== Runners ====================

def run_dim(inputs: Inputs, settings: Settings) -> Outputs:
    sigma = Partition.parse(inputs["sigma"])
    H = _harmonics(sigma, inputs, settings)
    signs, only_top = _sign_triples(H)
    cases = list(admissible_vanishing_cases(sigma))
    vanishing_ok = all(
        lemma_vanish(sigma, k, r, subset, settings.effective_max_n) for k, r, subset in cases
    )
    outputs = DimOutputs(
        sigma=str(sigma),
        n=sigma.n,
        dim=H.total_dim,
        expected=math.factorial(sigma.n),
        bigraded=bigraded_triples(H.dims),
        top_bidegree=list(H.top_bidegree),
        d_sigma=diagram_stats(sigma).d_sigma,
        regular_rep=regular_rep_check(H),
        top_class=top_class_check(H),
        sign_multiplicities=signs,
        sign_at_top_only=only_top,
        gorenstein=None if H.field.p else gorenstein_check(H),
        tau_symmetry=tau_symmetry(sigma, settings.effective_max_n),
        vanishing_cases=len(cases),
        vanishing_ok=vanishing_ok,
        traces={
            name: bigraded_triples(slice_traces(H, perm))
            for name, perm in _named_generators(sigma.n).items()
        },
    )
    return outputs, H.certificate


def run_sign(inputs: Inputs, settings: Settings) -> Outputs:
    if "n" in inputs:
        n = int(inputs["n"])
        report = lowest_sign_report(n)
        return LowestSignOutputs(n=n, **report), "exact"
    sigma = Partition.parse(inputs["sigma"])
    H = _harmonics(sigma, inputs, settings)
    signs, only_top = _sign_triples(H)
    outputs = SignOutputs(
        sigma=str(sigma),
        sign_multiplicities=signs,
        top_bidegree=list(H.top_bidegree),
        sign_at_top_only=only_top,
    )
    return outputs, H.certificate


def run_springer(inputs: Inputs, settings: Settings) -> Outputs:
    sigma = Partition.parse(inputs["sigma"])
    _check_n(sigma.n, settings.effective_max_n)
    field_ = CoefficientField.parse(inputs.get("field", "q"))
    tanisaki = tanisaki_generators(sigma)
    dcp = dcp_generators(dual(sigma))
    left = graded_quotient(tanisaki, field_=field_)
    right = graded_quotient(dcp, field_=field_)
    outputs = SpringerOutputs(
        sigma=str(sigma),
        dual=str(dual(sigma)),
        tanisaki_dims=hilbert_series(left),
        dcp_dual_dims=hilbert_series(right),
        dim=left.total_dim,
        multinomial=multinomial_dimension(sigma),
        top_degree=left.top_degree,
        tanisaki_stable=permutation_stable(tanisaki),
        dcp_stable=permutation_stable(dcp),
    )
    return outputs, "exact" if not field_.p else field_.label


def run_tsigma(inputs: Inputs, settings: Settings) -> Outputs:
    sigma = Partition.parse(inputs["sigma"])
    _check_n(sigma.n, settings.effective_max_n)
    report = tsigma_report(sigma, max_n=settings.effective_max_n)
    outputs = TSigmaOutputs(
        sigma=str(sigma),
        s_bigraded=bigraded_triples(report.s_dims),
        t_bigraded=bigraded_triples(report.t_dims),
        radical_bigraded=bigraded_triples({g: d for g, d in report.radical_dims.items() if d}),
        t_dim=report.t_total,
        top_bidegree=list(report.top_bidegree),
        d_sigma=report.d_sigma,
        top_sign_line=report.top_sign_line,
        gorenstein=report.gorenstein,
        degree_one_preserved=report.degree_one_preserved,
        rebuilt_radical_zero=report.rebuilt_radical_zero,
        symmetric=report.symmetric,
        matches_harmonics=report.matches_harmonics,
        report_passed=report.passed,
    )
    return outputs, "exact"


def run_gr(inputs: Inputs, settings: Settings) -> Outputs:
    p, q, r = int(inputs["p"]), int(inputs["q"]), int(inputs["r"])
    sigma = box_plus_row(p, q, r)
    _check_n(sigma.n, settings.effective_max_n)
    comparison = gr_vs_a(
        p, q, r,
        max_n=settings.effective_max_n,
        mode=_mode(inputs),
        seed=settings.prime_seed,
        workers=settings.workers,
    )
    ideals = verify_box_plus_row_ideals(p, q, r)
    outputs = GrOutputs(
        p=p,
        q=q,
        r=r,
        sigma=str(sigma),
        n=sigma.n,
        gr_dims=comparison.gr_dims,
        a_collapsed=comparison.a_collapsed,
        sign_layers=comparison.sign_layers,
        d_sigma=comparison.d_sigma,
        top_degrees=comparison.top_degrees,
        expected_top_degrees=comparison.expected_top_degrees,
        layers_stable=comparison.stable,
        jp_equals_dcp=ideals.jp_equals_dcp,
        jqvee_equals_dual_dcp=ideals.jqvee_equals_dual_dcp,
        membership_sweeps=ideals.jp_sweep and ideals.jqvee_sweep,
        coinvariant_model=validate_coinvariant_model(sigma.n) if sigma.n <= 4 else None,
        comparison_passed=comparison.passed,
    )
    return outputs, comparison.certificate


def run_charp(inputs: Inputs, settings: Settings) -> Outputs:
    n, p = int(inputs["n"]), int(inputs["p"])
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    is_box = n == p * p and p in CHARP_PRIMES
    bound = n if (is_box and settings.deep) else settings.effective_max_n
    instance = conjecture_instance(n, p, max_n=bound)
    box = None
    if is_box:
        report = box_comparison(p, deep=settings.deep)
        box = {
            "phi_delta_matches": report.phi_delta_matches,
            "dim_divided": report.dim_divided,
            "dim_box": report.dim_box,
            "dim_classical": report.dim_classical,
            "phi_span_equal": report.phi_span_equal,
            "inequality_holds": report.inequality_holds,
            "box_is_full": report.box_is_full,
            "passed": report.passed,
        }
    outputs = CharPOutputs(
        n=n,
        p=p,
        dim_divided=instance.dim_divided,
        dim_classical=instance.dim_classical,
        in_range=instance.in_range,
        conjecture_status=instance.status,
        guard_ok=instance.guard_ok,
        identities=phi_identity_checks(n, p, samples=PHI_SAMPLES, seed=settings.prime_seed),
        box=box,
    )
    return outputs, f"fp:{p}"


def run_counterexample(inputs: Inputs, settings: Settings) -> Outputs:
    p = int(inputs["p"])
    CoefficientField.prime(p)
    divided, rational = counterexample_remark_c(p)
    expected = [2 if p == 2 else 4, 4]
    return CounterexampleOutputs(p=p, dim_divided=divided, dim_rational=rational,
                                 expected=expected), f"fp:{p}"


def run_nilpair(inputs: Inputs, settings: Settings) -> Outputs:
    sigma = Partition.parse(inputs["sigma"])
    report = pnp_report(sigma)
    outputs = NilpairOutputs(
        sigma=str(sigma),
        n=sigma.n,
        commute=report.commute,
        centralizer_dim=report.centralizer_dim,
        semisimple=report.semisimple,
        h_commute=report.h_commute,
        bracket_checks=report.bracket_checks,
        cartan_check=report.cartan_check,
        integrality_check=report.integrality_check,
        deformation_checks=report.deformation_checks,
        jordan_types=[str(t) for t in report.jordan_types],
        transpose_ok=report.transpose_ok,
        h1=report.h[0],
        h2=report.h[1],
        report_passed=report.passed,
    )
    return outputs, "exact"


def run_hilb(inputs: Inputs, settings: Settings) -> Outputs:
    sigma = Partition.parse(inputs["sigma"])
    fibres = []
    for lam in FIBRE_PARAMETERS:
        _, report = family_fibre(sigma, lam)
        fibres.append(FibreOutputs(
            lam=str(report.lam),
            colength=report.colength,
            basis_ok=report.basis_ok,
            zero_fibre_matches=report.zero_fibre_matches,
            point_colength=report.point_colength,
            sigma_colength=report.sigma_colength,
            passed=report.passed,
        ))
    descent = n_descent(sigma)
    maximal = None
    if sigma.n <= settings.effective_max_n:
        maximal = maximal_rank_check(sigma, settings.effective_max_n)
    outputs = HilbOutputs(
        sigma=str(sigma),
        n=sigma.n,
        colength=colength(ideal_sigma(sigma)),
        fibres=fibres,
        b_fixed=is_b_fixed(sigma),
        corner_criterion_agrees=corner_criterion(sigma),
        n_before=descent.n_before,
        n_after=descent.n_after,
        n_predicted=descent.predicted,
        n_decreases=descent.decreases,
        maximal_rank=maximal,
    )
    return outputs, "exact"


RUNNERS: Dict[str, Callable[[Inputs, Settings], Outputs]] = {
    "dim": run_dim,
    "sign": run_sign,
    "springer": run_springer,
    "tsigma": run_tsigma,
    "gr": run_gr,
    "charp": run_charp,
    "counterexample": run_counterexample,
    "nilpair": run_nilpair,
    "hilb": run_hilb,
}


# ==================== Execution ====================

def cache_context(settings: Settings) -> Dict[str, Any]:
    """Settings that change a result; part of the cache key"""
    return {
        "prime_seed": settings.prime_seed,
        "max_n": settings.effective_max_n,
        "deep": settings.deep,
    }


def execute(task: str, inputs: Inputs, settings: Settings) -> TaskResult:
    """Run one task without the cache"""
    try:
        runner = RUNNERS[task]
    except KeyError:
        raise UsageError(f"unknown task {task!r}")
    outputs, certificate = runner(inputs, settings)
    return TaskResult(
        task=task,
        inputs=inputs,
        outputs=outputs.model_dump(mode="json"),
        passed=outputs.passed,
        certificate=certificate,
        engine_version=ENGINE_VERSION,
        prime_seed=settings.prime_seed,
    )


def run_task(task: str, inputs: Inputs, settings: Settings,
             cache: Optional[ResultCache] = None, timings: bool = False) -> TaskResult:
    started = time.perf_counter()
    result = None
    if cache is not None:
        result = cache.get(task, inputs, ENGINE_VERSION, cache_context(settings))
    if result is not None:
        logger.debug("cache hit for %s %s", task, inputs)
    else:
        result = execute(task, inputs, settings)
        if cache is not None:
            cache.put(result, cache_context(settings))
    if timings:
        result.elapsed_ms = int((time.perf_counter() - started) * 1000)
    return result


def verify_all_jobs(max_n: int, deep: bool = False) -> List[Tuple[str, Inputs]]:
    """The acceptance jobs for every size up to max_n"""
    jobs: List[Tuple[str, Inputs]] = []
    sigmas = [sigma for n in range(1, max_n + 1) for sigma in partitions_of(n)]
    for sigma in sigmas:
        jobs.append(("dim", {"sigma": str(sigma), "mode": "exact", "field": "q"}))
        jobs.append(("springer", {"sigma": str(sigma), "field": "q"}))
        jobs.append(("tsigma", {"sigma": str(sigma)}))
    # colength and nilpotent pairs are cheap; their ranges do not follow max_n
    for n in range(1, max(COLENGTH_BOUND, max_n) + 1):
        for sigma in partitions_of(n):
            jobs.append(("hilb", {"sigma": str(sigma)}))
    for n in range(1, min(NILPAIR_MAX_N, max(NILPAIR_BOUND, max_n)) + 1):
        for sigma in partitions_of(n):
            jobs.append(("nilpair", {"sigma": str(sigma)}))
    for n in LOWEST_SIGN_RANGE:
        jobs.append(("sign", {"n": n}))
    for p in range(2, max_n + 1):
        for q in range(1, max_n // p + 1):
            for r in range(p):
                if p * q + r <= max_n:
                    jobs.append(("gr", {"p": p, "q": q, "r": r, "mode": "exact"}))
    for p in CHARP_PRIMES:
        for n in range(2, max_n + 1):
            jobs.append(("charp", {"n": n, "p": p}))
        if deep and p * p > max_n:
            jobs.append(("charp", {"n": p * p, "p": p}))
        jobs.append(("counterexample", {"p": p}))
    return jobs


def _job(task: str, inputs: Inputs, settings: Settings) -> TaskResult:
    started = time.perf_counter()
    try:
        result = execute(task, inputs, settings)
    except NFactorialError as exc:
        logger.error("%s %s failed: %s", task, inputs, exc)
        result = TaskResult(
            task=task,
            inputs=inputs,
            outputs={"error": f"{type(exc).__name__}: {exc}"},
            passed=False,
            certificate="none",
            engine_version=ENGINE_VERSION,
            prime_seed=settings.prime_seed,
        )
    result.elapsed_ms = int((time.perf_counter() - started) * 1000)
    return result


def verify_all(settings: Settings, cache: Optional[ResultCache] = None,
               progress: bool = False, timings: bool = False) -> List[TaskResult]:
    """Run every acceptance job; results come back sorted by task, then inputs"""
    from tqdm import tqdm

    jobs = verify_all_jobs(settings.effective_max_n, settings.deep)
    context = cache_context(settings)
    results: List[TaskResult] = []
    pending = []
    for task, inputs in jobs:
        hit = cache.get(task, inputs, ENGINE_VERSION, context) if cache is not None else None
        if hit is not None:
            results.append(hit)
        else:
            pending.append((task, inputs))
    logger.info("verify-all: %d jobs, %d cached", len(jobs), len(results))

    bar = tqdm(total=len(pending), desc="verify-all", dynamic_ncols=True, ascii=True,
               disable=not progress)
    fresh: List[TaskResult] = []
    if settings.workers > 1 and len(pending) > 1:
        job_settings = settings.model_copy(update={"workers": 1})
        with ProcessPoolExecutor(max_workers=settings.workers) as executor:
            futures = [executor.submit(_job, task, inputs, job_settings)
                       for task, inputs in pending]
            for future in as_completed(futures):
                fresh.append(future.result())
                bar.update(1)
    else:
        for task, inputs in pending:
            fresh.append(_job(task, inputs, settings))
            bar.update(1)
    bar.close()

    for result in fresh:
        if cache is not None and result.certificate != "none":
            cache.put(result, context)
        if not timings:
            result.elapsed_ms = None
    results.extend(fresh)
    return sorted(results, key=lambda result: result.sort_key)
