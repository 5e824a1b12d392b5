"""
The coinvariant algebra P_n/J, its filtration by F_s = F_1^s with
F_1 = span{1, x_i, x_i^p}, and the associated graded Gr(F).

A class f of P_n/J is represented by the harmonic f(d)Delta_n.  The map
f -> f(d)Delta_n twists the S_n-action by the sign, so the sign character of a
layer of Gr(F) is the trivial character of the corresponding harmonic layer.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from nfactorial.errors import BoundExceeded, UsageError
from nfactorial.exactalg import (
    QQ,
    GradedSpan,
    SparsePolynomial,
    apply_operator,
    differentiate,
    graded_span,
    grow_span,
    partial_operators,
    total_degree,
    vandermonde,
)
from nfactorial.harmonics import collapse_total_degree, harmonic_space, span_trace
from nfactorial.partitions import (
    box_plus_row,
    diagram_stats,
    dual,
    top_degree_formulas,
)
from nfactorial.springer import coinvariant_presentation, graded_quotient, tanisaki_generators
from nfactorial.symgroup import conjugacy_classes, transposition

logger = logging.getLogger(__name__)


@dataclass
class CoinvariantModel:
    n: int
    delta: SparsePolynomial
    span: GradedSpan

    @property
    def dim(self) -> int:
        return self.span.total_dim

    @property
    def graded_dims(self) -> List[int]:
        """Dimensions of P_n/J by degree (harmonic degree read backwards)"""
        top = self.n * (self.n - 1) // 2
        dims = self.span.dims()
        return [dims.get(top - d, 0) for d in range(top + 1)]


def coinvariant_model(n: int, max_n: int = 6, workers: int = 1) -> CoinvariantModel:
    if n > max_n:
        raise BoundExceeded(f"n={n} exceeds the configured bound {max_n}")
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    delta = vandermonde(n)
    span = graded_span([delta], partial_operators(range(n)), total_degree, QQ, workers)
    return CoinvariantModel(n, delta, span)


def validate_coinvariant_model(n: int) -> bool:
    """Harmonic model against the degree-sliced quotient by e_1, ..., e_n (n <= 4)"""
    if n > 4:
        raise BoundExceeded(f"coinvariant model validation runs for n <= 4, got {n}")
    model = coinvariant_model(n)
    presentation = coinvariant_presentation(n)
    annihilated = all(apply_operator(g, model.delta).is_zero() for g in presentation.generators)
    quotient = graded_quotient(presentation)
    series = [len(quotient.basis(d)) for d in range(len(model.graded_dims))]
    return annihilated and series == model.graded_dims and model.dim == math.factorial(n)


@dataclass
class Filtration:
    n: int
    p: int
    layers: List[GradedSpan] = field(default_factory=list)

    @property
    def layer_dims(self) -> List[int]:
        return [layer.total_dim for layer in self.layers]

    @property
    def gr_dims(self) -> List[int]:
        dims = self.layer_dims
        return [dims[0]] + [b - a for a, b in zip(dims, dims[1:])]

    @property
    def top_index(self) -> int:
        return len(self.layers) - 1


def filtration(n: int, p: int, max_n: int = 6, workers: int = 1) -> Filtration:
    """F_s(d)Delta_n for s = 0, 1, ... until the whole model is reached"""
    if p < 2:
        raise UsageError(f"p must be at least 2, got {p}")
    if n > max_n:
        raise BoundExceeded(f"n={n} exceeds the configured bound {max_n}")
    delta = vandermonde(n)
    ops = partial_operators(range(n))
    ops += [lambda f, var=var: differentiate(f, var, p) for var in range(n)]
    span = GradedSpan(n, total_degree, QQ)
    frontier = [span.add(delta)]
    result = Filtration(n, p, [span.copy()])
    while True:
        frontier = grow_span(span, frontier, ops, workers)
        if not frontier:
            break
        result.layers.append(span.copy())
    logger.debug("filtration n=%d p=%d layer dims %s", n, p, result.layer_dims)
    return result


def gr_series(n: int, p: int, max_n: int = 6) -> List[int]:
    return filtration(n, p, max_n).gr_dims


def layer_sign_multiplicities(filt: Filtration) -> List[int]:
    """Sign multiplicity of each Gr(F) layer"""
    classes = conjugacy_classes(filt.n)
    order = math.factorial(filt.n)

    def layer_traces(span: GradedSpan) -> Dict:
        return {
            c.cycle_type: sum(span_trace(span, g, c.representative, 1) for g in span.grades())
            for c in classes
        }

    traces = [layer_traces(layer) for layer in filt.layers]
    result = []
    for s, current in enumerate(traces):
        previous = traces[s - 1] if s else {c.cycle_type: 0 for c in classes}
        total = sum(c.size * (current[c.cycle_type] - previous[c.cycle_type]) for c in classes)
        result.append(total // order)
    return result


def layers_stable(filt: Filtration) -> bool:
    """Each layer is mapped into itself by a transposition"""
    swap = transposition(filt.n)
    for layer in filt.layers:
        for grade in layer.grades():
            for vec in layer.basis(grade):
                if not layer.contains(vec.permute(swap)):
                    return False
    return True


@dataclass
class GrComparison:
    p: int
    q: int
    r: int
    n: int
    d_sigma: int
    gr_dims: List[int]
    a_collapsed: List[int]
    sign_layers: List[int]
    top_degrees: Dict[str, int]
    expected_top_degrees: Dict[str, int]
    stable: bool
    certificate: str = "exact"

    @property
    def equal(self) -> bool:
        return self.gr_dims == self.a_collapsed

    @property
    def top_ok(self) -> bool:
        return len(self.gr_dims) - 1 == self.d_sigma and self.gr_dims[-1] == 1

    @property
    def sign_position_ok(self) -> bool:
        return [s for s, m in enumerate(self.sign_layers) if m] == [self.d_sigma] and (
            self.sign_layers[self.d_sigma] == 1
        )

    @property
    def formulas_ok(self) -> bool:
        d, d_dual = self.expected_top_degrees["d"], self.expected_top_degrees["d_dual"]
        return (
            self.top_degrees == self.expected_top_degrees
            and self.p * d + d_dual == self.n * (self.n - 1) // 2
        )

    @property
    def passed(self) -> bool:
        return (self.equal and self.top_ok and self.sign_position_ok and self.formulas_ok
                and self.stable)


def gr_vs_a(p: int, q: int, r: int, max_n: int = 6, mode: str = "exact",
            seed: int = 20011, workers: int = 1,
            harmonic_dims: Optional[Dict] = None) -> GrComparison:
    sigma = box_plus_row(p, q, r)
    n = sigma.n
    if n > max_n:
        raise BoundExceeded(f"n={n} exceeds the configured bound {max_n}")
    filt = filtration(n, p, max_n, workers)
    certificate = "exact"
    if harmonic_dims is None:
        H = harmonic_space(sigma, max_n=max_n, mode=mode, seed=seed, workers=workers)
        harmonic_dims = H.dims
        certificate = H.certificate
    d, d_dual = top_degree_formulas(p, q, r)
    tops = {
        "d": graded_quotient(tanisaki_generators(sigma)).top_degree,
        "d_dual": graded_quotient(tanisaki_generators(dual(sigma))).top_degree,
    }
    return GrComparison(
        p=p,
        q=q,
        r=r,
        n=n,
        d_sigma=diagram_stats(sigma).d_sigma,
        gr_dims=filt.gr_dims,
        a_collapsed=collapse_total_degree(harmonic_dims),
        sign_layers=layer_sign_multiplicities(filt),
        top_degrees=tops,
        expected_top_degrees={"d": d, "d_dual": d_dual},
        stable=layers_stable(filt),
        certificate=certificate,
    )
