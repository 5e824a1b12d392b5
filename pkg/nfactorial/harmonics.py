"""
Generalized Vandermonde determinants and their harmonic modules.

The module A_sigma = R_n / K_sigma is realized by its harmonic model, the
span of all derivatives of Delta_sigma.  The apolar form identifies the two
as bigraded S_n-modules, and characters of S_n are real, so traces computed
on the harmonic model are the traces on A_sigma.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from nfactorial.errors import BoundExceeded, InternalBasisError, UsageError
from nfactorial.exactalg import (
    QQ,
    CoefficientField,
    GradedSpan,
    SparsePolynomial,
    apolar_pair,
    apply_operator,
    bidegree_grading,
    elementary_symmetric,
    exact_rank,
    graded_span,
    monomial_determinant,
    partial_operators,
    seeded_primes,
)
from nfactorial.partitions import Partition, cells, d_k, deg_remainder, diagram_stats, dual
from nfactorial.symgroup import (
    ConjugacyClass,
    conjugacy_classes,
    fixed_monomial_counts,
    generators,
)

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]


@dataclass
class HarmonicSpace:
    sigma: Partition
    delta: SparsePolynomial
    span: GradedSpan
    certificate: str = "exact"
    primes: List[int] = field(default_factory=list)
    _characters: Dict[Bidegree, Dict[Partition, int]] = field(
        default_factory=dict, repr=False
    )

    @property
    def n(self) -> int:
        return self.sigma.n

    @property
    def total_dim(self) -> int:
        return self.span.total_dim

    @property
    def dims(self) -> Dict[Bidegree, int]:
        return self.span.dims()

    @property
    def top_bidegree(self) -> Bidegree:
        return max(self.span.grades(), key=lambda g: (g[0] + g[1], g))

    @property
    def field(self) -> CoefficientField:
        return self.span.field


def delta_sigma(sigma: Partition, max_n: int = 8,
                field_: CoefficientField = QQ) -> SparsePolynomial:
    """det[X_s^i_t Y_s^j_t] over the cells of the diagram in row-major order"""
    if sigma.n > max_n:
        raise BoundExceeded(f"n={sigma.n} exceeds the configured bound {max_n}")
    columns = [(c.i, c.j) for c in cells(sigma)]
    return monomial_determinant(columns, 2, field_)


def _closure(delta: SparsePolynomial, n: int, field_: CoefficientField,
             workers: int) -> GradedSpan:
    return graded_span(
        [delta.to_field(field_)],
        partial_operators(range(2 * n)),
        bidegree_grading(n),
        field=field_,
        workers=workers,
    )


def harmonic_space(sigma: Partition, max_n: int = 5, mode: str = "exact",
                   seed: int = 20011, workers: int = 1,
                   field_: CoefficientField = QQ) -> HarmonicSpace:
    """
    Closure of Delta_sigma under the 2n first-order partials, bigraded by
    (X-degree, Y-degree).  In exact mode the closure is taken over field_
    (the rationals unless a prime field is requested).

    mode="modular_consensus" closes over two seeded primes; if their bigraded
    dimensions agree the F_p span is kept and tagged "consensus", otherwise the
    rational closure is computed.
    """
    delta = delta_sigma(sigma, max_n)
    n = sigma.n
    if mode == "exact":
        span = _closure(delta, n, field_, workers)
        logger.debug("harmonic space %s over %s: dims %s", sigma, field_.label, span.dims())
        return HarmonicSpace(sigma, delta, span, "exact" if not field_.p else field_.label)
    if mode != "modular_consensus":
        raise UsageError(f"unknown mode {mode!r}")
    primes = seeded_primes(seed)
    spans = [_closure(delta, n, CoefficientField.prime(p), workers) for p in primes]
    if spans[0].dims() == spans[1].dims():
        return HarmonicSpace(sigma, delta, spans[0], "consensus", primes)
    logger.info("modular closures disagree for %s, escalating to exact", sigma)
    return HarmonicSpace(sigma, delta, _closure(delta, n, QQ, workers), "exact", primes)


def _as_integer(value, field_: CoefficientField) -> int:
    if field_.p:
        value = int(value)
        return value - field_.p if value > field_.p // 2 else value
    if getattr(value, "denominator", 1) != 1:
        raise InternalBasisError(f"non-integral trace {value}")
    return int(value)


def span_trace(span: GradedSpan, grade, perm: Sequence[int], blocks: int) -> int:
    """Trace of a permutation on one graded slice of a stable span"""
    basis = span.slices.get(grade)
    if basis is None:
        return 0
    total = 0
    for pivot, row in basis.rows.items():
        image = SparsePolynomial._raw(span.nvars, row, span.field).permute(perm, blocks)
        if not basis.contains(image.terms):
            raise InternalBasisError(f"permuted basis vector leaves slice {grade}")
        total += image.terms.get(pivot, 0)
    return _as_integer(span.field.reduce(total), span.field)


def slice_traces(H: HarmonicSpace, perm: Sequence[int]) -> Dict[Bidegree, int]:
    return {g: span_trace(H.span, g, perm, 2) for g in H.span.grades()}


def characters(H: HarmonicSpace) -> Dict[Bidegree, Dict[Partition, int]]:
    """Class-representative traces on each bidegree slice"""
    if not H._characters:
        classes = conjugacy_classes(H.n)
        for grade in H.span.grades():
            H._characters[grade] = {
                c.cycle_type: span_trace(H.span, grade, c.representative, 2) for c in classes
            }
    return H._characters


def _multiplicity(table: Dict[Partition, int], classes: List[ConjugacyClass],
                  twist_by_sign: bool) -> int:
    order = sum(c.size for c in classes)
    total = 0
    for c in classes:
        weight = c.sign if twist_by_sign else 1
        total += c.size * weight * table[c.cycle_type]
    if total % order:
        raise InternalBasisError(f"character inner product {total}/{order} is not integral")
    return total // order


def regular_rep_check(H: HarmonicSpace) -> bool:
    if H.total_dim != math.factorial(H.n):
        return False
    table = characters(H)
    for c in conjugacy_classes(H.n):
        if c.is_identity:
            continue
        if sum(table[g][c.cycle_type] for g in table):
            return False
    return True


def sign_analysis(H: HarmonicSpace) -> Dict[Bidegree, int]:
    classes = conjugacy_classes(H.n)
    return {g: _multiplicity(t, classes, True) for g, t in characters(H).items()}


def tau_symmetry(sigma: Partition, max_n: int = 8) -> bool:
    """Swapping X and Y sends Delta_sigma to +/- Delta_dual"""
    swapped = delta_sigma(sigma, max_n).swap_blocks()
    target = delta_sigma(dual(sigma), max_n)
    return swapped == target or swapped == -target


def top_class_check(H: HarmonicSpace) -> bool:
    """Top bidegree totals d_sigma, is a line, and is spanned by Delta_sigma"""
    top = H.top_bidegree
    d_sigma = diagram_stats(H.sigma).d_sigma
    if sum(top) != d_sigma or H.dims[top] != 1:
        return False
    if any(sum(g) == d_sigma and g != top for g in H.span.grades()):
        return False
    return H.span.contains(H.delta.to_field(H.field))


@dataclass(frozen=True)
class PairingBlock:
    grade: Bidegree
    complement: Bidegree
    rows: int
    cols: int
    rank: int

    @property
    def perfect(self) -> bool:
        return self.rows == self.cols == self.rank


def gorenstein_blocks(H: HarmonicSpace) -> List[PairingBlock]:
    """
    Pairing blocks <f, g> = constant term of (fg)(d) Delta between complementary
    bidegrees, with harmonic basis vectors as representatives of A_sigma.
    """
    if H.field.p:
        raise UsageError("the Gorenstein pairing is checked in characteristic zero only")
    top_x, top_y = H.top_bidegree
    blocks = []
    for grade in H.span.grades():
        complement = (top_x - grade[0], top_y - grade[1])
        left = H.span.basis(grade)
        right = H.span.basis(complement)
        images = [apply_operator(g, H.delta) for g in right]
        matrix = [[apolar_pair(f, image) for image in images] for f in left]
        rank = exact_rank(matrix) if left and right else 0
        blocks.append(PairingBlock(grade, complement, len(left), len(right), rank))
    return blocks


def gorenstein_check(H: HarmonicSpace) -> bool:
    return all(block.perfect for block in gorenstein_blocks(H))


def lemma_vanish(sigma: Partition, k: int, r: int, subset: Sequence[int],
                 max_n: int = 8) -> bool:
    """
    Whether e_r(d/dY_s1, ..., d/dY_sk) annihilates Delta_sigma.  Subset indices
    are 1-based; the call requires k - d_k(sigma) < r <= k.
    """
    n = sigma.n
    if not k - d_k(sigma, k) < r <= k:
        raise UsageError(f"r={r} is outside ({k - d_k(sigma, k)}, {k}] for k={k}")
    subset = list(subset)
    if len(subset) != k or any(a >= b for a, b in zip(subset, subset[1:])):
        raise UsageError(f"subset must be {k} strictly increasing indices, got {subset}")
    if subset[0] < 1 or subset[-1] > n:
        raise UsageError(f"subset indices must lie in 1..{n}")
    operator = elementary_symmetric(2 * n, [n + s - 1 for s in subset], r)
    return apply_operator(operator, delta_sigma(sigma, max_n)).is_zero()


def admissible_vanishing_cases(sigma: Partition):
    """Every (k, r, subset) the vanishing statement covers"""
    n = sigma.n
    for k in range(1, n + 1):
        for r in range(max(1, k - d_k(sigma, k) + 1), k + 1):
            for subset in itertools.combinations(range(1, n + 1), k):
                yield k, r, subset


def sign_multiplicity_in_degree(n: int, degree: int) -> int:
    """Multiplicity of the sign character in degree `degree` of the 2n-variable ring"""
    classes = conjugacy_classes(n)
    total = 0
    for c in classes:
        total += c.size * c.sign * fixed_monomial_counts(c.representative, 2, degree)[degree]
    return total // math.factorial(n)


def lowest_sign_degree(n: int) -> Tuple[int, int]:
    if n > 4:
        raise BoundExceeded(f"lowest_sign_degree is enumerated for n <= 4, got {n}")
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    degree = 0
    while True:
        multiplicity = sign_multiplicity_in_degree(n, degree)
        if multiplicity:
            return degree, multiplicity
        degree += 1


def lowest_sign_report(n: int) -> Dict[str, object]:
    degree, multiplicity = lowest_sign_degree(n)
    expected, remainder = deg_remainder(n)
    return {
        "degree": degree,
        "multiplicity": multiplicity,
        "expected_degree": expected,
        "remainder": remainder,
        "unique_iff_remainder_zero": (multiplicity == 1) == (remainder == 0),
    }


def generator_traces(H: HarmonicSpace) -> Dict[Tuple[int, ...], Dict[Bidegree, int]]:
    """Slice traces of the transposition and the n-cycle"""
    return {perm: slice_traces(H, perm) for perm in generators(H.n)}


def bigraded_triples(dims: Dict[Bidegree, int]) -> List[List[int]]:
    return [[a, b, dims[(a, b)]] for a, b in sorted(dims)]


def collapse_total_degree(dims: Dict[Bidegree, int]) -> List[int]:
    top = max(a + b for a, b in dims)
    series = [0] * (top + 1)
    for (a, b), dim in dims.items():
        series[a + b] += dim
    return series

