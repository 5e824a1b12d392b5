"""
The tensor algebra S_sigma = H*(X_sigma) (x) H*(X_dual), the form gamma and
T_sigma = S_sigma / rad(gamma).

The left factor is the Tanisaki quotient for sigma read in the Y variables,
the right factor the Tanisaki quotient for the dual partition read in the X
variables, so a basis pair (c1, c2) has bidegree (deg c2, deg c1).
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from nfactorial.errors import BoundExceeded, InternalBasisError, InvariantViolation
from nfactorial.exactalg import EchelonBasis, Exponents, Scalar, exact_rank, kernel
from nfactorial.harmonics import HarmonicSpace, harmonic_space, slice_traces
from nfactorial.partitions import Partition, diagram_stats, dual
from nfactorial.springer import GradedQuotientRing, graded_quotient, tanisaki_generators
from nfactorial.symgroup import all_permutations, conjugacy_classes, generators, sign

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]
Pair = Tuple[Exponents, Exponents]


@dataclass
class TensorAlgebra:
    sigma: Partition
    left: GradedQuotientRing
    right: GradedQuotientRing

    @property
    def top_bidegree(self) -> Bidegree:
        return self.right.top_degree, self.left.top_degree

    @property
    def dims(self) -> Dict[Bidegree, int]:
        out = {}
        for x, right_dim in self.right.hilbert.items():
            for y, left_dim in self.left.hilbert.items():
                out[(x, y)] = right_dim * left_dim
        return dict(sorted(out.items()))

    @property
    def total_dim(self) -> int:
        return self.left.total_dim * self.right.total_dim

    def slice_basis(self, grade: Bidegree) -> List[Pair]:
        x, y = grade
        return [(c1, c2) for c1 in self.left.basis(y) for c2 in self.right.basis(x)]

    def complement(self, grade: Bidegree) -> Bidegree:
        top_x, top_y = self.top_bidegree
        return top_x - grade[0], top_y - grade[1]

    def act(self, perm: Sequence[int], pair: Pair) -> Dict[Pair, Scalar]:
        """Diagonal action on a basis pair, reduced to normal form on each side"""
        left = self.left.act(perm, pair[0])
        right = self.right.act(perm, pair[1])
        return {(a, b): ca * cb for a, ca in left.items() for b, cb in right.items()}


def build_s_sigma(sigma: Partition, max_n: int = 6) -> TensorAlgebra:
    if sigma.n > max_n:
        raise BoundExceeded(f"n={sigma.n} exceeds the configured bound {max_n}")
    left = graded_quotient(tanisaki_generators(sigma))
    right = graded_quotient(tanisaki_generators(dual(sigma)))
    return TensorAlgebra(sigma, left, right)


@dataclass
class GammaForm:
    functional: Dict[Pair, Scalar]
    blocks: Dict[Bidegree, List[List[Scalar]]]
    radical: Dict[Bidegree, EchelonBasis]
    symmetric: bool
    _index: Dict[Bidegree, Dict[Pair, int]] = field(default_factory=dict, repr=False)

    @property
    def radical_dims(self) -> Dict[Bidegree, int]:
        return {g: len(basis) for g, basis in self.radical.items()}


def _top_matrices(quotient: GradedQuotientRing, degree: int, perms) -> List[Dict]:
    return [{c: quotient.act(w, c) for c in quotient.basis(degree)} for w in perms]


def top_sign_multiplicity(S: TensorAlgebra) -> Fraction:
    top_x, top_y = S.top_bidegree
    total = 0
    for c in conjugacy_classes(S.sigma.n):
        w = c.representative
        left_trace = sum(S.left.act(w, b).get(b, 0) for b in S.left.basis(top_y))
        right_trace = sum(S.right.act(w, b).get(b, 0) for b in S.right.basis(top_x))
        total += c.size * c.sign * left_trace * right_trace
    return Fraction(total) / math.factorial(S.sigma.n)


def sign_functional(S: TensorAlgebra) -> Dict[Pair, Scalar]:
    """A nonzero row of the sign projector on the top bidegree"""
    multiplicity = top_sign_multiplicity(S)
    if multiplicity != 1:
        raise InvariantViolation(
            f"sign character occurs {multiplicity} times in the top degree of S_{S.sigma}"
        )
    top_x, top_y = S.top_bidegree
    perms = list(all_permutations(S.sigma.n))
    signs = [sign(w) for w in perms]
    left_images = _top_matrices(S.left, top_y, perms)
    right_images = _top_matrices(S.right, top_x, perms)
    columns = S.slice_basis(S.top_bidegree)
    for k1, k2 in columns:
        row = {}
        for c1, c2 in columns:
            value = 0
            for eps, left, right in zip(signs, left_images, right_images):
                a = left[c1].get(k1)
                if a:
                    b = right[c2].get(k2)
                    if b:
                        value += eps * a * b
            if value:
                row[(c1, c2)] = value
        if row:
            return row
    raise InvariantViolation("sign projector vanishes on the top degree")


def _gamma(S: TensorAlgebra, functional: Dict[Pair, Scalar], u: Pair, v: Pair) -> Scalar:
    left = S.left.multiply(u[0], v[0])
    if not left:
        return 0
    right = S.right.multiply(u[1], v[1])
    total = 0
    for (k1, k2), weight in functional.items():
        a = left.get(k1)
        if a:
            b = right.get(k2)
            if b:
                total += weight * a * b
    return total


def gamma_form(S: TensorAlgebra) -> GammaForm:
    functional = sign_functional(S)
    blocks = {}
    radical = {}
    index = {}
    for grade in S.dims:
        rows = S.slice_basis(grade)
        cols = S.slice_basis(S.complement(grade))
        index[grade] = {pair: i for i, pair in enumerate(rows)}
        block = [[_gamma(S, functional, u, v) for v in cols] for u in rows]
        blocks[grade] = block
        transposed = [[block[i][j] for i in range(len(rows))] for j in range(len(cols))]
        basis = EchelonBasis()
        for vec in kernel(transposed, len(rows)):
            basis.insert(vec)
        radical[grade] = basis
    symmetric = all(
        blocks[g][i][j] == blocks[S.complement(g)][j][i]
        for g in blocks
        if S.complement(g) in blocks
        for i in range(len(blocks[g]))
        for j in range(len(blocks[g][i]))
    )
    return GammaForm(functional, blocks, radical, symmetric, index)


def gamma_and_quotient(S: TensorAlgebra) -> Tuple[GammaForm, Dict[Bidegree, int]]:
    gamma = gamma_form(S)
    t_dims = {}
    for grade, dim in S.dims.items():
        remaining = dim - len(gamma.radical[grade])
        if remaining:
            t_dims[grade] = remaining
    return gamma, t_dims


def _complement_positions(gamma: GammaForm, grade: Bidegree, size: int) -> List[int]:
    pivots = gamma.radical[grade].rows
    return [c for c in range(size) if c not in pivots]


def quotient_traces(S: TensorAlgebra, gamma: GammaForm,
                    perm: Sequence[int]) -> Dict[Bidegree, int]:
    """Trace of perm on each bidegree slice of T_sigma"""
    traces = {}
    for grade in S.dims:
        rows = S.slice_basis(grade)
        index = gamma._index[grade]
        radical = gamma.radical[grade]
        positions = _complement_positions(gamma, grade, len(rows))
        if not positions:
            continue
        total = 0
        for c in positions:
            image = {index[pair]: coeff for pair, coeff in S.act(perm, rows[c]).items()}
            total += radical.reduce(image).get(c, 0)
        if getattr(total, "denominator", 1) != 1:
            raise InternalBasisError(f"non-integral trace {total} on slice {grade}")
        traces[grade] = int(total)
    return traces


def rebuilt_radical_zero(S: TensorAlgebra, gamma: GammaForm) -> bool:
    """gamma restricted to complements of the radical is nondegenerate"""
    for grade, block in gamma.blocks.items():
        comp = S.complement(grade)
        rows = _complement_positions(gamma, grade, len(block))
        cols = _complement_positions(gamma, comp, len(gamma.blocks[comp]))
        if len(rows) != len(cols):
            return False
        if rows and exact_rank([[block[i][j] for j in cols] for i in rows]) != len(rows):
            return False
    return True


@dataclass
class TSigmaReport:
    sigma: Partition
    s_dims: Dict[Bidegree, int]
    t_dims: Dict[Bidegree, int]
    radical_dims: Dict[Bidegree, int]
    top_bidegree: Bidegree
    d_sigma: int
    top_sign_line: bool
    gorenstein: bool
    degree_one_preserved: bool
    rebuilt_radical_zero: bool
    symmetric: bool
    matches_harmonics: Optional[bool] = None

    @property
    def t_total(self) -> int:
        return sum(self.t_dims.values())

    @property
    def passed(self) -> bool:
        checks = [self.top_sign_line, self.gorenstein, self.degree_one_preserved,
                  self.rebuilt_radical_zero, self.symmetric,
                  sum(self.top_bidegree) == self.d_sigma]
        if self.matches_harmonics is not None:
            checks.append(self.matches_harmonics)
        return all(checks)


def compare_t_a(sigma: Partition, S: Optional[TensorAlgebra] = None,
                gamma: Optional[GammaForm] = None, H: Optional[HarmonicSpace] = None,
                max_n: int = 6) -> bool:
    """Bigraded dimensions and generator traces of T_sigma agree with A_sigma"""
    S = S or build_s_sigma(sigma, max_n)
    if gamma is None:
        gamma = gamma_form(S)
    H = H or harmonic_space(sigma, max_n=max_n)
    t_dims = {g: d - len(gamma.radical[g]) for g, d in S.dims.items()}
    t_dims = {g: d for g, d in t_dims.items() if d}
    if t_dims != H.dims:
        logger.info("T_%s dims %s differ from A dims %s", sigma, t_dims, H.dims)
        return False
    for perm in generators(sigma.n):
        if quotient_traces(S, gamma, perm) != slice_traces(H, perm):
            logger.info("T_%s traces of %s differ from A", sigma, perm)
            return False
    return True


def tsigma_report(sigma: Partition, max_n: int = 6, compare: bool = True) -> TSigmaReport:
    S = build_s_sigma(sigma, max_n)
    gamma, t_dims = gamma_and_quotient(S)
    top = S.top_bidegree
    top_traces = {perm: quotient_traces(S, gamma, perm).get(top) for perm in generators(sigma.n)}
    top_sign_line = t_dims.get(top) == 1 and all(
        trace == sign(perm) for perm, trace in top_traces.items()
    )
    gorenstein = all(t_dims.get(S.complement(g), 0) == d for g, d in t_dims.items())
    degree_one = all(
        len(gamma.radical[g]) == 0 for g in S.dims if g[0] + g[1] == 1
    )
    matches = compare_t_a(sigma, S, gamma, max_n=max_n) if compare else None
    rebuilt_zero = rebuilt_radical_zero(S, gamma)
    return TSigmaReport(
        sigma=sigma,
        s_dims=S.dims,
        t_dims=t_dims,
        radical_dims=gamma.radical_dims,
        top_bidegree=top,
        d_sigma=diagram_stats(sigma).d_sigma,
        top_sign_line=top_sign_line,
        gorenstein=gorenstein and rebuilt_zero,
        degree_one_preserved=degree_one,
        rebuilt_radical_zero=rebuilt_zero,
        symmetric=gamma.symmetric,
        matches_harmonics=matches,
    )
