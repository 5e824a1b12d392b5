"""
Ideals of points in the plane: the monomial ideals I_sigma, colengths and the
one-parameter family I_sigma(L) whose special fibre is I_sigma'.

Polynomials here live in C[X, Y]: variable 0 is X, variable 1 is Y.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from nfactorial.errors import ColengthError
from nfactorial.exactalg import (
    EchelonBasis,
    Exponents,
    SparsePolynomial,
    monomial_key,
    monomials_of_degree,
)
from nfactorial.harmonics import harmonic_space
from nfactorial.partitions import (
    Partition,
    cells,
    diagram_stats,
    is_b_fixed,
    predicted_n_after_step,
    reduce_step,
)

logger = logging.getLogger(__name__)


def xy(i: int, j: int, coeff=1) -> SparsePolynomial:
    return SparsePolynomial.monomial((i, j), coeff)


@dataclass
class PlaneIdeal:
    generators: List[SparsePolynomial]
    colength_bound: int
    colength: Optional[int] = None
    standard: List[Exponents] = field(default_factory=list)
    _span: Optional[EchelonBasis] = field(default=None, repr=False)
    _degree: int = field(default=-1, repr=False)

    def contains(self, f: SparsePolynomial) -> bool:
        if self._span is None:
            compute_colength(self)
        if f.degree() > self._degree:
            raise ColengthError(f"membership of degree {f.degree()} needs a larger bound")
        return self._span.contains(f.terms)


def ideal_sigma(sigma: Partition) -> PlaneIdeal:
    """Minimal monomial generators: the outer corners of the diagram"""
    gens = []
    for j, part in enumerate(sigma.parts):
        if j == 0 or part < sigma.parts[j - 1]:
            gens.append(xy(part, j))
    gens.append(xy(0, len(sigma)))
    return PlaneIdeal(gens, colength_bound=sigma.n)


def _span_up_to(generators: List[SparsePolynomial], degree: int) -> EchelonBasis:
    span = EchelonBasis(key=monomial_key)
    for g in generators:
        for shift in range(degree - g.degree() + 1):
            for exps in monomials_of_degree(2, shift):
                span.insert((g * SparsePolynomial.monomial(exps)).terms)
    return span


def _standard_counts(span: EchelonBasis, degree: int) -> Dict[int, List[Exponents]]:
    return {
        d: [m for m in monomials_of_degree(2, d) if m not in span.rows]
        for d in range(degree + 1)
    }


def compute_colength(ideal: PlaneIdeal) -> int:
    """
    dim C[X, Y]/I from the span of all multiples m * g up to a degree D.  D grows
    until degrees D and D-1 carry no standard monomial and the count is unchanged.
    """
    limit = ideal.colength_bound + 2
    previous = None
    for degree in range(1, limit + 1):
        span = _span_up_to(ideal.generators, degree)
        standard = _standard_counts(span, degree)
        count = sum(len(v) for v in standard.values())
        if not standard[degree] and not standard[degree - 1] and count == previous:
            ideal.colength = count
            ideal.standard = sorted(m for v in standard.values() for m in v)
            ideal._span = span
            ideal._degree = degree
            return count
        previous = count
    raise ColengthError(f"colength did not stabilize by degree {limit}")


def colength(ideal: PlaneIdeal) -> int:
    if ideal.colength is None:
        compute_colength(ideal)
    return ideal.colength


def family_generators(sigma: Partition, lam: Union[int, Fraction]) -> List[SparsePolynomial]:
    m = sigma.m
    gens = [
        xy(0, m + 2) - xy(0, m + 1, lam),
        xy(1, m + 1),
    ]
    gens += [xy(part, j) for j, part in enumerate(sigma.parts)]
    return [g for g in gens if g]


@dataclass
class FibreReport:
    sigma: Partition
    lam: Fraction
    colength: int
    standard: List[Exponents]
    expected_standard: List[Exponents]
    zero_fibre_matches: Optional[bool] = None
    point_colength: Optional[int] = None
    sigma_colength: Optional[int] = None

    @property
    def basis_ok(self) -> bool:
        return self.standard == self.expected_standard

    @property
    def passed(self) -> bool:
        ok = self.basis_ok and self.colength == self.sigma.n + 1
        if self.lam == 0:
            return ok and bool(self.zero_fibre_matches)
        return ok and self.point_colength == 1 and self.sigma_colength == self.sigma.n


def ideals_equal(a: PlaneIdeal, b: PlaneIdeal) -> bool:
    colength(a)
    colength(b)
    return all(b.contains(g) for g in a.generators) and all(a.contains(g) for g in b.generators)


def family_fibre(sigma: Partition, lam) -> Tuple[PlaneIdeal, FibreReport]:
    lam = Fraction(lam)
    n = sigma.n
    fibre = PlaneIdeal(family_generators(sigma, lam), colength_bound=n + 1)
    colength(fibre)
    expected = sorted([(c.i, c.j) for c in cells(sigma)] + [(0, sigma.m + 1)])
    report = FibreReport(sigma, lam, fibre.colength, fibre.standard, expected)
    if lam == 0:
        report.zero_fibre_matches = ideals_equal(fibre, ideal_sigma(reduce_step(sigma)))
    else:
        point = PlaneIdeal(fibre.generators + [xy(1, 0), xy(0, 1) - lam], colength_bound=n + 1)
        sigma_part = PlaneIdeal(fibre.generators + [xy(0, sigma.m + 1)], colength_bound=n + 1)
        report.point_colength = colength(point)
        report.sigma_colength = colength(sigma_part)
    return fibre, report


def maximal_rank_check(sigma: Partition, max_n: int = 5) -> bool:
    return harmonic_space(sigma, max_n=max_n).total_dim == math.factorial(sigma.n)


def corner_criterion(sigma: Partition) -> bool:
    """
    For every generator X^i Y^j of I_sigma with i > 0, X^(i-1) Y^(j+1) lies in
    I_sigma.  Returns whether this agrees with the strictly-decreasing test.
    """
    ideal = ideal_sigma(sigma)
    colength(ideal)
    criterion = True
    for g in ideal.generators:
        ((i, j),) = g.terms.keys()
        if i > 0 and not ideal.contains(xy(i - 1, j + 1)):
            criterion = False
    return criterion == is_b_fixed(sigma)


@dataclass(frozen=True)
class NDescent:
    sigma: Partition
    stepped: Partition
    n_before: int
    n_after: int
    predicted: int

    @property
    def matches(self) -> bool:
        return self.n_after == self.predicted

    @property
    def decreases(self) -> bool:
        return self.n_after < self.n_before


def n_descent(sigma: Partition) -> NDescent:
    stepped = reduce_step(sigma)
    return NDescent(
        sigma=sigma,
        stepped=stepped,
        n_before=diagram_stats(sigma).N,
        n_after=diagram_stats(stepped).N,
        predicted=predicted_n_after_step(sigma),
    )
