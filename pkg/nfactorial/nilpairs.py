"""
Explicit principal nilpotent pairs in sl_n.

Basis vectors are indexed by the cells of the diagram in row-major order;
e' moves a cell one step along its row, e'' one step up its column.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from sympy import Matrix, Rational, eye, factorial, zeros

from nfactorial.errors import BoundExceeded, UsageError
from nfactorial.exactalg import exact_rank, kernel
from nfactorial.partitions import Partition, cells, dual

logger = logging.getLogger(__name__)

MAX_N = 12
DEFAULT_TS = (Rational(1), Rational(-2), Rational(1, 3))


@dataclass
class MatrixPair:
    first: Matrix
    second: Matrix

    @property
    def n(self) -> int:
        return self.first.shape[0]


def _check_bound(sigma: Partition) -> None:
    if sigma.n > MAX_N:
        raise BoundExceeded(f"n={sigma.n} exceeds the matrix bound {MAX_N}")


def build_pair(sigma: Partition) -> MatrixPair:
    _check_bound(sigma)
    diagram = cells(sigma)
    index = {(c.i, c.j): k for k, c in enumerate(diagram)}
    n = sigma.n
    along_row = zeros(n, n)
    up_column = zeros(n, n)
    for (i, j), k in index.items():
        if (i + 1, j) in index:
            along_row[index[(i + 1, j)], k] = 1
        if (i, j + 1) in index:
            up_column[index[(i, j + 1)], k] = 1
    return MatrixPair(along_row, up_column)


def associated_pair(sigma: Partition) -> MatrixPair:
    """Traceless diagonal matrices of the cell coordinates"""
    _check_bound(sigma)
    diagram = cells(sigma)
    n = sigma.n
    mean_i = Rational(sum(c.i for c in diagram), n)
    mean_j = Rational(sum(c.j for c in diagram), n)
    h1 = Matrix.diag(*[c.i - mean_i for c in diagram])
    h2 = Matrix.diag(*[c.j - mean_j for c in diagram])
    return MatrixPair(h1, h2)


def transpose_pair(pair: MatrixPair) -> MatrixPair:
    return MatrixPair(pair.first.T, pair.second.T)


def bracket(a: Matrix, b: Matrix) -> Matrix:
    return a * b - b * a


def _fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def _commutant_system(matrices: Sequence[Matrix], n: int) -> List[Dict[int, Fraction]]:
    """
    Rows of the linear system [x, e] = 0 for every e, plus trace(x) = 0, in the
    unknowns x[u, v] numbered u * n + v.
    """
    rows = []
    for e in matrices:
        for a in range(n):
            for b in range(n):
                row: Dict[int, Fraction] = {}
                # (xe)[a, b] = sum_v x[a, v] e[v, b]
                for v in range(n):
                    if e[v, b] != 0:
                        key = a * n + v
                        row[key] = row.get(key, 0) + _fraction(e[v, b])
                # (ex)[a, b] = sum_u e[a, u] x[u, b]
                for u in range(n):
                    if e[a, u] != 0:
                        key = u * n + b
                        row[key] = row.get(key, 0) - _fraction(e[a, u])
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    rows.append({u * n + u: Fraction(1) for u in range(n)})
    return rows


def centralizer_dim(pair: MatrixPair) -> int:
    """Dimension of the common centralizer inside sl_n"""
    n = pair.n
    return n * n - exact_rank(_commutant_system([pair.first, pair.second], n))


def centralizer_basis(pair: MatrixPair) -> List[Dict[int, Fraction]]:
    n = pair.n
    return kernel(_commutant_system([pair.first, pair.second], n), n * n)


def jordan_type(matrix: Matrix) -> Partition:
    """Jordan block sizes of a nilpotent matrix from the ranks of its powers"""
    n = matrix.shape[0]
    ranks = [n]
    power = eye(n)
    while ranks[-1]:
        power = power * matrix
        rank = power.rank()
        if rank == ranks[-1]:
            raise UsageError("matrix is not nilpotent")
        ranks.append(rank)
    at_least = [a - b for a, b in zip(ranks, ranks[1:])]
    return dual(Partition(tuple(at_least)))


def exp_nilpotent(matrix: Matrix) -> Matrix:
    """exp of a nilpotent matrix as a finite sum"""
    n = matrix.shape[0]
    if not (matrix**n).is_zero_matrix:
        raise UsageError("e1 + e2 is not nilpotent")
    result = eye(n)
    power = eye(n)
    for k in range(1, n):
        power = power * matrix
        result += power / factorial(k)
    return result


def deformation_check(e: MatrixPair, h: MatrixPair, t: Union[int, Rational]) -> bool:
    """g(t) h_i g(t)^-1 = h_i - t e_i with g(t) = exp(t (e1 + e2))"""
    t = Rational(t)
    g = exp_nilpotent(t * (e.first + e.second))
    g_inv = exp_nilpotent(-t * (e.first + e.second))
    return all(
        (g * hi * g_inv - (hi - t * ei)).is_zero_matrix
        for hi, ei in ((h.first, e.first), (h.second, e.second))
    )


@dataclass
class PnpReport:
    sigma: Partition
    commute: bool
    centralizer_dim: int
    semisimple: bool
    h_commute: bool
    bracket_checks: Dict[str, bool]
    cartan_check: bool
    integrality_check: bool
    deformation_checks: Dict[str, bool]
    jordan_types: Tuple[Partition, Partition]
    transpose_ok: bool
    h: Tuple[List[str], List[str]] = field(default_factory=lambda: ([], []))

    @property
    def passed(self) -> bool:
        return (
            self.commute
            and self.centralizer_dim == self.sigma.n - 1
            and self.semisimple
            and self.h_commute
            and all(self.bracket_checks.values())
            and self.cartan_check
            and self.integrality_check
            and all(self.deformation_checks.values())
            and self.jordan_types == (self.sigma, dual(self.sigma))
            and self.transpose_ok
        )


def verify_axioms(pair: MatrixPair) -> Tuple[bool, int]:
    """(commute, common centralizer dimension in sl_n)"""
    commute = bracket(pair.first, pair.second).is_zero_matrix
    return commute, centralizer_dim(pair)


def _bracket_checks(e: MatrixPair, h: MatrixPair) -> Dict[str, bool]:
    out = {}
    for a, ha in ((1, h.first), (2, h.second)):
        for b, eb in ((1, e.first), (2, e.second)):
            expected = eb if a == b else zeros(*eb.shape)
            out[f"h{a}_e{b}"] = (bracket(ha, eb) - expected).is_zero_matrix
    return out


def _cartan_check(h: MatrixPair) -> bool:
    """The common centralizer of (h1, h2) in sl_n is the traceless diagonal"""
    n = h.n
    basis = centralizer_basis(h)
    diagonal = all(key // n == key % n for vec in basis for key in vec)
    return diagonal and len(basis) == n - 1


def _integrality_check(h: MatrixPair) -> bool:
    """ad(h_i) has integer eigenvalues h_i[u] - h_i[v] on the matrix units"""
    n = h.n
    for hi in (h.first, h.second):
        for u in range(n):
            for v in range(n):
                if not (hi[u, u] - hi[v, v]).is_integer:
                    return False
    return True


def pnp_report(sigma: Partition, ts: Sequence = DEFAULT_TS) -> PnpReport:
    e = build_pair(sigma)
    h = associated_pair(sigma)
    commute, dim = verify_axioms(e)
    transposed = transpose_pair(e)
    t_commute, t_dim = verify_axioms(transposed)
    report = PnpReport(
        sigma=sigma,
        commute=commute,
        centralizer_dim=dim,
        semisimple=h.first.is_diagonal() and h.second.is_diagonal(),
        h_commute=bracket(h.first, h.second).is_zero_matrix,
        bracket_checks=_bracket_checks(e, h),
        cartan_check=_cartan_check(h),
        integrality_check=_integrality_check(h),
        deformation_checks={str(Rational(t)): deformation_check(e, h, t) for t in ts},
        jordan_types=(jordan_type(e.first), jordan_type(e.second)),
        transpose_ok=t_commute and t_dim == dim and (
            jordan_type(transposed.first) == jordan_type(e.first)
            and jordan_type(transposed.second) == jordan_type(e.second)
        ),
        h=(
            [str(h.first[k, k]) for k in range(sigma.n)],
            [str(h.second[k, k]) for k in range(sigma.n)],
        ),
    )
    logger.debug("nilpotent pair %s: centralizer dim %d", sigma, dim)
    return report
