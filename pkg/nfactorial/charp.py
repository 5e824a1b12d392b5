"""
Divided-power modules over prime fields.

phi: X_s^i Y_s^j -> X_s^(i + p j) folds the 2n-variable ring onto the
n-variable ring.  With row-major cells the p x p box satisfies
phi(Delta_box) = Delta_(p^2) exactly.
"""
import logging
import math
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from nfactorial.errors import BoundExceeded, UsageError
from nfactorial.exactalg import (
    QQ,
    CoefficientField,
    GradedSpan,
    SparsePolynomial,
    bidegree_grading,
    differentiate,
    divided_diff,
    divided_operators,
    graded_span,
    partial_operators,
    total_degree,
    vandermonde,
)
from nfactorial.harmonics import delta_sigma
from nfactorial.partitions import Partition

logger = logging.getLogger(__name__)

SUPPORTED_PRIMES = (2, 3, 5, 7)


def _check_prime(p: int) -> CoefficientField:
    field_ = CoefficientField.prime(p)
    if p not in SUPPORTED_PRIMES:
        raise UsageError(f"p={p} is outside the supported primes {SUPPORTED_PRIMES}")
    return field_


def char_phi(f: SparsePolynomial, n: int, p: int) -> SparsePolynomial:
    if f.nvars != 2 * n:
        raise UsageError(f"phi expects 2n={2 * n} variables, got {f.nvars}")
    terms: Dict[Tuple[int, ...], int] = {}
    for exps, coeff in f.terms.items():
        image = tuple(exps[s] + p * exps[n + s] for s in range(n))
        terms[image] = terms.get(image, 0) + coeff
    return SparsePolynomial(n, terms, f.field)


def p_power_orders(p: int, max_exponent: int) -> List[int]:
    """p^e for every e with p^e <= max_exponent"""
    orders = []
    power = 1
    while power <= max_exponent:
        orders.append(power)
        power *= p
    return orders


def divided_closure(f: SparsePolynomial, p: int, extra_power: bool = False) -> GradedSpan:
    """
    Closure of f over F_p under the divided powers of p-power order.  Every
    divided power up to the largest exponent of f is a unit multiple of a
    product of these.  extra_power adds the next p-power as a guard.
    """
    field_ = CoefficientField.prime(p)
    f = f.to_field(field_)
    max_exponent = max((max(e) for e in f.terms), default=0)
    orders = p_power_orders(p, max_exponent)
    if extra_power:
        orders.append(orders[-1] * p if orders else 1)
    return graded_span([f], divided_operators(range(f.nvars), orders), total_degree, field_)


def ordinary_closure(f: SparsePolynomial, field_: CoefficientField = QQ) -> GradedSpan:
    return graded_span([f.to_field(field_)], partial_operators(range(f.nvars)),
                       total_degree, field_)


def divided_span(n: int, p: int, max_n: int = 6, extra_power: bool = False) -> GradedSpan:
    _check_prime(p)
    if n > max_n:
        raise BoundExceeded(f"n={n} exceeds the configured bound {max_n}")
    return divided_closure(vandermonde(n), p, extra_power)


def divided_span_dim(n: int, p: int, max_n: int = 6) -> int:
    return divided_span(n, p, max_n).total_dim


@dataclass
class ConjectureInstance:
    n: int
    p: int
    dim_divided: int
    dim_classical: int
    guard_ok: bool

    @property
    def in_range(self) -> bool:
        """p^2 >= n, where the digit argument covers every exponent"""
        return self.p * self.p >= self.n

    @property
    def status(self) -> str:
        return "pass" if self.dim_divided == self.dim_classical else "fail"

    @property
    def passed(self) -> bool:
        return self.guard_ok and self.dim_divided <= self.dim_classical


def conjecture_instance(n: int, p: int, max_n: int = 6) -> ConjectureInstance:
    dim = divided_span_dim(n, p, max_n)
    guard = divided_span(n, p, max_n, extra_power=True).total_dim
    if guard != dim:
        logger.warning("adding the next p-power changed the divided span for n=%d p=%d", n, p)
    return ConjectureInstance(n, p, dim, math.factorial(n), guard == dim)


@dataclass
class CharPReport:
    n: int
    p: int
    phi_delta_matches: bool
    dim_divided: int
    dim_box: int
    dim_classical: int
    phi_span_equal: bool

    @property
    def inequality_holds(self) -> bool:
        return self.dim_box >= self.dim_divided

    @property
    def box_is_full(self) -> bool:
        return self.dim_box == self.dim_classical

    @property
    def passed(self) -> bool:
        return (self.phi_delta_matches and self.phi_span_equal and self.inequality_holds
                and self.dim_divided <= self.dim_classical)


def box_partition(p: int) -> Partition:
    return Partition((p,) * p)


def phi_delta_check(p: int) -> bool:
    n = p * p
    field_ = CoefficientField.prime(p)
    image = char_phi(delta_sigma(box_partition(p), n, field_), n, p)
    target = vandermonde(n, field_)
    return image == target or image == -target


def box_comparison(p: int, deep: bool = False) -> CharPReport:
    if p not in (2, 3):
        raise UsageError(f"box comparison is defined for p in (2, 3), got {p}")
    if p == 3 and not deep:
        raise BoundExceeded("the p=3 box comparison (n=9) runs only in the deep tier")
    n = p * p
    field_ = CoefficientField.prime(p)
    delta_box = delta_sigma(box_partition(p), n, field_)
    box_span = graded_span([delta_box], partial_operators(range(2 * n)),
                           bidegree_grading(n), field_)
    divided = divided_span(n, p, max_n=n)
    images = GradedSpan(n, total_degree, field_)
    for grade in box_span.grades():
        for vec in box_span.basis(grade):
            images.add(char_phi(vec, n, p))
    same = images.dims() == divided.dims() and all(
        divided.contains(vec) for grade in images.grades() for vec in images.basis(grade)
    )
    return CharPReport(
        n=n,
        p=p,
        phi_delta_matches=phi_delta_check(p),
        dim_divided=divided.total_dim,
        dim_box=box_span.total_dim,
        dim_classical=math.factorial(n),
        phi_span_equal=same,
    )


def counterexample_remark_c(p: int = 2) -> Tuple[int, int]:
    """(X1 - X2)(X1 + X2): divided-closure dimension over F_p and closure dimension over Q"""
    x1 = SparsePolynomial.variable(2, 0)
    x2 = SparsePolynomial.variable(2, 1)
    f = (x1 - x2) * (x1 + x2)
    return divided_closure(f, p).total_dim, ordinary_closure(f).total_dim


def _random_polynomial(rng: random.Random, nvars: int, field_: CoefficientField,
                       max_exponent: int, terms: int = 4,
                       x_bound: Optional[int] = None) -> SparsePolynomial:
    half = nvars // 2
    out = {}
    for _ in range(terms):
        exps = []
        for index in range(nvars):
            bound = x_bound if (x_bound is not None and index < half) else max_exponent + 1
            exps.append(rng.randrange(bound))
        out[tuple(exps)] = rng.randrange(1, field_.p)
    return SparsePolynomial(nvars, out, field_)


def phi_identity_checks(n: int, p: int, samples: int = 500, seed: int = 20011) -> Dict[str, bool]:
    """
    "commutes": phi(dX_s Q) = dX_s phi(Q) for all Q.
    "divided": phi(dY_s Q) = d^(p)X_s phi(Q) when every X-degree of Q is < p.
    """
    field_ = _check_prime(p)
    rng = random.Random(seed)
    commutes = True
    divided = True
    for _ in range(samples):
        q = _random_polynomial(rng, 2 * n, field_, max_exponent=2 * p)
        s = rng.randrange(n)
        if char_phi(differentiate(q, s), n, p) != differentiate(char_phi(q, n, p), s):
            commutes = False
        q = _random_polynomial(rng, 2 * n, field_, max_exponent=2 * p, x_bound=p)
        if char_phi(differentiate(q, n + s), n, p) != divided_diff(char_phi(q, n, p), s, p):
            divided = False
    return {"commutes": commutes, "divided": divided}
