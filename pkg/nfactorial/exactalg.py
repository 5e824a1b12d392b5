"""
Exact sparse polynomial arithmetic and exact/modular linear algebra.

Everything downstream (harmonic spaces, graded quotients, filtrations,
divided-power spans) reduces to two primitives defined here: a sparse
polynomial keyed by exponent vectors, and an incremental reduced echelon
basis keyed by monomials.  No floating point is used anywhere.
"""
import itertools
import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from functools import partial
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import isprime, nextprime

from nfactorial.errors import (
    ExponentOverflow,
    FieldError,
    InternalBasisError,
    UsageError,
)
from nfactorial.symgroup import sign

logger = logging.getLogger(__name__)

MAX_EXPONENT = 2**31 - 1

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


# ==================== Coefficient fields ====================

class CoefficientField:
    """The rationals (p == 0) or the prime field F_p"""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p and not isprime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p

    @classmethod
    def rationals(cls) -> "CoefficientField":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "CoefficientField":
        if p < 2:
            raise FieldError(f"{p} is not prime")
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "CoefficientField":
        """Parse the command-line form: "q" or "fp:PRIME" """
        if text == "q":
            return cls.rationals()
        if text.startswith("fp:") and text[3:].isdigit():
            return cls.prime(int(text[3:]))
        raise UsageError(f"field must be 'q' or 'fp:PRIME', got {text!r}")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def label(self) -> str:
        return f"fp:{self.p}" if self.p else "q"

    def reduce(self, x: Scalar) -> Scalar:
        p = self.p
        if not p:
            return x
        if type(x) is int:
            return x % p
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, p) % p

    def inv(self, x: Scalar) -> Scalar:
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(int(x), -1, self.p)
        return Fraction(1) / x

    def __eq__(self, other) -> bool:
        return isinstance(other, CoefficientField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("field", self.p))

    def __repr__(self) -> str:
        return f"CoefficientField({self.label})"


QQ = CoefficientField.rationals()


def lucas_binomial(a: int, m: int, p: int) -> int:
    """C(a, m) mod p digit by digit in base p"""
    result = 1
    while a or m:
        a_digit, m_digit = a % p, m % p
        if m_digit > a_digit:
            return 0
        result = result * math.comb(a_digit, m_digit) % p
        a //= p
        m //= p
    return result


def _falling(a: int, order: int) -> int:
    out = 1
    for step in range(order):
        out *= a - step
    return out


# ==================== Sparse polynomials ====================

class SparsePolynomial:
    """
    Map from exponent vector to nonzero coefficient.

    Variables are numbered from 0.  In the 2n-variable ring R_n index s is
    X_{s+1} for s < n and Y_{s-n+1} for s >= n.
    """

    __slots__ = ("nvars", "field", "terms")

    def __init__(self, nvars: int, terms: Optional[Dict[Exponents, Scalar]] = None,
                 field: CoefficientField = QQ):
        self.nvars = nvars
        self.field = field
        cleaned: Dict[Exponents, Scalar] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise UsageError(f"exponent vector {exps} does not have length {nvars}")
            if any(e < 0 for e in exps):
                raise UsageError(f"negative exponent in {exps}")
            _check_exponents(exps)
            coeff = field.reduce(cleaned.get(exps, 0) + coeff)
            if coeff:
                cleaned[exps] = coeff
            else:
                cleaned.pop(exps, None)
        self.terms = cleaned

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exponents, Scalar],
             field: CoefficientField) -> "SparsePolynomial":
        poly = cls.__new__(cls)
        poly.nvars = nvars
        poly.field = field
        poly.terms = terms
        return poly

    # constructors

    @classmethod
    def zero(cls, nvars: int, field: CoefficientField = QQ) -> "SparsePolynomial":
        return cls._raw(nvars, {}, field)

    @classmethod
    def constant(cls, nvars: int, value: Scalar = 1,
                 field: CoefficientField = QQ) -> "SparsePolynomial":
        return cls(nvars, {(0,) * nvars: value}, field)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: Scalar = 1,
                 field: CoefficientField = QQ) -> "SparsePolynomial":
        return cls(len(exps), {tuple(exps): coeff}, field)

    @classmethod
    def variable(cls, nvars: int, index: int, power: int = 1,
                 field: CoefficientField = QQ) -> "SparsePolynomial":
        exps = [0] * nvars
        exps[index] = power
        return cls.monomial(exps, 1, field)

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def grades(self, grading: Callable[[Exponents], Hashable]) -> set:
        return {grading(e) for e in self.terms}

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, 0)

    def coefficient(self, exps: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exps), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"SparsePolynomial({self})"

    def __str__(self) -> str:
        return self.format()

    def format(self, blocks: int = 1) -> str:
        """Terms in decreasing grlex order; blocks=2 names the variables X1..Xn, Y1..Yn"""
        if not self.terms:
            return "0"
        pieces = []
        for exps in sorted(self.terms, key=monomial_key, reverse=True):
            factors = []
            for index, e in enumerate(exps):
                if e:
                    name = _variable_name(index, self.nvars, blocks)
                    factors.append(name + (f"^{e}" if e > 1 else ""))
            coeff = self.terms[exps]
            pieces.append(f"{coeff}" + ("*" + "*".join(factors) if factors else ""))
        return " + ".join(pieces)

    # arithmetic

    def _coerce(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            if other.nvars != self.nvars or other.field != self.field:
                raise UsageError("polynomials live in different rings")
            return other
        return SparsePolynomial.constant(self.nvars, other, self.field)

    def __add__(self, other) -> "SparsePolynomial":
        other = self._coerce(other)
        reduce = self.field.reduce
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            value = reduce(terms.get(exps, 0) + coeff)
            if value:
                terms[exps] = value
            else:
                terms.pop(exps, None)
        return SparsePolynomial._raw(self.nvars, terms, self.field)

    __radd__ = __add__

    def __neg__(self) -> "SparsePolynomial":
        reduce = self.field.reduce
        return SparsePolynomial._raw(
            self.nvars, {e: reduce(-c) for e, c in self.terms.items()}, self.field
        )

    def __sub__(self, other) -> "SparsePolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePolynomial":
        return self._coerce(other) - self

    def scale(self, factor: Scalar) -> "SparsePolynomial":
        reduce = self.field.reduce
        factor = reduce(factor)
        if not factor:
            return SparsePolynomial.zero(self.nvars, self.field)
        return SparsePolynomial._raw(
            self.nvars, {e: reduce(c * factor) for e, c in self.terms.items()}, self.field
        )

    def __mul__(self, other) -> "SparsePolynomial":
        if not isinstance(other, SparsePolynomial):
            return self.scale(other)
        other = self._coerce(other)
        reduce = self.field.reduce
        acc: Dict[Exponents, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                acc[exps] = acc.get(exps, 0) + c1 * c2
        terms = {}
        for exps, coeff in acc.items():
            coeff = reduce(coeff)
            if coeff:
                _check_exponents(exps)
                terms[exps] = coeff
        return SparsePolynomial._raw(self.nvars, terms, self.field)

    def __rmul__(self, other) -> "SparsePolynomial":
        return self.scale(other)

    def __pow__(self, power: int) -> "SparsePolynomial":
        result = SparsePolynomial.constant(self.nvars, 1, self.field)
        for _ in range(power):
            result = result * self
        return result

    def to_field(self, field: CoefficientField) -> "SparsePolynomial":
        """Reinterpret integer/rational coefficients in another field"""
        return SparsePolynomial(self.nvars, self.terms, field)

    def permute(self, perm: Sequence[int], blocks: int = 1) -> "SparsePolynomial":
        """
        Diagonal action of a permutation of {0..n-1} on each block of n variables:
        the variable with index i (inside a block) is sent to index perm[i].
        """
        return SparsePolynomial._raw(
            self.nvars,
            {act_on_exponents(perm, e, blocks): c for e, c in self.terms.items()},
            self.field,
        )

    def swap_blocks(self) -> "SparsePolynomial":
        """Exchange X_i and Y_i in a 2n-variable polynomial"""
        half = self.nvars // 2
        return SparsePolynomial._raw(
            self.nvars, {e[half:] + e[:half]: c for e, c in self.terms.items()}, self.field
        )


def _variable_name(index: int, nvars: int, blocks: int = 1) -> str:
    if blocks == 2 and nvars % 2 == 0:
        half = nvars // 2
        return f"X{index + 1}" if index < half else f"Y{index - half + 1}"
    return f"x{index}"


def _check_exponents(exps: Exponents) -> None:
    for e in exps:
        if e > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent {e} exceeds {MAX_EXPONENT}")


def monomial_key(exps: Exponents) -> Tuple[int, Exponents]:
    """Graded lexicographic key; larger means bigger monomial"""
    return sum(exps), exps


def total_degree(exps: Exponents) -> int:
    return sum(exps)


def bidegree_grading(n: int) -> Callable[[Exponents], Tuple[int, int]]:
    """(X-degree, Y-degree) of a monomial in the 2n-variable ring"""
    def grading(exps: Exponents) -> Tuple[int, int]:
        return sum(exps[:n]), sum(exps[n:])
    return grading


def act_on_exponents(perm: Sequence[int], exps: Exponents, blocks: int = 1) -> Exponents:
    n = len(perm)
    out = list(exps)
    for block in range(blocks):
        base = block * n
        for i in range(n):
            out[base + perm[i]] = exps[base + i]
    return tuple(out)


def monomials_of_degree(nvars: int, degree: int) -> List[Exponents]:
    """All exponent vectors of the given total degree, ascending lexicographically"""
    result = []
    for bars in itertools.combinations(range(degree + nvars - 1), nvars - 1):
        previous = -1
        exps = []
        for bar in bars:
            exps.append(bar - previous - 1)
            previous = bar
        exps.append(degree + nvars - 2 - previous)
        result.append(tuple(exps))
    return sorted(result)


# ==================== Named polynomials ====================

def elementary_symmetric(nvars: int, variables: Sequence[int], r: int,
                         field: CoefficientField = QQ) -> SparsePolynomial:
    if r <= 0:
        raise UsageError(f"elementary symmetric degree must be positive, got {r}")
    if len(set(variables)) != len(variables):
        raise UsageError(f"variable indices must be distinct: {variables}")
    terms = {}
    for subset in itertools.combinations(sorted(variables), r):
        exps = [0] * nvars
        for index in subset:
            exps[index] = 1
        terms[tuple(exps)] = 1
    return SparsePolynomial(nvars, terms, field)


def complete_homogeneous(nvars: int, variables: Sequence[int], h: int,
                         field: CoefficientField = QQ) -> SparsePolynomial:
    """Sum of all monomials of degree h in the chosen variables"""
    terms = {}
    for combo in itertools.combinations_with_replacement(sorted(variables), h):
        exps = [0] * nvars
        for index in combo:
            exps[index] += 1
        terms[tuple(exps)] = 1
    return SparsePolynomial(nvars, terms, field)


def s_htk(h: int, t: int, k: int, variables: Sequence[int], nvars: int,
          field: CoefficientField = QQ) -> SparsePolynomial:
    """(prod of variables)^k times the complete homogeneous sum of degree h"""
    if len(variables) != t:
        raise UsageError(f"S_(h,t,k) needs exactly t={t} variables, got {len(variables)}")
    if h < 0 or t < 1 or k < 0:
        raise UsageError(f"invalid S_(h,t,k) indices h={h}, t={t}, k={k}")
    power = [0] * nvars
    for index in variables:
        power[index] = k
    return complete_homogeneous(nvars, variables, h, field) * SparsePolynomial.monomial(
        power, 1, field
    )


def monomial_determinant(exponent_columns: Sequence[Exponents], blocks: int,
                         field: CoefficientField = QQ) -> SparsePolynomial:
    """
    det[ M_{s,t} ] with M_{s,t} the monomial in the s-th variable of each block
    raised to exponent_columns[t] (one exponent per block).
    """
    n = len(exponent_columns)
    terms = {}
    for perm in itertools.permutations(range(n)):
        exps = [0] * (blocks * n)
        for s in range(n):
            column = exponent_columns[perm[s]]
            for block in range(blocks):
                exps[block * n + s] = column[block]
        terms[tuple(exps)] = sign(perm)
    return SparsePolynomial(blocks * n, terms, field)


def vandermonde(n: int, field: CoefficientField = QQ) -> SparsePolynomial:
    """det[X_s^(t-1)], the product of (X_t - X_s) over s < t"""
    return monomial_determinant([(t,) for t in range(n)], 1, field)


# ==================== Differential operators ====================

def differentiate(f: SparsePolynomial, var: int, order: int = 1) -> SparsePolynomial:
    if not 0 <= var < f.nvars:
        raise UsageError(f"variable index {var} out of range for {f.nvars} variables")
    if order < 1:
        raise UsageError(f"derivative order must be positive, got {order}")
    reduce = f.field.reduce
    terms = {}
    for exps, coeff in f.terms.items():
        a = exps[var]
        if a < order:
            continue
        value = reduce(coeff * _falling(a, order))
        if value:
            lowered = list(exps)
            lowered[var] = a - order
            terms[tuple(lowered)] = value
    return SparsePolynomial._raw(f.nvars, terms, f.field)


def divided_diff(f: SparsePolynomial, var: int, m: int) -> SparsePolynomial:
    """X^a -> C(a, m) X^(a-m); binomials reduced by Lucas' theorem over F_p"""
    if not 0 <= var < f.nvars:
        raise UsageError(f"variable index {var} out of range for {f.nvars} variables")
    if m < 1:
        raise UsageError(f"divided power order must be positive, got {m}")
    p = f.field.p
    reduce = f.field.reduce
    terms = {}
    for exps, coeff in f.terms.items():
        a = exps[var]
        if a < m:
            continue
        binom = lucas_binomial(a, m, p) if p else math.comb(a, m)
        value = reduce(coeff * binom)
        if value:
            lowered = list(exps)
            lowered[var] = a - m
            terms[tuple(lowered)] = value
    return SparsePolynomial._raw(f.nvars, terms, f.field)


def apply_operator(operator: SparsePolynomial, f: SparsePolynomial) -> SparsePolynomial:
    """operator(d/dX_1, ..., d/dX_v) applied to f"""
    result = SparsePolynomial.zero(f.nvars, f.field)
    for op_exps, op_coeff in operator.terms.items():
        image = f
        for var, order in enumerate(op_exps):
            if order:
                image = differentiate(image, var, order)
                if not image:
                    break
        if image:
            result = result + image.scale(op_coeff)
    return result


def apolar_pair(f: SparsePolynomial, g: SparsePolynomial) -> Scalar:
    """Constant term of f(d)(g): sum over shared monomials of coefficients times exps!"""
    if f.nvars != g.nvars:
        raise UsageError("apolar pairing needs polynomials in the same ring")
    if f.field.p or g.field.p:
        raise FieldError("apolar pairing is only defined here in characteristic zero")
    total = 0
    small, large = (f, g) if len(f.terms) <= len(g.terms) else (g, f)
    for exps, coeff in small.terms.items():
        other = large.terms.get(exps)
        if other:
            weight = 1
            for e in exps:
                weight *= math.factorial(e)
            total += coeff * other * weight
    return total


Operator = Callable[[SparsePolynomial], SparsePolynomial]


def partial_operators(variables: Iterable[int]) -> List[Operator]:
    return [partial(differentiate, var=var, order=1) for var in variables]


def divided_operators(variables: Iterable[int],
                      orders: Iterable[int]) -> List[Operator]:
    orders = list(orders)
    return [partial(divided_diff, var=var, m=m) for var in variables for m in orders]


# ==================== Echelon bases ====================

class EchelonBasis:
    """
    Incremental reduced echelon basis of sparse vectors.

    Each stored row has coefficient 1 at its pivot, which is its largest column
    (under `key`), and 0 at every other pivot.  The reduced basis of a span is
    unique, so it does not depend on insertion order.
    """

    def __init__(self, field: CoefficientField = QQ,
                 key: Optional[Callable[[Hashable], object]] = None):
        self.field = field
        self.key = key
        self.rows: Dict[Hashable, Dict[Hashable, Scalar]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> List[Hashable]:
        return sorted(self.rows, key=self.key, reverse=True)

    def reduce(self, vec: Dict[Hashable, Scalar]) -> Dict[Hashable, Scalar]:
        reduce = self.field.reduce
        rows = self.rows
        out = dict(vec)
        for col in [c for c in out if c in rows]:
            coeff = out.get(col)
            if not coeff:
                continue
            for c, x in rows[col].items():
                value = reduce(out.get(c, 0) - coeff * x)
                if value:
                    out[c] = value
                else:
                    out.pop(c, None)
        return out

    def insert(self, vec: Dict[Hashable, Scalar]) -> Optional[Dict[Hashable, Scalar]]:
        """Add a vector; return the new normalized row, or None if already spanned"""
        residue = self.reduce(vec)
        if not residue:
            return None
        reduce = self.field.reduce
        pivot = max(residue, key=self.key) if self.key else max(residue)
        scale = self.field.inv(residue[pivot])
        residue = {c: reduce(x * scale) for c, x in residue.items()}
        for row in self.rows.values():
            coeff = row.get(pivot)
            if coeff:
                for c, x in residue.items():
                    value = reduce(row.get(c, 0) - coeff * x)
                    if value:
                        row[c] = value
                    else:
                        row.pop(c, None)
        self.rows[pivot] = residue
        return residue

    def contains(self, vec: Dict[Hashable, Scalar]) -> bool:
        return not self.reduce(vec)

    def coordinates(self, vec: Dict[Hashable, Scalar]) -> Dict[Hashable, Scalar]:
        """Coefficients of vec on the basis rows, keyed by pivot"""
        if self.reduce(vec):
            raise InternalBasisError("vector does not lie in the span")
        return {p: vec[p] for p in self.rows if vec.get(p)}

    def basis(self) -> List[Dict[Hashable, Scalar]]:
        return [self.rows[p] for p in self.pivots]

    def copy(self) -> "EchelonBasis":
        clone = EchelonBasis(self.field, self.key)
        clone.rows = {p: dict(row) for p, row in self.rows.items()}
        return clone


# ==================== Graded spans ====================

class GradedSpan:
    """Per-(bi)degree reduced bases of a graded subspace of a polynomial ring"""

    def __init__(self, nvars: int, grading: Callable[[Exponents], Hashable],
                 field: CoefficientField = QQ):
        self.nvars = nvars
        self.grading = grading
        self.field = field
        self.slices: Dict[Hashable, EchelonBasis] = {}

    def grade_of(self, poly: SparsePolynomial) -> Optional[Hashable]:
        grades = poly.grades(self.grading)
        if len(grades) > 1:
            raise UsageError(f"polynomial is not homogeneous: grades {sorted(grades)}")
        return next(iter(grades), None)

    def add(self, poly: SparsePolynomial) -> Optional[SparsePolynomial]:
        grade = self.grade_of(poly)
        if grade is None:
            return None
        basis = self.slices.setdefault(grade, EchelonBasis(self.field))
        row = basis.insert(poly.terms)
        if row is None:
            return None
        return SparsePolynomial._raw(self.nvars, dict(row), self.field)

    def contains(self, poly: SparsePolynomial) -> bool:
        grade = self.grade_of(poly)
        if grade is None:
            return True
        basis = self.slices.get(grade)
        return basis is not None and basis.contains(poly.terms)

    def grades(self) -> List[Hashable]:
        return sorted(g for g, basis in self.slices.items() if len(basis))

    def dims(self) -> Dict[Hashable, int]:
        return {g: len(self.slices[g]) for g in self.grades()}

    @property
    def total_dim(self) -> int:
        return sum(len(basis) for basis in self.slices.values())

    def basis(self, grade: Hashable) -> List[SparsePolynomial]:
        basis = self.slices.get(grade)
        if basis is None:
            return []
        return [SparsePolynomial._raw(self.nvars, dict(row), self.field) for row in basis.basis()]

    def copy(self) -> "GradedSpan":
        clone = GradedSpan(self.nvars, self.grading, self.field)
        clone.slices = {g: basis.copy() for g, basis in self.slices.items()}
        return clone


def _apply_all(ops, poly):
    return [op(poly) for op in ops]


def grow_span(span: GradedSpan, frontier: List[SparsePolynomial],
              ops: Sequence[Callable[[SparsePolynomial], SparsePolynomial]],
              workers: int = 1) -> List[SparsePolynomial]:
    """Apply every operator to the frontier once; return the vectors that enlarged span"""
    if workers > 1 and len(frontier) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            images = list(executor.map(partial(_apply_all, ops), frontier))
    else:
        images = [_apply_all(ops, poly) for poly in frontier]
    added = []
    for batch in images:
        for image in batch:
            if image:
                row = span.add(image)
                if row is not None:
                    added.append(row)
    return added


def graded_span(generators: Sequence[SparsePolynomial],
                closure_ops: Sequence[Callable[[SparsePolynomial], SparsePolynomial]],
                grading: Callable[[Exponents], Hashable] = total_degree,
                field: Optional[CoefficientField] = None,
                workers: int = 1) -> GradedSpan:
    """Smallest graded subspace containing the generators and stable under closure_ops"""
    if not generators:
        raise UsageError("graded_span needs at least one generator")
    field = field or generators[0].field
    span = GradedSpan(generators[0].nvars, grading, field)
    frontier = []
    for generator in generators:
        row = span.add(generator.to_field(field) if generator.field != field else generator)
        if row is not None:
            frontier.append(row)
    rounds = 0
    while frontier:
        frontier = grow_span(span, frontier, closure_ops, workers)
        rounds += 1
    logger.debug("graded span closed after %d rounds, total dim %d", rounds, span.total_dim)
    return span


# ==================== Rank and kernels ====================

Row = Union[Sequence[Scalar], Dict[int, Scalar]]


def _as_sparse(row: Row) -> Dict[int, Scalar]:
    if isinstance(row, dict):
        return {c: v for c, v in row.items() if v}
    return {c: v for c, v in enumerate(row) if v}


def _integer_row(row: Dict[int, Scalar]) -> Dict[int, int]:
    denominator = 1
    for value in row.values():
        if isinstance(value, Fraction):
            d = value.denominator
            denominator = denominator * d // math.gcd(denominator, d)
    return {c: int(v * denominator) for c, v in row.items()}


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    content = 0
    for value in row.values():
        content = math.gcd(content, value)
    if content > 1:
        return {c: v // content for c, v in row.items()}
    return row


def exact_rank(rows: Sequence[Row]) -> int:
    """Fraction-free integer elimination; the rank is unconditional"""
    pivots: Dict[int, Dict[int, int]] = {}
    for raw in rows:
        vec = _primitive(_integer_row(_as_sparse(raw)))
        while vec:
            lead = max(vec)
            pivot_row = pivots.get(lead)
            if pivot_row is None:
                pivots[lead] = vec
                break
            a, b = vec[lead], pivot_row[lead]
            g = math.gcd(a, b)
            fa, fb = b // g, a // g
            combined = {}
            for c in set(vec) | set(pivot_row):
                value = fa * vec.get(c, 0) - fb * pivot_row.get(c, 0)
                if value:
                    combined[c] = value
            vec = _primitive(combined)
    return len(pivots)


def modular_rank(rows: Sequence[Row], p: int) -> int:
    field = CoefficientField.prime(p)
    basis = EchelonBasis(field)
    for raw in rows:
        basis.insert({c: field.reduce(v) for c, v in _integer_row(_as_sparse(raw)).items()})
    return len(basis)


def seeded_primes(seed: int, count: int = 2) -> List[int]:
    """Distinct 31-bit primes drawn from a seeded generator, so runs replay"""
    rng = random.Random(seed)
    primes: List[int] = []
    while len(primes) < count:
        candidate = nextprime(rng.randrange(2**30, 2**31 - 2**20))
        if candidate not in primes:
            primes.append(int(candidate))
    return primes


@dataclass
class RankCertificate:
    rank: int
    certificate: str
    primes: List[int] = dataclass_field(default_factory=list)


def rank_certified(rows: Sequence[Row], mode: str = "exact", seed: int = 20011) -> RankCertificate:
    if mode == "exact":
        return RankCertificate(exact_rank(rows), "exact")
    if mode != "modular_consensus":
        raise UsageError(f"unknown rank mode {mode!r}")
    primes = seeded_primes(seed)
    ranks = [modular_rank(rows, p) for p in primes]
    if ranks[0] == ranks[1]:
        return RankCertificate(ranks[0], "consensus", primes)
    logger.info("modular ranks %s disagree, escalating to exact elimination", ranks)
    return RankCertificate(exact_rank(rows), "exact", primes)


def kernel(rows: Sequence[Row], ncols: int,
           field: CoefficientField = QQ) -> List[Dict[int, Scalar]]:
    """Basis of {x : A x = 0} for the matrix with the given rows"""
    basis = EchelonBasis(field)
    for raw in rows:
        basis.insert({c: field.reduce(v) for c, v in _as_sparse(raw).items()})
    pivots = set(basis.rows)
    result = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = {free: 1}
        for pivot, row in basis.rows.items():
            coeff = row.get(free)
            if coeff:
                vec[pivot] = field.reduce(-coeff)
        result.append(vec)
    return result
