import math
import random
from fractions import Fraction

import pytest
from sympy import isprime

from nfactorial.errors import ExponentOverflow, FieldError, InternalBasisError, UsageError
from nfactorial.exactalg import (
    MAX_EXPONENT,
    QQ,
    CoefficientField,
    EchelonBasis,
    SparsePolynomial,
    apolar_pair,
    apply_operator,
    complete_homogeneous,
    differentiate,
    divided_diff,
    elementary_symmetric,
    exact_rank,
    graded_span,
    kernel,
    lucas_binomial,
    modular_rank,
    monomials_of_degree,
    partial_operators,
    rank_certified,
    s_htk,
    seeded_primes,
    total_degree,
    vandermonde,
)

X = SparsePolynomial.variable(2, 0)
Y = SparsePolynomial.variable(2, 1)


def test_field_parse():
    assert CoefficientField.parse("q") == QQ
    assert CoefficientField.parse("fp:7").p == 7
    assert CoefficientField.parse("fp:7").label == "fp:7"
    with pytest.raises(FieldError):
        CoefficientField.parse("fp:8")
    with pytest.raises(UsageError):
        CoefficientField.parse("reals")


def test_field_reduce():
    f3 = CoefficientField.prime(3)
    assert f3.reduce(Fraction(1, 2)) == 2
    assert f3.reduce(-1) == 2
    assert f3.inv(2) == 2
    assert QQ.reduce(Fraction(1, 2)) == Fraction(1, 2)


def test_lucas_binomial():
    assert lucas_binomial(4, 2, 2) == 0
    assert lucas_binomial(5, 1, 2) == 1
    assert lucas_binomial(6, 3, 5) == 20 % 5
    for a in range(12):
        for m in range(a + 1):
            assert lucas_binomial(a, m, 3) == math.comb(a, m) % 3


def test_arithmetic():
    square = (X + Y) ** 2
    assert square.terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert (X - X).is_zero()
    assert (X * Y - Y * X).is_zero()
    assert square.degree() == 2
    assert (2 * X).coefficient((1, 0)) == 2


def test_arithmetic_mod_p():
    f2 = CoefficientField.prime(2)
    x, y = X.to_field(f2), Y.to_field(f2)
    assert ((x + y) ** 2).terms == {(2, 0): 1, (0, 2): 1}


def test_exponent_overflow():
    big = SparsePolynomial.monomial((MAX_EXPONENT, 0))
    with pytest.raises(ExponentOverflow):
        big * X
    with pytest.raises(UsageError):
        SparsePolynomial.monomial((-1, 0))


def test_differentiate():
    f = SparsePolynomial.monomial((3, 1))
    assert differentiate(f, 0).terms == {(2, 1): 3}
    assert differentiate(f, 0, 3).terms == {(0, 1): 6}
    assert differentiate(f, 1, 2).is_zero()


def test_divided_diff():
    x4 = SparsePolynomial.variable(1, 0, 4)
    assert divided_diff(x4, 0, 2).terms == {(2,): 6}
    assert divided_diff(x4.to_field(CoefficientField.prime(2)), 0, 2).is_zero()
    assert divided_diff(x4.to_field(CoefficientField.prime(2)), 0, 4).terms == {(0,): 1}


def test_named_polynomials():
    e2 = elementary_symmetric(3, [0, 1, 2], 2)
    assert len(e2) == 3 and all(c == 1 for c in e2.terms.values())
    with pytest.raises(UsageError):
        elementary_symmetric(3, [0, 1], 0)
    h2 = complete_homogeneous(2, [0, 1], 2)
    assert h2 == X * X + X * Y + Y * Y
    assert s_htk(0, 2, 2, [0, 1], 2) == SparsePolynomial.monomial((2, 2))


def test_vandermonde():
    v = vandermonde(3)
    assert len(v) == 6
    assert v.degree() == 3
    x = [SparsePolynomial.variable(3, i) for i in range(3)]
    assert v == (x[1] - x[0]) * (x[2] - x[0]) * (x[2] - x[1])


def test_apply_operator_and_pairing():
    f = X * X * Y
    assert apply_operator(X * Y, f) == 2 * X
    assert apolar_pair(f, f) == 2
    with pytest.raises(FieldError):
        apolar_pair(f.to_field(CoefficientField.prime(5)), f.to_field(CoefficientField.prime(5)))


def test_monomials_of_degree():
    assert monomials_of_degree(2, 2) == [(0, 2), (1, 1), (2, 0)]
    assert len(monomials_of_degree(4, 3)) == 20


def test_echelon_basis():
    basis = EchelonBasis()
    assert basis.insert({0: 1, 1: 1}) is not None
    assert basis.insert({0: 2, 1: 2}) is None
    assert basis.insert({1: 1, 2: 1}) is not None
    assert basis.contains({0: 1, 2: -1})
    assert not basis.contains({0: 1})
    assert len(basis) == 2
    with pytest.raises(InternalBasisError):
        basis.coordinates({2: 1})


def test_echelon_basis_is_order_independent():
    vectors = [{0: 1, 1: 2}, {1: 1, 2: 3}, {0: 1, 2: 1}]
    a, b = EchelonBasis(), EchelonBasis()
    for vec in vectors:
        a.insert(vec)
    for vec in reversed(vectors):
        b.insert(vec)
    assert a.rows == b.rows


def test_graded_span_of_vandermonde():
    span = graded_span([vandermonde(3)], partial_operators(range(3)), total_degree)
    assert span.total_dim == 6
    assert span.dims() == {0: 1, 1: 2, 2: 2, 3: 1}


def test_graded_span_workers_agree():
    ops = partial_operators(range(4))
    serial = graded_span([vandermonde(4)], ops, total_degree)
    threaded = graded_span([vandermonde(4)], ops, total_degree, workers=3)
    assert serial.dims() == threaded.dims()
    assert serial.total_dim == 24


def test_ranks():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
    assert exact_rank([[Fraction(1, 2), 1], [1, 2]]) == 1
    assert modular_rank([[1, 1], [1, 3]], 2) == 1
    assert exact_rank([[1, 1], [1, 3]]) == 2


def test_seeded_primes_replay():
    primes = seeded_primes(20011)
    assert primes == seeded_primes(20011)
    assert len(set(primes)) == 2
    assert all(isprime(p) for p in primes)


def test_rank_certified():
    rng = random.Random(7)
    rows = [[rng.randrange(-5, 6) for _ in range(6)] for _ in range(4)]
    rows.append([a + b for a, b in zip(rows[0], rows[1])])
    exact = rank_certified(rows)
    consensus = rank_certified(rows, mode="modular_consensus", seed=20011)
    assert exact.certificate == "exact"
    assert consensus.rank == exact.rank
    assert consensus.certificate in ("consensus", "exact")
    with pytest.raises(UsageError):
        rank_certified(rows, mode="float")


def test_kernel():
    rows = [[1, 1, 0], [0, 1, 1]]
    vectors = kernel(rows, 3)
    assert len(vectors) == 1
    for vec in vectors:
        for row in rows:
            assert sum(row[c] * v for c, v in vec.items()) == 0


def _random_poly(rng, nvars, field=QQ, terms=6, max_exponent=5):
    return SparsePolynomial(
        nvars,
        {tuple(rng.randrange(max_exponent + 1) for _ in range(nvars)): rng.randrange(-4, 5)
         for _ in range(terms)},
        field,
    )


def _planted(rng, rows, cols, rank, bound=3):
    """B * C with B = [I; R1] and C = [I | R2], so the rank is exactly `rank`"""
    left = [[int(i == j) if i < rank else rng.randint(-bound, bound) for j in range(rank)]
            for i in range(rows)]
    right = [[int(i == j) if j < rank else rng.randint(-bound, bound) for j in range(cols)]
             for i in range(rank)]
    return [[sum(left[i][t] * right[t][j] for t in range(rank)) for j in range(cols)]
            for i in range(rows)]


def test_partials_commute():
    rng = random.Random(11)
    for _ in range(50):
        f = _random_poly(rng, 4)
        for a in range(4):
            for b in range(4):
                ab = differentiate(differentiate(f, a), b)
                assert ab == differentiate(differentiate(f, b), a)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_divided_powers_compose(p):
    field = CoefficientField.prime(p)
    rng = random.Random(p)
    for _ in range(30):
        f = _random_poly(rng, 2, field, max_exponent=3 * p)
        for a in range(1, 2 * p):
            for b in range(1, 2 * p):
                composed = divided_diff(divided_diff(f, 0, b), 0, a)
                assert composed == divided_diff(f, 0, a + b).scale(math.comb(a + b, a))


def test_consensus_on_planted_ranks():
    rng = random.Random(20011)
    for _ in range(200):
        rank = rng.randint(0, 6)
        rows = _planted(rng, 7, 8, rank)
        certified = rank_certified(rows, mode="modular_consensus", seed=20011)
        assert certified.rank == rank
        assert certified.certificate == "consensus"
        assert exact_rank(rows) == rank


@pytest.mark.slow
def test_rank_of_planted_100_by_100():
    rows = _planted(random.Random(100), 100, 100, 50)
    certified = rank_certified(rows, mode="modular_consensus", seed=20011)
    assert (certified.rank, certified.certificate) == (50, "consensus")
    assert len(kernel(rows, 100)) == 50


def test_span_basis_ignores_generator_order_and_workers():
    x = [SparsePolynomial.variable(3, i) for i in range(3)]
    generators = [
        vandermonde(3),
        elementary_symmetric(3, [0, 1, 2], 2) * x[0],
        complete_homogeneous(3, [0, 1, 2], 3),
        x[0] * x[1] * x[1] - x[2] * x[2] * x[2],
    ]
    ops = partial_operators(range(3))
    reference = graded_span(generators, ops, total_degree)
    for variant in (
        graded_span(list(reversed(generators)), ops, total_degree),
        graded_span(generators[2:] + generators[:2], ops, total_degree, workers=3),
        graded_span(generators, ops, total_degree, workers=4),
    ):
        assert variant.grades() == reference.grades()
        for grade in reference.grades():
            assert variant.slices[grade].rows == reference.slices[grade].rows
            assert variant.basis(grade) == reference.basis(grade)


def test_format_names_both_variable_sets():
    f = SparsePolynomial.monomial((2, 0, 0, 1), 3)
    assert f.format(blocks=2) == "3*X1^2*Y2"
    assert str(f) == "3*x0^2*x3"
    assert str(SparsePolynomial.zero(4)) == "0"
