import math

import pytest

from nfactorial.errors import BoundExceeded, UsageError
from nfactorial.exactalg import CoefficientField
from nfactorial.harmonics import (
    admissible_vanishing_cases,
    bigraded_triples,
    characters,
    collapse_total_degree,
    delta_sigma,
    generator_traces,
    gorenstein_blocks,
    gorenstein_check,
    harmonic_space,
    lemma_vanish,
    lowest_sign_degree,
    lowest_sign_report,
    regular_rep_check,
    sign_analysis,
    tau_symmetry,
    top_class_check,
)
from nfactorial.partitions import Partition, diagram_stats, partitions_of
from nfactorial.symgroup import long_cycle, transposition

SMALL = [sigma for n in range(1, 5) for sigma in partitions_of(n)]


def test_sigma21_dimensions(sigma21):
    H = harmonic_space(sigma21)
    assert H.total_dim == 6
    assert bigraded_triples(H.dims) == [[0, 0, 1], [0, 1, 2], [1, 0, 2], [1, 1, 1]]
    assert H.top_bidegree == (1, 1)
    assert collapse_total_degree(H.dims) == [1, 4, 1]


def test_sigma21_characters(sigma21):
    H = harmonic_space(sigma21)
    traces = generator_traces(H)
    assert traces[transposition(3)][(1, 0)] == 0
    assert traces[long_cycle(3)][(1, 0)] == -1
    assert traces[transposition(3)][(1, 1)] == -1
    assert sign_analysis(H) == {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 1}


def test_delta_sigma_degree(sigma21):
    delta = delta_sigma(sigma21)
    assert len(delta) == 6
    assert delta.degree() == diagram_stats(sigma21).d_sigma
    with pytest.raises(BoundExceeded):
        delta_sigma(Partition((5, 4)), max_n=8)


@pytest.mark.parametrize("sigma", SMALL, ids=str)
def test_n_factorial_and_structure(sigma):
    H = harmonic_space(sigma, max_n=4)
    assert H.total_dim == math.factorial(sigma.n)
    assert regular_rep_check(H)
    assert top_class_check(H)
    assert gorenstein_check(H)
    top = H.top_bidegree
    assert sum(top) == diagram_stats(sigma).d_sigma
    for grade, multiplicity in sign_analysis(H).items():
        assert multiplicity == (1 if grade == top else 0)


@pytest.mark.slow
@pytest.mark.parametrize("sigma", partitions_of(5), ids=str)
def test_n_factorial_five(sigma):
    H = harmonic_space(sigma, max_n=5)
    assert H.total_dim == 120
    assert regular_rep_check(H)


@pytest.mark.parametrize("sigma", SMALL, ids=str)
def test_tau_symmetry(sigma):
    assert tau_symmetry(sigma)


def test_characters_are_cached(sigma21):
    H = harmonic_space(sigma21)
    first = characters(H)
    assert characters(H) is first
    assert all(table[Partition((1, 1, 1))] == H.dims[g] for g, table in first.items())


def test_consensus_mode(sigma21):
    exact = harmonic_space(Partition((2, 2)))
    consensus = harmonic_space(Partition((2, 2)), mode="modular_consensus", seed=20011)
    assert consensus.dims == exact.dims
    assert consensus.certificate in ("consensus", "exact")
    assert len(consensus.primes) == 2
    assert regular_rep_check(consensus)
    with pytest.raises(UsageError):
        harmonic_space(sigma21, mode="approximate")


def test_prime_field_closure(sigma21):
    H = harmonic_space(sigma21, field_=CoefficientField.prime(5))
    assert H.certificate == "fp:5"
    assert H.total_dim == 6
    with pytest.raises(UsageError):
        gorenstein_blocks(H)


def test_gorenstein_blocks_pair_complements(sigma21):
    blocks = gorenstein_blocks(harmonic_space(sigma21))
    assert {(b.grade, b.complement) for b in blocks} == {
        ((0, 0), (1, 1)), ((1, 1), (0, 0)), ((1, 0), (0, 1)), ((0, 1), (1, 0)),
    }
    assert all(b.perfect for b in blocks)


@pytest.mark.parametrize("sigma", SMALL, ids=str)
def test_vanishing_exhaustive(sigma):
    for k, r, subset in admissible_vanishing_cases(sigma):
        assert lemma_vanish(sigma, k, r, subset)


def test_vanishing_preconditions(sigma21):
    assert lemma_vanish(sigma21, 2, 2, [1, 2])
    with pytest.raises(UsageError):
        lemma_vanish(sigma21, 1, 1, [1])
    with pytest.raises(UsageError):
        lemma_vanish(sigma21, 2, 2, [2, 1])
    with pytest.raises(UsageError):
        lemma_vanish(sigma21, 2, 2, [1, 4])


def test_lowest_sign_degree():
    assert lowest_sign_degree(2) == (1, 2)
    assert lowest_sign_degree(3) == (2, 1)
    assert lowest_sign_degree(4) == (4, 3)
    with pytest.raises(BoundExceeded):
        lowest_sign_degree(5)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lowest_sign_report(n):
    report = lowest_sign_report(n)
    assert report["degree"] == report["expected_degree"]
    assert report["unique_iff_remainder_zero"]
