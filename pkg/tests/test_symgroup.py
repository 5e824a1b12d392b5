import math

from nfactorial.partitions import Partition
from nfactorial.symgroup import (
    all_permutations,
    centralizer_order,
    class_representative,
    conjugacy_classes,
    cycle_lengths,
    fixed_monomial_counts,
    generators,
    identity,
    long_cycle,
    sign,
    transposition,
)


def test_class_sizes():
    for n in range(1, 7):
        classes = conjugacy_classes(n)
        assert sum(c.size for c in classes) == math.factorial(n)
        assert classes[-1].is_identity
    sizes = {str(c.cycle_type): c.size for c in conjugacy_classes(3)}
    assert sizes == {"3": 2, "2,1": 3, "1,1,1": 1}
    assert centralizer_order(Partition((2, 1, 1))) == 4


def test_representatives():
    assert class_representative(Partition((2, 1))) == (1, 0, 2)
    assert class_representative(Partition((3,))) == (1, 2, 0)
    for c in conjugacy_classes(5):
        assert sorted(cycle_lengths(c.representative), reverse=True) == list(c.cycle_type.parts)
        assert sign(c.representative) == c.sign


def test_signs():
    assert sign(transposition(3)) == -1
    assert sign(long_cycle(3)) == 1
    assert sign(long_cycle(4)) == -1
    assert sum(sign(w) for w in all_permutations(4)) == 0


def test_generators():
    assert generators(1) == [identity(1)]
    assert generators(3) == [(1, 0, 2), (1, 2, 0)]


def test_fixed_monomial_counts():
    assert fixed_monomial_counts(identity(2), 1, 3) == [1, 2, 3, 4]
    assert fixed_monomial_counts(transposition(2), 1, 3) == [1, 0, 1, 0]
    assert fixed_monomial_counts(transposition(2), 2, 4) == [1, 0, 2, 0, 3]
