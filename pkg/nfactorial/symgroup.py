"""Symmetric group helpers: conjugacy classes, signs and characters of monomial actions"""
import itertools
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

from sympy.combinatorics import Permutation

from nfactorial.partitions import Partition, partitions_of

Perm = Tuple[int, ...]


@dataclass(frozen=True)
class ConjugacyClass:
    cycle_type: Partition
    representative: Perm
    size: int

    @property
    def sign(self) -> int:
        return (-1) ** (self.cycle_type.n - len(self.cycle_type))

    @property
    def is_identity(self) -> bool:
        return all(part == 1 for part in self.cycle_type.parts)


def identity(n: int) -> Perm:
    return tuple(range(n))


def sign(perm: Sequence[int]) -> int:
    return Permutation(list(perm)).signature()


def all_permutations(n: int) -> Iterator[Perm]:
    return itertools.permutations(range(n))


def transposition(n: int) -> Perm:
    """The transposition exchanging the first two indices"""
    perm = list(range(n))
    if n >= 2:
        perm[0], perm[1] = 1, 0
    return tuple(perm)


def long_cycle(n: int) -> Perm:
    """i -> i+1 mod n"""
    return tuple((i + 1) % n for i in range(n))


def generators(n: int) -> List[Perm]:
    """A transposition and the n-cycle; together they generate S_n"""
    if n == 1:
        return [identity(1)]
    return [transposition(n), long_cycle(n)]


def centralizer_order(cycle_type: Partition) -> int:
    counts: Dict[int, int] = {}
    for part in cycle_type.parts:
        counts[part] = counts.get(part, 0) + 1
    order = 1
    for length, multiplicity in counts.items():
        order *= length**multiplicity * math.factorial(multiplicity)
    return order


def class_representative(cycle_type: Partition) -> Perm:
    """Cycles on consecutive index blocks, longest first"""
    perm = []
    start = 0
    for length in cycle_type.parts:
        perm.extend(start + (k + 1) % length for k in range(length))
        start += length
    return tuple(perm)


def conjugacy_classes(n: int) -> List[ConjugacyClass]:
    """One entry per cycle type, identity last"""
    order = math.factorial(n)
    return [
        ConjugacyClass(mu, class_representative(mu), order // centralizer_order(mu))
        for mu in partitions_of(n)
    ]


def cycle_lengths(perm: Sequence[int]) -> List[int]:
    return [len(cycle) for cycle in Permutation(list(perm)).full_cyclic_form]


def fixed_monomial_counts(perm: Sequence[int], blocks: int, max_degree: int) -> List[int]:
    """
    Number of monomials of each degree 0..max_degree fixed by perm acting diagonally
    on `blocks` groups of n variables.  This is the trace of perm on that degree.
    """
    series = [1] + [0] * max_degree
    for length in cycle_lengths(perm):
        for _ in range(blocks):
            # multiply by 1/(1 - t^length)
            for degree in range(length, max_degree + 1):
                series[degree] += series[degree - length]
    return series
