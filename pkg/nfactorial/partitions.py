"""
Partition and diagram combinatorics.

A partition sigma_0 >= sigma_1 >= ... >= sigma_m > 0 is drawn as the diagram
D_sigma = {(i, j) : i < sigma_j}; column index i, row index j.  Every other
module indexes variables by the cells of D_sigma in row-major order.
"""
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from sympy.utilities.iterables import partitions as _sympy_partitions

from nfactorial.errors import UsageError


@dataclass(frozen=True)
class Partition:
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise UsageError("the empty partition is not accepted")
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise UsageError(f"parts must be nonincreasing: {parts}")
        if parts[-1] <= 0:
            raise UsageError(f"parts must be strictly positive: {parts}")

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse the comma-separated form used on the command line ("3,1,1")"""
        try:
            parts = tuple(int(token) for token in text.replace(" ", "").split(","))
        except ValueError:
            raise UsageError(f"malformed partition string: {text!r}")
        return cls(parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def m(self) -> int:
        """Index of the last row, so the partition has m+1 parts"""
        return len(self.parts) - 1

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, j: int) -> int:
        return self.parts[j] if 0 <= j < len(self.parts) else 0

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)


@dataclass(frozen=True)
class Cell:
    i: int
    j: int


@dataclass(frozen=True)
class DiagramStats:
    cells: Tuple[Cell, ...]
    d_sigma: int
    d_ideal: int
    N: int


def partitions_of(n: int) -> List[Partition]:
    """All partitions of n, largest first in reverse lexicographic order"""
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    result = []
    for multiplicities in _sympy_partitions(n):
        parts = []
        for part in sorted(multiplicities, reverse=True):
            parts.extend([part] * multiplicities[part])
        result.append(Partition(tuple(parts)))
    return sorted(result, key=lambda s: s.parts, reverse=True)


def dual(sigma: Partition) -> Partition:
    return Partition(tuple(sum(1 for p in sigma.parts if p > k) for k in range(sigma.parts[0])))


def cells(sigma: Partition) -> List[Cell]:
    """Cells of D_sigma in row-major order: j ascending, then i ascending"""
    return [Cell(i, j) for j, part in enumerate(sigma.parts) for i in range(part)]


def diagram_stats(sigma: Partition) -> DiagramStats:
    diagram = cells(sigma)
    d_ideal = 1 + max(c.i + c.j for c in diagram)
    N = d_ideal * (d_ideal + 1) // 2 - sigma.n
    return DiagramStats(
        cells=tuple(diagram),
        d_sigma=sum(c.i + c.j for c in diagram),
        d_ideal=d_ideal,
        N=N,
    )


def _dual_part(sigma: Partition, s: int) -> int:
    conj = dual(sigma).parts
    return conj[s] if s < len(conj) else 0


def d_k(sigma: Partition, k: int) -> int:
    """n minus the first n-k parts of the dual partition (zero padded)"""
    n = sigma.n
    if not 1 <= k <= n:
        raise UsageError(f"k must lie in 1..{n}, got {k}")
    return n - sum(_dual_part(sigma, s) for s in range(n - k))


def n_k(sigma: Partition, k: int) -> int:
    """Tail sum sigma'_k + sigma'_{k+1} + ... of the dual partition"""
    if k < 0:
        raise UsageError(f"k must be nonnegative, got {k}")
    return sum(dual(sigma).parts[k:])


def box_plus_row(p: int, q: int, r: int) -> Partition:
    """The partition with q parts equal to p followed by one part r"""
    if not (p > r >= 0 and p > 1 and q >= 1):
        raise UsageError(f"need p > r >= 0, p > 1, q >= 1; got p={p}, q={q}, r={r}")
    return Partition((p,) * q + ((r,) if r else ()))


def n_k_closed_form(p: int, q: int, r: int, k: int) -> int:
    if 0 <= k <= r:
        return q * (p - k) + (r - k)
    if r <= k < p:
        return q * (p - k)
    return 0


def n_k_dual_closed_form(p: int, q: int, r: int, k: int) -> int:
    if 0 <= k <= q:
        return p * (q - k) + r
    return 0


def top_degree_formulas(p: int, q: int, r: int) -> Tuple[int, int]:
    """Top degrees (d, d_dual) of H*(X_sigma) and H*(X_sigma_dual) for sigma(p,q,r)"""
    d = (2 * q * r + p * (q - 1) * q) // 2
    d_dual = (q * p * (p - 1) + r * (r - 1)) // 2
    return d, d_dual


def staircase(m: int) -> Partition:
    if m < 1:
        raise UsageError(f"staircase size must be positive, got {m}")
    return Partition(tuple(range(m, 0, -1)))


def staircase_top_degree(m: int) -> int:
    return m * (m - 1) * (m + 1) // 3


def deg_remainder(n: int) -> Tuple[int, int]:
    """Write n = 1 + 2 + ... + m + s with 0 <= s < m+1; return (deg(n), s)"""
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    m = 0
    while (m + 1) * (m + 2) // 2 <= n:
        m += 1
    s = n - m * (m + 1) // 2
    deg = sum(k * (k - 1) for k in range(1, m + 1)) + s * m
    return deg, s


@dataclass(frozen=True)
class Classification:
    kind: str
    b_fixed: bool
    p: Optional[int] = None
    q: Optional[int] = None
    r: Optional[int] = None


def is_b_fixed(sigma: Partition) -> bool:
    return all(a > b for a, b in zip(sigma.parts, sigma.parts[1:]))


def classify(sigma: Partition) -> Classification:
    parts = sigma.parts
    b_fixed = is_b_fixed(sigma)
    if parts == tuple(range(len(parts), 0, -1)):
        return Classification("staircase", b_fixed)
    p = parts[0]
    q = sum(1 for part in parts if part == p)
    if q == len(parts):
        return Classification("box", b_fixed, p=p, q=q, r=0)
    if q == len(parts) - 1 and p > 1:
        return Classification("box_plus_row", b_fixed, p=p, q=q, r=parts[-1])
    return Classification("other", b_fixed)


def reduce_step(sigma: Partition) -> Partition:
    """Append a part equal to 1 (the lambda = 0 fibre of the one-point family)"""
    return Partition(sigma.parts + (1,))


def predicted_n_after_step(sigma: Partition) -> int:
    stats = diagram_stats(sigma)
    if stats.d_ideal >= sigma.m + 2:
        return stats.N - 1
    return (sigma.m + 2) * (sigma.m + 3) // 2 - (sigma.n + 1)


def iter_admissible_kr(sigma: Partition) -> Iterator[Tuple[int, int]]:
    """Pairs (k, r) with k - d_k(sigma) < r <= k"""
    for k in range(1, sigma.n + 1):
        for r in range(max(1, k - d_k(sigma, k) + 1), k + 1):
            yield k, r
