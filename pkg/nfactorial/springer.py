"""
Tanisaki and de Concini-Procesi presentations and their graded quotients.

Quotients are computed degree by degree.  At degree d the candidate
monomials are x_i * b for b standard in degree d-1; every other monomial M is
rewritten as x_j * NF(M / x_j) with x_j the first variable dividing M.  The
relations in degree d are the images of x_i * (m - NF(m)) for nonstandard m
of degree d-1 together with the degree-d generators, echelonized with the
lexicographically largest candidate as pivot.  The standard monomials left
over are therefore the lex-smallest ones.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from nfactorial.errors import QuotientBoundError, UsageError
from nfactorial.exactalg import (
    QQ,
    CoefficientField,
    EchelonBasis,
    Exponents,
    Scalar,
    SparsePolynomial,
    elementary_symmetric,
    monomials_of_degree,
    s_htk,
)
from nfactorial.partitions import (
    Partition,
    box_plus_row,
    dual,
    iter_admissible_kr,
    n_k,
    top_degree_formulas,
)
from nfactorial.symgroup import generators as group_generators

logger = logging.getLogger(__name__)

Vector = Dict[Exponents, Scalar]


@dataclass
class IdealPresentation:
    n: int
    generators: List[SparsePolynomial]
    tag: str
    params: Dict[str, object] = field(default_factory=dict)

    def by_degree(self) -> Dict[int, List[SparsePolynomial]]:
        grouped: Dict[int, List[SparsePolynomial]] = {}
        for g in self.generators:
            degrees = {sum(e) for e in g.terms}
            if len(degrees) > 1:
                raise UsageError(f"{self.tag} generator {g} is not homogeneous")
            if degrees:
                grouped.setdefault(degrees.pop(), []).append(g)
        return grouped


def _dedup(polys: Sequence[SparsePolynomial]) -> List[SparsePolynomial]:
    seen = set()
    result = []
    for poly in polys:
        if poly.is_zero() or poly in seen:
            continue
        seen.add(poly)
        result.append(poly)
    return result


# ==================== Presentations ====================

def tanisaki_generators(sigma: Partition) -> IdealPresentation:
    n = sigma.n
    gens = []
    for k, r in iter_admissible_kr(sigma):
        for subset in itertools.combinations(range(n), k):
            gens.append(elementary_symmetric(n, subset, r))
    return IdealPresentation(n, _dedup(gens), "tanisaki", {"sigma": str(sigma)})


def dcp_generators(sigma: Partition) -> IdealPresentation:
    """S_(h,t,k) on every t-subset with h + t = n_k + 1, for 0 <= k <= sigma_0"""
    n = sigma.n
    gens = []
    for k in range(sigma[0] + 1):
        tail = n_k(sigma, k)
        for t in range(1, n + 1):
            h = tail + 1 - t
            if h < 0:
                continue
            for subset in itertools.combinations(range(n), t):
                gens.append(s_htk(h, t, k, subset, n))
    return IdealPresentation(n, _dedup(gens), "dcp", {"sigma": str(sigma)})


def coinvariant_presentation(n: int) -> IdealPresentation:
    gens = [elementary_symmetric(n, range(n), r) for r in range(1, n + 1)]
    return IdealPresentation(n, gens, "coinvariant", {"n": n})


def jp_presentation(n: int, p: int) -> IdealPresentation:
    """The symmetric ideal J plus the p-th powers of the variables"""
    if p < 1:
        raise UsageError(f"p must be positive, got {p}")
    gens = coinvariant_presentation(n).generators
    gens += [SparsePolynomial.variable(n, i, p) for i in range(n)]
    return IdealPresentation(n, _dedup(gens), "jp", {"n": n, "p": p})


def jqvee_presentation(n: int, q: int, r: int) -> IdealPresentation:
    """q-th powers of all (r+1)-fold products of distinct variables, plus J_(q+1)"""
    if q < 1 or r < 0 or r + 1 > n:
        raise UsageError(f"invalid (q, r) = ({q}, {r}) for n = {n}")
    gens = []
    for subset in itertools.combinations(range(n), r + 1):
        exps = [0] * n
        for index in subset:
            exps[index] = q
        gens.append(SparsePolynomial.monomial(exps))
    gens += jp_presentation(n, q + 1).generators
    return IdealPresentation(n, _dedup(gens), "jqvee", {"n": n, "q": q, "r": r})


def multinomial_dimension(sigma: Partition) -> int:
    """n! / prod sigma_i!  (a known count, used only as a cross-check)"""
    denominator = 1
    for part in sigma.parts:
        denominator *= math.factorial(part)
    return math.factorial(sigma.n) // denominator


def permutation_stable(pres: IdealPresentation) -> bool:
    members = set(pres.generators)
    for perm in group_generators(pres.n):
        for g in pres.generators:
            if g.permute(perm) not in members:
                return False
    return True


# ==================== Graded quotients ====================

def _lex_first_variable(exps: Exponents) -> int:
    for index, e in enumerate(exps):
        if e:
            return index
    raise UsageError("constant monomial has no dividing variable")


def _shift(exps: Exponents, index: int, delta: int) -> Exponents:
    out = list(exps)
    out[index] += delta
    return tuple(out)


class GradedQuotientRing:
    """
    P_n / I for a homogeneous ideal I with finite-dimensional quotient.

    Built eagerly by `graded_quotient`; afterwards read-only apart from the
    normal form memo.
    """

    def __init__(self, presentation: IdealPresentation, field_: CoefficientField = QQ):
        self.presentation = presentation
        self.n = presentation.n
        self.field = field_
        self.standard: Dict[int, List[Exponents]] = {}
        self._standard_sets: Dict[int, set] = {}
        self._candidates: Dict[int, set] = {}
        self._echelons: Dict[int, EchelonBasis] = {}
        self._nf: Dict[Exponents, Vector] = {}
        self.computed_through = -1

    # ---- queries ----

    @property
    def hilbert(self) -> Dict[int, int]:
        return {d: len(basis) for d, basis in self.standard.items() if basis}

    @property
    def total_dim(self) -> int:
        return sum(len(basis) for basis in self.standard.values())

    @property
    def top_degree(self) -> int:
        return max((d for d, basis in self.standard.items() if basis), default=-1)

    def basis(self, degree: int) -> List[Exponents]:
        return self.standard.get(degree, [])

    def nf_monomial(self, exps: Exponents) -> Vector:
        """Normal form of a monomial as a combination of standard monomials"""
        exps = tuple(exps)
        cached = self._nf.get(exps)
        if cached is not None:
            return cached
        degree = sum(exps)
        if degree > self.computed_through:
            result: Vector = {}
        elif exps in self._standard_sets.get(degree, ()):
            result = {exps: 1}
        else:
            echelon = self._echelons.get(degree)
            if echelon is None:
                # nothing survives in this degree
                result = {}
            else:
                result = echelon.reduce(self._expand(exps))
        self._nf[exps] = result
        return result

    def normal_form(self, f: SparsePolynomial) -> Vector:
        reduce = self.field.reduce
        out: Vector = {}
        for exps, coeff in f.terms.items():
            for std, c in self.nf_monomial(exps).items():
                value = reduce(out.get(std, 0) + coeff * c)
                if value:
                    out[std] = value
                else:
                    out.pop(std, None)
        return out

    def contains(self, f: SparsePolynomial) -> bool:
        if f.field != self.field:
            f = f.to_field(self.field)
        return not self.normal_form(f)

    def multiply(self, a: Exponents, b: Exponents) -> Vector:
        return self.nf_monomial(tuple(x + y for x, y in zip(a, b)))

    def act(self, perm: Sequence[int], exps: Exponents) -> Vector:
        """Normal form of the permuted standard monomial"""
        image = [0] * self.n
        for i, e in enumerate(exps):
            image[perm[i]] = e
        return self.nf_monomial(tuple(image))

    # ---- construction ----

    def _expand(self, exps: Exponents) -> Vector:
        """Rewrite a degree-d monomial over the degree-d candidates"""
        degree = sum(exps)
        if exps in self._candidates.get(degree, ()):
            return {exps: 1}
        j = _lex_first_variable(exps)
        lower = self.nf_monomial(_shift(exps, j, -1))
        return {_shift(std, j, 1): c for std, c in lower.items()}

    def _expand_poly(self, vec: Vector) -> Vector:
        reduce = self.field.reduce
        out: Vector = {}
        for exps, coeff in vec.items():
            for cand, c in self._expand(exps).items():
                value = reduce(out.get(cand, 0) + coeff * c)
                if value:
                    out[cand] = value
                else:
                    out.pop(cand, None)
        return out

    def _set_standard(self, degree: int, standard: List[Exponents]) -> None:
        self.standard[degree] = sorted(standard)
        self._standard_sets[degree] = set(standard)
        self.computed_through = degree

    def build(self, top: int) -> "GradedQuotientRing":
        n = self.n
        reduce = self.field.reduce
        by_degree = self.presentation.by_degree()
        if any(reduce(g.constant_term()) for g in by_degree.get(0, [])):
            self._set_standard(0, [])
            return self
        self._set_standard(0, [(0,) * n])
        for degree in range(1, top + 1):
            previous = self.standard[degree - 1]
            if not previous:
                self.computed_through = top
                break
            candidates = {_shift(b, i, 1) for b in previous for i in range(n)}
            self._candidates[degree] = candidates
            echelon = EchelonBasis(self.field)
            self._echelons[degree] = echelon
            previous_set = self._standard_sets[degree - 1]
            for m in monomials_of_degree(n, degree - 1):
                if m in previous_set:
                    continue
                nf_m = self.nf_monomial(m)
                for i in range(n):
                    image = _shift(m, i, 1)
                    if image not in candidates and _lex_first_variable(image) == i:
                        continue
                    relation = dict(self._expand(image))
                    for std, c in nf_m.items():
                        cand = _shift(std, i, 1)
                        value = reduce(relation.get(cand, 0) - c)
                        if value:
                            relation[cand] = value
                        else:
                            relation.pop(cand, None)
                    if relation:
                        echelon.insert(relation)
                if len(echelon) == len(candidates):
                    break
            for g in by_degree.get(degree, []):
                if len(echelon) == len(candidates):
                    break
                echelon.insert(self._expand_poly(g.to_field(self.field).terms))
            standard = [c for c in candidates if c not in echelon.rows]
            self.computed_through = degree
            self._set_standard(degree, standard)
            logger.debug("%s degree %d: %d standard monomials",
                         self.presentation.tag, degree, len(standard))
        if self.standard.get(top):
            raise QuotientBoundError(
                f"{self.presentation.tag} quotient is still nonzero in degree {top}"
            )
        return self


def graded_quotient(pres: IdealPresentation, top: Optional[int] = None,
                    field_: CoefficientField = QQ) -> GradedQuotientRing:
    if top is None:
        top = pres.n * (pres.n - 1) // 2 + 1
    return GradedQuotientRing(pres, field_).build(top)


QuotientLike = Union[IdealPresentation, GradedQuotientRing]


def _as_quotient(ideal: QuotientLike) -> GradedQuotientRing:
    if isinstance(ideal, GradedQuotientRing):
        return ideal
    return graded_quotient(ideal)


def ideal_membership(f: SparsePolynomial, ideal: QuotientLike) -> bool:
    degrees = {sum(e) for e in f.terms}
    if len(degrees) > 1:
        raise UsageError("membership is tested for homogeneous polynomials only")
    return _as_quotient(ideal).contains(f)


def ideals_equal(a: QuotientLike, b: QuotientLike) -> bool:
    qa, qb = _as_quotient(a), _as_quotient(b)
    return (
        all(qb.contains(g) for g in qa.presentation.generators)
        and all(qa.contains(g) for g in qb.presentation.generators)
    )


def hilbert_series(q: GradedQuotientRing) -> List[int]:
    return [len(q.basis(d)) for d in range(q.top_degree + 1)]


# ==================== Box plus one row ====================

@dataclass
class BoxPlusRowIdeals:
    p: int
    q: int
    r: int
    jp_equals_dcp: bool
    jqvee_equals_dual_dcp: bool
    jp_sweep: bool
    jqvee_sweep: bool
    top_degrees: Tuple[int, int]
    expected_top_degrees: Tuple[int, int]

    @property
    def top_degrees_match(self) -> bool:
        return self.top_degrees == self.expected_top_degrees

    @property
    def passed(self) -> bool:
        return (self.jp_equals_dcp and self.jqvee_equals_dual_dcp and self.jp_sweep
                and self.jqvee_sweep and self.top_degrees_match)


def _s_htk_sweep(sigma: Partition, n: int, quotient: GradedQuotientRing) -> bool:
    """Every S_(h,t,k) with h + t >= n_k + 1 lies in the ideal (one and two degrees past)"""
    for k in range(sigma[0] + 1):
        tail = n_k(sigma, k)
        for t in range(1, n + 1):
            base = max(0, tail + 1 - t)
            for h in (base, base + 1):
                for subset in itertools.combinations(range(n), t):
                    if not quotient.contains(s_htk(h, t, k, subset, n)):
                        logger.info("S_(%d,%d,%d) on %s not in %s", h, t, k, subset,
                                    quotient.presentation.tag)
                        return False
    return True


def verify_box_plus_row_ideals(p: int, q: int, r: int) -> BoxPlusRowIdeals:
    sigma = box_plus_row(p, q, r)
    sigma_dual = dual(sigma)
    n = sigma.n
    jp = graded_quotient(jp_presentation(n, p))
    jqvee = graded_quotient(jqvee_presentation(n, q, r))
    dcp = graded_quotient(dcp_generators(sigma))
    dcp_dual = graded_quotient(dcp_generators(sigma_dual))
    tops = (
        graded_quotient(tanisaki_generators(sigma)).top_degree,
        graded_quotient(tanisaki_generators(sigma_dual)).top_degree,
    )
    return BoxPlusRowIdeals(
        p=p,
        q=q,
        r=r,
        jp_equals_dcp=ideals_equal(jp, dcp),
        jqvee_equals_dual_dcp=ideals_equal(jqvee, dcp_dual),
        jp_sweep=_s_htk_sweep(sigma, n, jp),
        jqvee_sweep=_s_htk_sweep(sigma_dual, n, jqvee),
        top_degrees=tops,
        expected_top_degrees=top_degree_formulas(p, q, r),
    )
