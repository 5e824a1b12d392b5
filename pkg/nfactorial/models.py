"""
Result models: one pydantic model per task plus the TaskResult envelope.

Bigraded series are carried as [xdeg, ydeg, dim] triples sorted
lexicographically; JSON output is canonical (sorted keys).
"""
import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

Triple = List[int]


class DimOutputs(BaseModel):
    sigma: str
    n: int
    dim: int
    expected: int
    bigraded: List[Triple]
    top_bidegree: List[int]
    d_sigma: int
    regular_rep: bool
    top_class: bool
    sign_multiplicities: List[Triple]
    sign_at_top_only: bool
    gorenstein: Optional[bool] = None
    tau_symmetry: bool
    vanishing_cases: int
    vanishing_ok: bool
    traces: Dict[str, List[Triple]]

    @property
    def passed(self) -> bool:
        return (
            self.dim == self.expected
            and self.regular_rep
            and self.top_class
            and self.sign_at_top_only
            and self.gorenstein is not False
            and self.tau_symmetry
            and self.vanishing_ok
        )


class SignOutputs(BaseModel):
    sigma: str
    sign_multiplicities: List[Triple]
    top_bidegree: List[int]
    sign_at_top_only: bool

    @property
    def passed(self) -> bool:
        return self.sign_at_top_only


class LowestSignOutputs(BaseModel):
    n: int
    degree: int
    multiplicity: int
    expected_degree: int
    remainder: int
    unique_iff_remainder_zero: bool

    @property
    def passed(self) -> bool:
        return self.degree == self.expected_degree and self.unique_iff_remainder_zero


class SpringerOutputs(BaseModel):
    sigma: str
    dual: str
    tanisaki_dims: List[int]
    dcp_dual_dims: List[int]
    dim: int
    multinomial: int
    top_degree: int
    tanisaki_stable: bool
    dcp_stable: bool

    @property
    def passed(self) -> bool:
        return (
            self.dim == self.multinomial
            and self.tanisaki_dims == self.dcp_dual_dims
            and self.tanisaki_stable
            and self.dcp_stable
        )


class TSigmaOutputs(BaseModel):
    sigma: str
    s_bigraded: List[Triple]
    t_bigraded: List[Triple]
    radical_bigraded: List[Triple]
    t_dim: int
    top_bidegree: List[int]
    d_sigma: int
    top_sign_line: bool
    gorenstein: bool
    degree_one_preserved: bool
    rebuilt_radical_zero: bool
    symmetric: bool
    matches_harmonics: Optional[bool] = None
    report_passed: bool

    @property
    def passed(self) -> bool:
        return self.report_passed


class GrOutputs(BaseModel):
    p: int
    q: int
    r: int
    sigma: str
    n: int
    gr_dims: List[int]
    a_collapsed: List[int]
    sign_layers: List[int]
    d_sigma: int
    top_degrees: Dict[str, int]
    expected_top_degrees: Dict[str, int]
    layers_stable: bool
    jp_equals_dcp: bool
    jqvee_equals_dual_dcp: bool
    membership_sweeps: bool
    coinvariant_model: Optional[bool] = None
    comparison_passed: bool

    @property
    def passed(self) -> bool:
        return (
            self.comparison_passed
            and self.jp_equals_dcp
            and self.jqvee_equals_dual_dcp
            and self.membership_sweeps
            and self.coinvariant_model is not False
        )


class CharPOutputs(BaseModel):
    n: int
    p: int
    dim_divided: int
    dim_classical: int
    in_range: bool
    conjecture_status: str
    guard_ok: bool
    identities: Optional[Dict[str, bool]] = None
    box: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        ok = self.guard_ok and self.dim_divided <= self.dim_classical
        if self.identities is not None:
            ok = ok and all(self.identities.values())
        if self.box is not None:
            ok = ok and bool(self.box["passed"])
        return ok


class CounterexampleOutputs(BaseModel):
    p: int
    dim_divided: int
    dim_rational: int
    expected: List[int]

    @property
    def passed(self) -> bool:
        return [self.dim_divided, self.dim_rational] == self.expected


class NilpairOutputs(BaseModel):
    sigma: str
    n: int
    commute: bool
    centralizer_dim: int
    semisimple: bool
    h_commute: bool
    bracket_checks: Dict[str, bool]
    cartan_check: bool
    integrality_check: bool
    deformation_checks: Dict[str, bool]
    jordan_types: List[str]
    transpose_ok: bool
    h1: List[str]
    h2: List[str]
    report_passed: bool

    @property
    def passed(self) -> bool:
        return self.report_passed


class FibreOutputs(BaseModel):
    lam: str
    colength: int
    basis_ok: bool
    zero_fibre_matches: Optional[bool] = None
    point_colength: Optional[int] = None
    sigma_colength: Optional[int] = None
    passed: bool


class HilbOutputs(BaseModel):
    sigma: str
    n: int
    colength: int
    fibres: List[FibreOutputs]
    b_fixed: bool
    corner_criterion_agrees: bool
    n_before: int
    n_after: int
    n_predicted: int
    n_decreases: bool
    maximal_rank: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return (
            self.colength == self.n
            and all(f.passed for f in self.fibres)
            and self.corner_criterion_agrees
            and self.n_after == self.n_predicted
            and self.maximal_rank is not False
        )


class TaskResult(BaseModel):
    """One task outcome; serialized as a flat record"""

    model_config = ConfigDict(populate_by_name=True)

    task: str
    inputs: Dict[str, Any]
    outputs: Dict[str, Any]
    passed: bool = Field(alias="pass")
    certificate: str = "exact"
    engine_version: str
    prime_seed: int
    elapsed_ms: Optional[int] = None

    def record(self) -> Dict[str, Any]:
        flat: Dict[str, Any] = {}
        flat.update(self.inputs)
        flat.update(self.outputs)
        flat.update(
            task=self.task,
            certificate=self.certificate,
            engine_version=self.engine_version,
            prime_seed=self.prime_seed,
        )
        flat["pass"] = self.passed
        if self.elapsed_ms is not None:
            flat["elapsed_ms"] = self.elapsed_ms
        return flat

    def to_json(self) -> str:
        return canonical_json(self.record())

    def to_tsv(self) -> str:
        inputs = ";".join(f"{k}={self.inputs[k]}" for k in sorted(self.inputs))
        columns = [self.task, inputs, "pass" if self.passed else "fail", self.certificate,
                   canonical_json(self.outputs)]
        if self.elapsed_ms is not None:
            columns.append(str(self.elapsed_ms))
        return "\t".join(columns)

    @property
    def sort_key(self):
        return self.task, canonical_json(self.inputs)


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True)
