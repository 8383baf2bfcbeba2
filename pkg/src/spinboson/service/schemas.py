"""Pydantic request/response models for every command.

Complex-valued quantities cross the wire as [re, im] pairs; real values stay
plain floats. Responses echo the resolved configuration so output files are
self-describing.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

ComplexPair = tuple[float, float]


class GeneralSpec(BaseModel):
    """The eleven scalars of the general Hamiltonian; couplings may be [re, im]."""

    omega1: float = 0.0
    omega2: float = 0.0
    beta: float = 0.0
    kappa1: float | ComplexPair = 0.0
    kappa2: float | ComplexPair = 0.0
    kappa3: float | ComplexPair = 0.0
    kappa4: float | ComplexPair = 0.0
    gamma1: float | ComplexPair = 0.0
    gamma2: float | ComplexPair = 0.0
    gamma3: float | ComplexPair = 0.0
    gamma4: float | ComplexPair = 0.0


class SectorSpec(BaseModel):
    k: float | None = None
    parity: str | None = None
    mirrored: bool = False


class SpectrumRequest(BaseModel):
    model: str
    params: dict[str, float] = Field(default_factory=dict)
    general: GeneralSpec | None = None
    cutoff: int = 32
    levels: int | None = None
    dump_matrix: bool = False


class SpectrumResponse(BaseModel):
    model: str
    cutoff: list[int]
    hermitian: bool
    constant_offset: float
    eigenvalues: list[float] | list[ComplexPair]
    eigenvalues_with_offset: list[float] | None = None
    residual: float | None = None
    notes: list[str] = Field(default_factory=list)
    config: dict = Field(default_factory=dict)
    matrix: list | None = None


class ClosedFormRequest(BaseModel):
    model: str
    params: dict[str, float] = Field(default_factory=dict)
    variant: str = "both"          # printed | rederived | both
    levels: int = 10
    cutoff: int = 32


class ClosedFormRow(BaseModel):
    label: str
    printed: float | ComplexPair | None = None
    rederived: float | ComplexPair | None = None
    oracle: float | ComplexPair | None = None
    printed_error: float | None = None
    rederived_error: float | None = None


class ClosedFormResponse(BaseModel):
    model: str
    variant: str
    rows: list[ClosedFormRow]
    max_printed_error: float
    max_rederived_error: float
    notes: list[str] = Field(default_factory=list)
    config: dict = Field(default_factory=dict)


class RecurrenceRequest(BaseModel):
    model: str
    params: dict[str, float] = Field(default_factory=dict)
    sector: SectorSpec = Field(default_factory=SectorSpec)
    cutoff: int = 64               # pencil rows 0..cutoff
    scan: tuple[float, float] | None = None
    grid: int = 2000
    refine_tol: float = 1e-12
    residual_tol: float | None = None


class RootRecord(BaseModel):
    energy: float
    det_residual: float
    spinor_residual: float | None = None


class RecurrenceResponse(BaseModel):
    model: str
    sector: str
    scan: tuple[float, float]
    accepted: list[RootRecord]
    spurious: list[RootRecord]
    poles: list[RootRecord]
    oracle: list[float]
    max_pair_error: float | None = None
    unmatched_accepted: int = 0
    reliable_levels_missed: int = 0
    notes: list[str] = Field(default_factory=list)
    config: dict = Field(default_factory=dict)


class VerifyRequest(BaseModel):
    suite: str = "all"
    cutoff: int = 20
    tolerance: float | None = None


class CheckRecord(BaseModel):
    name: str
    residual: float
    tolerance: float
    passed: bool


class SuiteRecord(BaseModel):
    suite: str
    passed: bool
    checks: list[CheckRecord]
    notes: list[str] = Field(default_factory=list)


class VerifyResponse(BaseModel):
    passed: bool
    suites: list[SuiteRecord]
    config: dict = Field(default_factory=dict)


class ConvergeRequest(BaseModel):
    model: str
    params: dict[str, float] = Field(default_factory=dict)
    cutoffs: list[int] = Field(default_factory=lambda: [32, 64])
    levels: int = 10
    tolerance: float = 1e-10


class ConvergeResponse(BaseModel):
    model: str
    cutoffs: list[int]
    levels: list[list[float]]
    deltas: list[list[float]]
    converged: list[bool]
    tolerance: float
    config: dict = Field(default_factory=dict)


class ReconstructRequest(BaseModel):
    model: str
    params: dict[str, float] = Field(default_factory=dict)
    sector: SectorSpec = Field(default_factory=SectorSpec)
    energy: float
    cutoff: int = 32


class ReconstructResponse(BaseModel):
    model: str
    sector: str
    energy: float
    status: str
    det_residual: float
    spinor_residual: float | None = None
    amplitudes: list[float]
    notes: list[str] = Field(default_factory=list)
    config: dict = Field(default_factory=dict)
