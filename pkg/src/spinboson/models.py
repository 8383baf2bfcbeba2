"""The two-level/boson Hamiltonian family, its physical presets, and conserved charges.

The general form is

    H = w1*a'a + w2*b'b + beta*sigma_0
        + (k1*a + k2*a' + k3*b + k4*b')*sigma_+
        + (g1*a + g2*a' + g3*b + g4*b')*sigma_-

with hbar = 1 internally; presets accept physical constants and normalize on
entry. Constant offsets (e.g. zero-point terms) are carried separately and
added to reported eigenvalues, never baked into the matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from .fock import (
    Cutoff,
    FockBasis,
    SpinorOperator,
    build_annihilation,
    build_creation,
    spinor_assemble,
)
from .solver import eig_hermitian, hermitian_eigenvalues

__all__ = [
    "GeneralParams",
    "JT",
    "Dot",
    "JC",
    "JCRWA",
    "MJC",
    "Dirac",
    "PresetMap",
    "HamiltonianBuild",
    "ConservedCharge",
    "ChargeSector",
    "MODEL_KINDS",
    "preset_from_params",
    "to_general",
    "build_hamiltonian",
    "build_preset",
    "conserved_charge",
    "sector_decompose",
    "charge_sector_tables",
    "sector_matrix",
    "lowest_levels",
]

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class GeneralParams:
    """The eleven scalars of the general Hamiltonian. Non-Hermitian choices are legal."""

    omega1: float = 0.0
    omega2: float = 0.0
    beta: float = 0.0
    kappa1: complex = 0.0
    kappa2: complex = 0.0
    kappa3: complex = 0.0
    kappa4: complex = 0.0
    gamma1: complex = 0.0
    gamma2: complex = 0.0
    gamma3: complex = 0.0
    gamma4: complex = 0.0

    @property
    def needs_two_modes(self) -> bool:
        return self.omega2 != 0 or any(
            c != 0 for c in (self.kappa3, self.kappa4, self.gamma3, self.gamma4)
        )

    def kappa_terms(self):
        return ((self.kappa1, "a"), (self.kappa2, "ad"), (self.kappa3, "b"), (self.kappa4, "bd"))

    def gamma_terms(self):
        return ((self.gamma1, "a"), (self.gamma2, "ad"), (self.gamma3, "b"), (self.gamma4, "bd"))


# Physical presets. Field names double as the CLI/config parameter names.

@dataclass(frozen=True)
class JT:
    """Two-level system linearly coupled to a doubly degenerate vibration."""

    m: float = 1.0
    omega: float = 1.0
    mu_level: float = 1.0
    kappa: float = 0.2


@dataclass(frozen=True)
class Dot:
    """Parabolic quantum dot with Rashba coupling, Zeeman term, and magnetic field."""

    m_star: float = 1.0
    omega0: float = 1.0
    B: float = 0.0
    lambda_R: float = 0.2
    g: float = 2.0
    mu_bohr: float = 0.5
    charge: float = 1.0


@dataclass(frozen=True)
class JC:
    """Single-mode two-level coupling without the rotating wave approximation."""

    omega: float = 1.0
    omega0: float = 1.0
    kappa: float = 0.2


@dataclass(frozen=True)
class JCRWA:
    """Single-mode two-level coupling with the rotating wave approximation."""

    omega: float = 1.0
    omega0: float = 1.0
    kappa: float = 0.2


@dataclass(frozen=True)
class MJC:
    """Two-level system shared by two cavities with couplings lambda1, lambda2."""

    omega: float = 1.0
    omega0: float = 0.5
    lambda1: float = 0.2
    lambda2: float = 0.1


@dataclass(frozen=True)
class Dirac:
    """Relativistic oscillator for a planar spin-1/2 particle, bosonized form."""

    mass: float = 1.0
    c: float = 1.0
    omega: float = 0.1


PresetParams = JT | Dot | JC | JCRWA | MJC | Dirac

MODEL_KINDS: dict[str, type] = {
    "jt": JT,
    "dot": Dot,
    "jc": JC,
    "jc-rwa": JCRWA,
    "mjc": MJC,
    "dirac": Dirac,
}


def preset_from_params(kind: str, params: dict) -> PresetParams:
    """Build a preset from a {field name: value} mapping, rejecting unknown keys."""
    try:
        cls = MODEL_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}") from None
    known = {f.name for f in fields(cls)}
    unknown = set(params) - known
    if unknown:
        raise ValueError(f"unknown parameter(s) for {kind}: {sorted(unknown)}")
    return cls(**{k: float(v) for k, v in params.items()})


@dataclass
class PresetMap:
    """A preset rendered as general parameters plus bookkeeping."""

    general: GeneralParams
    constant_offset: float
    extras: dict
    notes: list[str] = field(default_factory=list)


def to_general(preset: PresetParams) -> PresetMap:
    """Map physical preset constants onto the general parameter set (hbar = 1).

    Derived couplings: sqrt(m*omega/4)*kappa for the vibronic model,
    sqrt(m*omega/4)*lambda_R for the dot, 2i*c*sqrt(m*omega) for the
    relativistic oscillator. The dot's magnetic field enters exactly through
    the omega1/omega2 split and a constant +omega zero-point offset.
    """
    if isinstance(preset, JT):
        c = math.sqrt(preset.m * preset.omega / 4.0) * preset.kappa
        return PresetMap(
            GeneralParams(
                omega1=preset.omega,
                omega2=preset.omega,
                beta=preset.mu_level / 2.0,
                kappa1=c,
                kappa4=c,
                gamma2=c,
                gamma3=c,
            ),
            constant_offset=0.0,
            extras={"kappa_prime": c},
        )
    if isinstance(preset, Dot):
        omega_c = preset.charge * preset.B / preset.m_star
        omega = math.sqrt(preset.omega0**2 + (omega_c / 2.0) ** 2)
        lam = math.sqrt(preset.m_star * omega / 4.0) * preset.lambda_R
        notes = []
        if preset.B != 0.0:
            notes.append(
                "dot: magnetic splitting makes omega1 != omega2; the recurrence "
                "reduction requires equal mode frequencies (set B = 0)"
            )
        return PresetMap(
            GeneralParams(
                omega1=omega + omega_c / 2.0,
                omega2=omega - omega_c / 2.0,
                beta=0.5 * preset.g * preset.mu_bohr * preset.B,
                kappa1=lam,
                kappa4=-lam,
                gamma2=lam,
                gamma3=-lam,
            ),
            constant_offset=omega,
            extras={"omega_c": omega_c, "omega_eff": omega, "lambda_prime": lam},
            notes=notes,
        )
    if isinstance(preset, JC):
        k = preset.kappa
        return PresetMap(
            GeneralParams(
                omega1=preset.omega,
                beta=preset.omega0 / 2.0,
                kappa1=k,
                kappa2=k,
                gamma1=k,
                gamma2=k,
            ),
            constant_offset=0.0,
            extras={},
        )
    if isinstance(preset, JCRWA):
        return PresetMap(
            GeneralParams(
                omega1=preset.omega,
                beta=preset.omega0 / 2.0,
                kappa1=preset.kappa,
                gamma2=preset.kappa,
            ),
            constant_offset=0.0,
            extras={},
        )
    if isinstance(preset, MJC):
        return PresetMap(
            GeneralParams(
                omega1=preset.omega,
                omega2=preset.omega,
                beta=preset.omega0,
                kappa1=preset.lambda1,
                kappa3=preset.lambda2,
                gamma2=preset.lambda1,
                gamma4=preset.lambda2,
            ),
            constant_offset=0.0,
            extras={},
            notes=[
                "mjc: boson energy applied as omega*(a'a + b'b); a reading that "
                "scales only the first mode is rejected as inconsistent"
            ],
        )
    if isinstance(preset, Dirac):
        kpp = 2j * preset.c * math.sqrt(preset.mass * preset.omega)
        return PresetMap(
            GeneralParams(beta=preset.mass * preset.c**2, kappa1=kpp, gamma2=kpp),
            constant_offset=0.0,
            extras={"kappa_double_prime": kpp},
            notes=[
                "dirac: bosonized coupling 2i*c*sqrt(m*omega) pairs anti-Hermitianly; "
                "spectra come from small charge-sector solves"
            ],
        )
    raise TypeError(f"unknown preset {preset!r}")


@dataclass
class HamiltonianBuild:
    spinor: SpinorOperator
    constant_offset: float
    hermitian: bool
    notes: list[str]
    basis: FockBasis
    general: GeneralParams


def _coupling_block(general: GeneralParams, basis: FockBasis, terms) -> np.ndarray:
    # operators built on demand and released, to keep the peak footprint at
    # one block plus one ladder matrix even for large two-mode cutoffs
    def op(name: str) -> np.ndarray:
        mode = "a" if name in ("a", "ad") else "b"
        if name.endswith("d"):
            return build_creation(basis, mode).matrix
        return build_annihilation(basis, mode).matrix

    block = np.zeros((basis.dim, basis.dim), dtype=complex)
    for coeff, name in terms:
        if coeff != 0:
            block += coeff * op(name)
    return block


def build_hamiltonian(
    general: GeneralParams,
    basis: FockBasis,
    constant_offset: float = 0.0,
    notes: list[str] | None = None,
) -> HamiltonianBuild:
    """Assemble the spinor matrix and flag Hermiticity (max |H - H'| below 1e-12)."""
    if general.needs_two_modes and not basis.two_mode:
        raise ValueError("these parameters involve mode b; a two-mode basis is required")
    occ = np.array(basis.occupations, dtype=float)
    h0_diag = general.omega1 * occ[:, 0]
    if basis.two_mode:
        h0_diag = h0_diag + general.omega2 * occ[:, 1]
    h0 = np.diag(h0_diag).astype(complex)
    upper = _coupling_block(general, basis, general.kappa_terms())
    lower = _coupling_block(general, basis, general.gamma_terms())
    spinor = spinor_assemble(h0, general.beta, upper, lower)
    scale = 1.0 + float(np.max(np.abs(spinor.full)))
    hermitian = spinor.hermiticity_defect() <= HERMITICITY_TOL * scale
    notes = list(notes or [])
    if not hermitian:
        notes.append("non-Hermitian parameter set: sigma_+/sigma_- couplings are not adjoint pairs")
    return HamiltonianBuild(spinor, constant_offset, hermitian, notes, basis, general)


def build_preset(kind: str, preset: PresetParams, basis: FockBasis) -> HamiltonianBuild:
    mapping = to_general(preset)
    build = build_hamiltonian(mapping.general, basis, mapping.constant_offset, mapping.notes)
    return build


@dataclass
class ConservedCharge:
    """Diagonal operator commuting with the model at any truncation."""

    diagonal: np.ndarray     # length 2*dim, ordered (component 1 block, component 2 block)
    description: str
    kind: str

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)


def conserved_charge(kind: str, basis: FockBasis) -> ConservedCharge:
    """The grading operator of one preset family.

    jc-rwa, dirac: N' - sigma_0/2. mjc: (a'a + b'b) - sigma_0/2.
    jt, dot: (a'a - b'b) - sigma_0/2. jc: parity (-1)^(n + component).
    """
    occ = np.array(basis.occupations, dtype=float)
    if kind in ("jc-rwa", "dirac"):
        base = occ[:, 0]
        description = "N' - sigma0/2"
    elif kind == "mjc":
        base = occ[:, 0] + occ[:, 1]
        description = "(a'a + b'b) - sigma0/2"
    elif kind in ("jt", "dot"):
        base = occ[:, 0] - occ[:, 1]
        description = "(a'a - b'b) - sigma0/2"
    elif kind == "jc":
        n = occ[:, 0]
        diag = np.concatenate([(-1.0) ** n, (-1.0) ** (n + 1)])
        return ConservedCharge(diag, "parity (-1)^(n + component)", kind)
    else:
        raise ValueError(f"no conserved charge registered for kind {kind!r}")
    # sigma_0 = diag(-1, 1) on components, so -sigma_0/2 adds +1/2 resp. -1/2
    diag = np.concatenate([base + 0.5, base - 0.5])
    return ConservedCharge(diag, description, kind)


def charge_commutator_defect(build: HamiltonianBuild, charge: ConservedCharge) -> float:
    """max |[H, G]| for diagonal G: entries H_ij * (g_j - g_i)."""
    h = build.spinor.full
    g = charge.diagonal
    return float(np.max(np.abs(h * (g[None, :] - g[:, None]))))


@dataclass
class ChargeSector:
    value: float
    indices: np.ndarray
    matrix: np.ndarray


def sector_decompose(
    build: HamiltonianBuild, charge: ConservedCharge, commutator_tol: float = 1e-10
) -> list[ChargeSector]:
    """Partition the product space by charge value and restrict the matrix.

    Sectors are ordered by ascending charge value and their dimensions sum to
    the full dimension. Raises if [H, G] exceeds commutator_tol.
    """
    defect = charge_commutator_defect(build, charge)
    if defect > commutator_tol:
        raise ValueError(f"charge does not commute with H: |[H,G]|_max = {defect:.3e}")
    values = np.round(charge.diagonal, 9)
    h = build.spinor.full
    sectors = []
    for v in np.unique(values):
        idx = np.nonzero(values == v)[0]
        sectors.append(ChargeSector(float(v), idx, h[np.ix_(idx, idx)]))
    return sectors


# Element-wise sector assembly: lets large-cutoff studies avoid the full dense matrix.

_LADDER_STEP = {"a": (0, -1), "ad": (0, +1), "b": (1, -1), "bd": (1, +1)}


def _ladder_amp(occ: tuple, name: str) -> tuple[tuple | None, float]:
    axis, step = _LADDER_STEP[name]
    n = occ[axis]
    if step < 0:
        if n == 0:
            return None, 0.0
        amp = math.sqrt(n)
    else:
        amp = math.sqrt(n + 1)
    target = list(occ)
    target[axis] = n + step
    return tuple(target), amp


def charge_sector_tables(kind: str, basis: FockBasis) -> dict[float, list[tuple[int, tuple]]]:
    """Sector membership as {charge value: [(component, occupation), ...]}."""
    charge = conserved_charge(kind, basis)
    values = np.round(charge.diagonal, 9)
    dim = basis.dim
    out: dict[float, list[tuple[int, tuple]]] = {}
    for i, v in enumerate(values):
        comp, fock = divmod(i, dim)
        out.setdefault(float(v), []).append((comp, basis.occupations[fock]))
    return out


def sector_matrix(general: GeneralParams, basis: FockBasis, states: list[tuple[int, tuple]]) -> np.ndarray:
    """Dense sector block assembled from closed-form matrix elements.

    Entries are identical to restricting the full truncated matrix: target
    occupations outside the cutoff are dropped, matching truncation.
    """
    index = {s: i for i, s in enumerate(states)}
    any_complex = any(
        complex(c).imag != 0 for c, _ in (*general.kappa_terms(), *general.gamma_terms())
    )
    mat = np.zeros((len(states), len(states)), dtype=complex if any_complex else float)
    for col, (comp, occ) in enumerate(states):
        diag = general.omega1 * occ[0] + (general.omega2 * occ[1] if len(occ) == 2 else 0.0)
        diag += general.beta if comp == 1 else -general.beta
        mat[col, col] += diag
        terms = general.kappa_terms() if comp == 1 else general.gamma_terms()
        target_comp = 0 if comp == 1 else 1
        for coeff, name in terms:
            if coeff == 0 or (len(occ) == 1 and name in ("b", "bd")):
                continue
            target, amp = _ladder_amp(occ, name)
            if target is None or not basis.contains(target):
                continue
            row = index.get((target_comp, target))
            if row is None:
                raise ValueError("coupling leaves the sector; charge is not conserved here")
            mat[row, col] += (coeff if mat.dtype == complex else complex(coeff).real) * amp
    return mat


def lowest_levels(kind: str, preset: PresetParams, cutoff: Cutoff, count: int) -> np.ndarray:
    """Lowest eigenvalues assembled sector-by-sector (offset not included).

    Sectors are visited by ascending minimum diagonal and skipped once a
    Gershgorin-style bound proves they cannot contribute; this reaches
    per-mode cutoffs far beyond what a full dense solve allows.
    """
    basis = FockBasis(cutoff)
    mapping = to_general(preset)
    g = mapping.general
    tables = charge_sector_tables(kind, basis)
    coupling_sum = sum(abs(c) for c, _ in (*g.kappa_terms(), *g.gamma_terms()))
    max_occ = max(cutoff.n_max_a, cutoff.n_max_b or 0)
    radius = coupling_sum * math.sqrt(max_occ + 1)

    def min_diag(states):
        return min(
            g.omega1 * occ[0]
            + (g.omega2 * occ[1] if len(occ) == 2 else 0.0)
            + (g.beta if comp == 1 else -g.beta)
            for comp, occ in states
        )

    ordered = sorted(tables.values(), key=min_diag)
    found: list[float] = []
    for states in ordered:
        if len(found) >= count and min_diag(states) - radius > found[count - 1]:
            break
        block = sector_matrix(g, basis, states)
        vals = hermitian_eigenvalues(block)
        found = sorted(found + vals.tolist())[:count]
    if len(found) < count:
        raise ValueError("not enough levels in the truncated space")
    return np.array(found[:count])
