"""Boson realizations of the su(2) and su(1,1) ladder algebras.

Each realization is built as dense matrices on a truncated Fock space together
with the number/difference operator that commutes with it. Bracket relations,
Casimir values, and closed-form state actions are verified on the interior of
the truncated space; results are matrices plus residual reports, never
abstract representation theory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import FockBasis, build_annihilation, build_creation, interior_projector

__all__ = [
    "Su2TwoMode",
    "Su2Single",
    "Su11TwoMode",
    "Su11SingleL",
    "Su11SingleS",
    "Sp4T",
    "GeneratorTriple",
    "SpinLabel",
    "BargmannLabel",
    "StateActionReport",
    "ProductIdentity",
    "ProductDecompositionReport",
    "build_realization",
    "casimir",
    "algebra_interior",
    "verify_commutation",
    "verify_state_action",
    "product_decomposition_check",
    "sector_states",
]


@dataclass(frozen=True)
class Su2TwoMode:
    """J+ = a'b, J- = b'a, J0 = (a'a - b'b)/2 on a two-mode space."""


@dataclass(frozen=True)
class Su2Single:
    """J+ = sqrt(2j - N')a, J- = a'sqrt(2j - N'), J0 = j - N' on one mode.

    The square root is defined by functional calculus on the diagonal number
    operator, clamped to 0 wherever 2j - n < 0, which keeps the spin-j block
    exactly decoupled from the rest of the truncated space.
    """

    j: float

    def __post_init__(self):
        if self.j < 0 or round(2 * self.j) != 2 * self.j:
            raise ValueError("j must be a non-negative half-integer")


@dataclass(frozen=True)
class Su11TwoMode:
    """K+ = a'b', K- = ab, K0 = (a'a + b'b + 1)/2 on a two-mode space."""


@dataclass(frozen=True)
class Su11SingleL:
    """L+ = a'^2/2, L- = a^2/2, L0 = (a'a + 1/2)/2 on one mode.

    Splits the one-mode space into the even ladder (Bargmann index 1/4) and
    the odd ladder (3/4).
    """


@dataclass(frozen=True)
class Su11SingleS:
    """S+ = a'sqrt(N' + 2k), S- = sqrt(N' + 2k)a, S0 = N' + k on one mode."""

    k: float

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("k must be positive")


@dataclass(frozen=True)
class Sp4T:
    """T+ = b'^2/2, T- = b^2/2, T0 = b'b/2 + 1/4 on the second mode.

    The lowering partner of b'^2/2 must be b^2/2 for the su(1,1) brackets to
    close; verify_commutation proves it on the interior.
    """


RealizationId = Su2TwoMode | Su2Single | Su11TwoMode | Su11SingleL | Su11SingleS | Sp4T


@dataclass
class GeneratorTriple:
    """Raising/lowering/weight matrices, plus the operator that commutes with them."""

    plus: np.ndarray
    minus: np.ndarray
    zero: np.ndarray
    counter: np.ndarray
    kind: str                      # "su2" | "su11"
    realization: RealizationId


@dataclass(frozen=True)
class SpinLabel:
    """su(2) sector state |j, m>, mapped to occupations (j+m, j-m)."""

    j: float
    m: float

    def __post_init__(self):
        if abs(self.m) > self.j or round(2 * self.j) != 2 * self.j or round(2 * self.m) != 2 * self.m:
            raise ValueError("need half-integers with |m| <= j")


@dataclass(frozen=True)
class BargmannLabel:
    """su(1,1) sector state |k, n>, mapped to occupations (n, n + 2k - 1)."""

    k: float
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if self.k <= 0:
            raise ValueError("k must be positive")


def _check_mode_count(rid: RealizationId, basis: FockBasis) -> None:
    needs_two = isinstance(rid, (Su2TwoMode, Su11TwoMode, Sp4T))
    if needs_two and not basis.two_mode:
        raise ValueError(f"{type(rid).__name__} needs a two-mode basis")
    if not needs_two and basis.two_mode:
        raise ValueError(f"{type(rid).__name__} needs a one-mode basis")


def build_realization(rid: RealizationId, basis: FockBasis) -> GeneratorTriple:
    """Dense generator matrices for one realization on the given basis."""
    _check_mode_count(rid, basis)
    if basis.two_mode:
        a = build_annihilation(basis, "a").matrix
        ad = build_creation(basis, "a").matrix
        b = build_annihilation(basis, "b").matrix
        bd = build_creation(basis, "b").matrix
        na = ad @ a
        nb = bd @ b
    else:
        a = build_annihilation(basis, "a").matrix
        ad = build_creation(basis, "a").matrix
        na = ad @ a
    eye = np.eye(basis.dim, dtype=complex)

    if isinstance(rid, Su2TwoMode):
        return GeneratorTriple(ad @ b, bd @ a, 0.5 * (na - nb), na + nb, "su2", rid)
    if isinstance(rid, Su11TwoMode):
        return GeneratorTriple(ad @ bd, a @ b, 0.5 * (na + nb + eye), na - nb, "su11", rid)
    if isinstance(rid, Sp4T):
        return GeneratorTriple(0.5 * bd @ bd, 0.5 * b @ b, 0.5 * nb + 0.25 * eye, nb, "su11", rid)
    if isinstance(rid, Su2Single):
        two_j = int(round(2 * rid.j))
        if basis.cutoff.n_max_a < two_j:
            raise ValueError(f"cutoff {basis.cutoff.n_max_a} too small for j = {rid.j}")
        n = np.arange(basis.dim, dtype=float)
        root = np.diag(np.sqrt(np.maximum(two_j - n, 0.0))).astype(complex)
        return GeneratorTriple(root @ a, ad @ root, rid.j * eye - na, na.copy(), "su2", rid)
    if isinstance(rid, Su11SingleL):
        return GeneratorTriple(0.5 * ad @ ad, 0.5 * a @ a, 0.5 * (na + 0.5 * eye), na.copy(), "su11", rid)
    if isinstance(rid, Su11SingleS):
        n = np.arange(basis.dim, dtype=float)
        root = np.diag(np.sqrt(n + 2 * rid.k)).astype(complex)
        return GeneratorTriple(ad @ root, root @ a, na + rid.k * eye, na.copy(), "su11", rid)
    raise ValueError(f"unknown realization {rid!r}")


def casimir(triple: GeneratorTriple) -> np.ndarray:
    """Quadratic invariant, with the sign convention giving j(j+1) resp. k(1-k).

    su(2): Z^2 + (PM + MP)/2. su(1,1): (PM + MP)/2 - Z^2. Diagonal for every
    realization built here.
    """
    sym = 0.5 * (triple.plus @ triple.minus + triple.minus @ triple.plus)
    if triple.kind == "su2":
        return triple.zero @ triple.zero + sym
    return sym - triple.zero @ triple.zero


def algebra_interior(triple: GeneratorTriple, basis: FockBasis, margin: int = 1) -> np.ndarray:
    """Projector onto the subspace where this realization represents its algebra.

    Quadratic ladders (a^2/b^2 generators) move occupations by two, so their
    interior needs twice the margin. The clamped single-mode spin realization
    carries spin j only on n <= 2j; outside that block the generators vanish
    while the weight operator does not, so the carrier block is the interior.
    """
    rid = triple.realization
    if isinstance(rid, Su2Single):
        limit = min(int(round(2 * rid.j)), basis.cutoff.n_max_a - margin)
        keep = np.array([occ[0] <= limit for occ in basis.occupations], dtype=float)
        return np.diag(keep).astype(complex)
    if isinstance(rid, (Su11SingleL, Sp4T)):
        return interior_projector(basis, 2 * margin).matrix
    return interior_projector(basis, margin).matrix


def verify_commutation(triple: GeneratorTriple, basis: FockBasis, margin: int = 1) -> float:
    """Max interior residual of [Z, P] = P, [Z, M] = -M, [P, M] = +/-2Z."""
    if margin < 1:
        raise ValueError("margin must be >= 1")
    proj = algebra_interior(triple, basis, margin)
    sign = 2.0 if triple.kind == "su2" else -2.0
    z, p, m = triple.zero, triple.plus, triple.minus
    residuals = [
        z @ p - p @ z - p,
        z @ m - m @ z + m,
        p @ m - m @ p - sign * z,
    ]
    return max(float(np.max(np.abs(proj @ r @ proj))) for r in residuals)


def _label_occupation(rid: RealizationId, label) -> tuple:
    """Map a sector label to the occupation tuple carrying it in this realization."""
    if isinstance(rid, (Su2TwoMode,)):
        j, m = label.j, label.m
        return (int(round(j + m)), int(round(j - m)))
    if isinstance(rid, Su2Single):
        if label.j != rid.j:
            raise ValueError(f"label j = {label.j} does not match realization j = {rid.j}")
        return (int(round(rid.j - label.m)),)
    if isinstance(rid, Su11TwoMode):
        nb = label.n + 2 * label.k - 1
        if round(nb) != nb:
            raise ValueError("2k - 1 must be a non-negative integer for the two-mode ladder")
        return (label.n, int(round(nb)))
    if isinstance(rid, Su11SingleL):
        if label.k not in (0.25, 0.75):
            raise ValueError("one-mode quadratic ladder carries k = 1/4 (even) or 3/4 (odd)")
        return (2 * label.n + (0 if label.k == 0.25 else 1),)
    if isinstance(rid, Su11SingleS):
        if label.k != rid.k:
            raise ValueError(f"label k = {label.k} does not match realization k = {rid.k}")
        return (label.n,)
    if isinstance(rid, Sp4T):
        # mode-b quadratic ladder: k = 1/4 on even n_b, 3/4 on odd n_b
        raise ValueError("state-action checks for the mode-b quadratic ladder are not defined")
    raise ValueError(f"unknown realization {rid!r}")


@dataclass
class StateActionReport:
    """Elementwise errors of the matrix action against the closed-form coefficients."""

    label: object
    errors: dict[str, float]

    @property
    def max_error(self) -> float:
        return max(self.errors.values())


def verify_state_action(triple: GeneratorTriple, label, basis: FockBasis) -> StateActionReport:
    """Compare the matrix action on a mapped sector state with the closed forms.

    su(2): J0 -> m, J+/- -> sqrt((j -/+ m)(j +/- m + 1)).
    su(1,1): K0 -> k + n, K+ -> sqrt((2k+n)(n+1)), K- -> sqrt((2k+n-1)n).
    Raising/lowering checks whose target occupation leaves the cutoff are
    skipped; the label state itself must be inside.
    """
    rid = triple.realization
    occ = _label_occupation(rid, label)
    if not basis.contains(occ):
        raise ValueError(f"occupation {occ} for label {label} is outside the cutoff")
    column = basis.state_vector(occ)

    if triple.kind == "su2":
        j, m = label.j, label.m
        zero_val = m
        plus_coeff, plus_label = math.sqrt(max((j - m) * (j + m + 1), 0.0)), SpinLabel(j, m + 1) if m + 1 <= j else None
        minus_coeff, minus_label = math.sqrt(max((j + m) * (j - m + 1), 0.0)), SpinLabel(j, m - 1) if m - 1 >= -j else None
        casimir_val = j * (j + 1)
    else:
        k, n = label.k, label.n
        zero_val = k + n
        plus_coeff, plus_label = math.sqrt((2 * k + n) * (n + 1)), BargmannLabel(k, n + 1)
        minus_coeff, minus_label = math.sqrt(max((2 * k + n - 1) * n, 0.0)), (
            BargmannLabel(k, n - 1) if n >= 1 else None
        )
        casimir_val = k * (1 - k)

    errors: dict[str, float] = {}
    errors["zero"] = float(np.max(np.abs(triple.zero @ column - zero_val * column)))
    errors["casimir"] = float(np.max(np.abs(casimir(triple) @ column - casimir_val * column)))
    for name, coeff, target in (("plus", plus_coeff, plus_label), ("minus", minus_coeff, minus_label)):
        op = triple.plus if name == "plus" else triple.minus
        if target is None:
            expected = np.zeros_like(column)
        else:
            target_occ = _label_occupation(rid, target)
            if not basis.contains(target_occ):
                continue  # shifted state leaves the truncated space; nothing to compare
            expected = coeff * basis.state_vector(target_occ)
        errors[name] = float(np.max(np.abs(op @ column - expected)))
    return StateActionReport(label, errors)


@dataclass
class ProductIdentity:
    name: str
    corrected_residual: float      # against the identity with exact coefficients
    printed_residual: float | None # against the commonly displayed coefficient, if it differs
    factor_note: str | None


@dataclass
class ProductDecompositionReport:
    identities: list[ProductIdentity]

    @property
    def max_corrected_residual(self) -> float:
        return max(i.corrected_residual for i in self.identities)

    @property
    def factor_discrepancies(self) -> list[str]:
        return [i.name for i in self.identities if i.factor_note is not None]


def product_decomposition_check(basis: FockBasis, margin: int = 1) -> ProductDecompositionReport:
    """Verify the boson-pair products against the algebra generators on the interior.

    Checks a^2 = 2L-, aa' = M'+1, a'^2 = 2L+, a'a = M', ab = K-, ab' = J-,
    a'b = J+, a'b' = K+, b^2 = 2T-, b'^2 = 2T+, b'b = M''', bb' = M'''+1,
    and reports which identities fail when the generator enters with
    coefficient 1 instead of 2 (the usual display drops the factor).
    """
    if not basis.two_mode:
        raise ValueError("product decomposition needs a two-mode basis")
    a = build_annihilation(basis, "a").matrix
    ad = build_creation(basis, "a").matrix
    b = build_annihilation(basis, "b").matrix
    bd = build_creation(basis, "b").matrix
    eye = np.eye(basis.dim, dtype=complex)
    proj = interior_projector(basis, margin).matrix

    j = build_realization(Su2TwoMode(), basis)
    kk = build_realization(Su11TwoMode(), basis)
    t = build_realization(Sp4T(), basis)
    # one-mode quadratic ladder lifted to mode a of the two-mode space
    l_plus, l_minus = 0.5 * ad @ ad, 0.5 * a @ a
    m_prime = ad @ a
    m_triple = bd @ b

    def res(lhs: np.ndarray, rhs: np.ndarray) -> float:
        return float(np.max(np.abs(proj @ (lhs - rhs) @ proj)))

    cases = [
        ("a^2 = 2*L-", a @ a, 2.0 * l_minus, l_minus, "displayed as L-, exact needs 2*L-"),
        ("a'a' = 2*L+", ad @ ad, 2.0 * l_plus, l_plus, "displayed as L+, exact needs 2*L+"),
        ("aa' = M'+1", a @ ad, m_prime + eye, None, None),
        ("a'a = M'", ad @ a, m_prime, None, None),
        ("ab = K-", a @ b, kk.minus, None, None),
        ("ab' = J-", a @ bd, j.minus, None, None),
        ("a'b = J+", ad @ b, j.plus, None, None),
        ("a'b' = K+", ad @ bd, kk.plus, None, None),
        ("b^2 = 2*T-", b @ b, 2.0 * t.minus, t.minus, "displayed as T-, exact needs 2*T-"),
        ("b'b' = 2*T+", bd @ bd, 2.0 * t.plus, t.plus, "displayed as T+, exact needs 2*T+"),
        ("b'b = M'''", bd @ b, m_triple, None, None),
        ("bb' = M'''+1", b @ bd, m_triple + eye, None, None),
    ]
    identities = []
    for name, lhs, rhs, printed_rhs, note in cases:
        identities.append(
            ProductIdentity(
                name=name,
                corrected_residual=res(lhs, rhs),
                printed_residual=res(lhs, printed_rhs) if printed_rhs is not None else None,
                factor_note=note,
            )
        )
    return ProductDecompositionReport(identities)


def sector_states(
    basis: FockBasis,
    j: float | None = None,
    k: float | None = None,
    mirrored: bool = False,
) -> list[int]:
    """Indices of the basis states carrying one su(2) or su(1,1) sector.

    j-sectors collect n_a + n_b = 2j, ordered by descending n_a (m = j..-j);
    k-sectors collect n_b - n_a = 2k - 1 ordered by ascending n, or the
    mirrored relation n_a - n_b = 2k - 1 when requested.
    """
    if not basis.two_mode:
        raise ValueError("sector enumeration needs a two-mode basis")
    if (j is None) == (k is None):
        raise ValueError("give exactly one of j, k")
    out = []
    if j is not None:
        total = round(2 * j)
        if total != 2 * j or j < 0:
            raise ValueError("2j must be a non-negative integer")
        for na in range(int(total), -1, -1):
            nb = int(total) - na
            if basis.contains((na, nb)):
                out.append(basis.index_of((na, nb)))
    else:
        diff = round(2 * k - 1)
        if diff != 2 * k - 1 or diff < 0:
            raise ValueError("2k - 1 must be a non-negative integer")
        n = 0
        while True:
            occ = (n + int(diff), n) if mirrored else (n, n + int(diff))
            if not basis.contains(occ):
                break
            out.append(basis.index_of(occ))
            n += 1
    return out
