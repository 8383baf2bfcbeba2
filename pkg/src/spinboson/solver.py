"""Dense eigensolvers, the diagonal resolvent, and the ladder shift-identity arbiter.

The Hermitian eigensolver is the oracle every closed form and recurrence in
this package is checked against, so it always reports an eigenpair residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import Cutoff, FockBasis, interior_projector

__all__ = [
    "PoleError",
    "Spectrum",
    "MatchReport",
    "ShiftIdentityReport",
    "ConvergenceStudy",
    "eig_hermitian",
    "hermitian_eigenvalues",
    "eig_small_general",
    "resolvent_apply",
    "shift_identity_check",
    "convergence_study",
    "match_spectra",
]

POLE_EPS = 1e-9


class PoleError(ValueError):
    """Raised when a resolvent denominator is within POLE_EPS of zero."""

    def __init__(self, occupation, denominator: float):
        self.occupation = occupation
        self.denominator = denominator
        super().__init__(
            f"resolvent pole at occupation {occupation}: |denominator| = {abs(denominator):.3e}"
        )


@dataclass
class Spectrum:
    """Ascending eigenvalues with an eigenpair residual max_i ||H v_i - w_i v_i||."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residual: float
    cutoff: Cutoff | None = None


def _hermiticity_defect(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix - matrix.conj().T)))


def eig_hermitian(matrix: np.ndarray, cutoff: Cutoff | None = None, herm_tol: float = 1e-10) -> Spectrum:
    """Full spectrum of a Hermitian matrix, ascending, with eigenvectors.

    Real-symmetric input (exactly zero imaginary part) is routed through the
    real solver. Raises ValueError if the matrix is not Hermitian to
    herm_tol * (1 + max |entry|).
    """
    m = np.asarray(matrix)
    scale = 1.0 + float(np.max(np.abs(m))) if m.size else 1.0
    if _hermiticity_defect(m) > herm_tol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    if np.iscomplexobj(m) and not np.any(m.imag):
        m = m.real
    w, v = np.linalg.eigh(m)
    residual = float(np.max(np.linalg.norm(m @ v - v * w, axis=0))) if m.size else 0.0
    return Spectrum(eigenvalues=w, eigenvectors=v, residual=residual, cutoff=cutoff)


def hermitian_eigenvalues(matrix: np.ndarray, herm_tol: float = 1e-10) -> np.ndarray:
    """Eigenvalues only (no vectors, no residual); for large oracle solves."""
    m = np.asarray(matrix)
    scale = 1.0 + float(np.max(np.abs(m))) if m.size else 1.0
    if _hermiticity_defect(m) > herm_tol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    if np.iscomplexobj(m) and not np.any(m.imag):
        m = m.real
    return np.linalg.eigvalsh(m)


def eig_small_general(matrix: np.ndarray) -> np.ndarray:
    """All complex eigenvalues of a small (<= 8x8) general matrix, sorted by (re, im)."""
    m = np.asarray(matrix, dtype=complex)
    if m.shape[0] > 8 or m.shape[0] != m.shape[1]:
        raise ValueError("eig_small_general handles square matrices up to 8x8")
    w = np.linalg.eigvals(m)
    order = np.lexsort((w.imag, w.real))
    return w[order]


def resolvent_denominators(omega1: float, omega2: float, beta: float, energy: float, basis: FockBasis) -> np.ndarray:
    occ = np.array(basis.occupations, dtype=float)
    h0 = omega1 * occ[:, 0]
    if basis.two_mode:
        h0 = h0 + omega2 * occ[:, 1]
    return h0 + beta - energy


def resolvent_apply(
    omega1: float,
    omega2: float,
    beta: float,
    energy: float,
    vector: np.ndarray,
    basis: FockBasis,
    pole_eps: float = POLE_EPS,
) -> np.ndarray:
    """Apply (H0 - E + beta)^(-1), diagonal in the occupation basis.

    Every populated amplitude must sit at least pole_eps away from a zero
    denominator; otherwise PoleError names the offending occupation.
    """
    v = np.asarray(vector, dtype=complex)
    if v.shape != (basis.dim,):
        raise ValueError("vector length does not match basis dimension")
    den = resolvent_denominators(omega1, omega2, beta, energy, basis)
    out = np.zeros_like(v)
    populated = v != 0
    bad = populated & (np.abs(den) <= pole_eps)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise PoleError(basis.occupation_of(i), float(den[i]))
    out[populated] = v[populated] / den[populated]
    return out


@dataclass
class ShiftIdentityReport:
    """Interior residuals of both orientations of a * f(H0) = f(H0 +/- w) * a."""

    omega1: float
    beta: float
    energy: float
    residual_plus: float
    residual_minus: float

    @property
    def vanishing(self) -> str:
        if self.omega1 == 0.0:
            return "both"
        return "+omega" if self.residual_plus <= self.residual_minus else "-omega"

    def summary(self) -> str:
        return (
            "ladder shift identity: a*f(H0) = f(H0+omega)*a orientation has interior "
            f"residual {self.residual_plus:.3e}; the f(H0-omega)*a orientation has "
            f"residual {self.residual_minus:.3e}; recurrence coefficients use the "
            "+omega orientation"
        )


def shift_identity_check(
    basis: FockBasis,
    omega1: float,
    beta: float = 0.3,
    energy: float | None = None,
    margin: int = 1,
) -> ShiftIdentityReport:
    """Decide the shift direction when commuting a through f(H0) = (H0-E+beta)^(-1).

    Both candidate orientations are evaluated as dense matrices and compared on
    the interior; exactly one vanishes for omega1 != 0. This pins the sign used
    when recurrence coefficients are derived. With energy=None a pole-free
    probe energy is chosen so that all three resolvent diagonals stay finite.
    """
    if basis.two_mode:
        raise ValueError("shift_identity_check expects a one-mode basis")
    n = np.arange(basis.dim, dtype=float)
    h0 = omega1 * n
    if energy is None:
        w = max(abs(omega1), 1.0)
        for cand in (beta - 1.03 * w, beta - 0.731 * w, beta - 1.317 * w - 0.171, beta - 0.577 * w - 0.059):
            dens = [h0 + s - cand + beta for s in (0.0, omega1, -omega1)]
            if all(np.min(np.abs(d)) > 1e-6 for d in dens):
                energy = cand
                break
        else:
            raise ValueError("could not find a pole-free probe energy")

    def f(shift: float) -> np.ndarray:
        den = h0 + shift - energy + beta
        if np.any(np.abs(den) <= POLE_EPS):
            raise PoleError(int(np.argmax(np.abs(den) <= POLE_EPS)), 0.0)
        return np.diag(1.0 / den)

    a = np.diag(np.sqrt(n[1:]), 1)
    proj = interior_projector(basis, margin).matrix.real
    lhs = a @ f(0.0)
    res_plus = float(np.max(np.abs(proj @ (lhs - f(+omega1) @ a) @ proj)))
    res_minus = float(np.max(np.abs(proj @ (lhs - f(-omega1) @ a) @ proj)))
    return ShiftIdentityReport(omega1, beta, energy, res_plus, res_minus)


@dataclass
class ConvergenceStudy:
    cutoffs: list[int]
    levels: np.ndarray          # shape (len(cutoffs), level_count)
    deltas: np.ndarray          # shape (len(cutoffs)-1, level_count)
    tolerance: float
    converged: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.deltas.size:
            self.converged = np.max(np.abs(self.deltas), axis=1) < self.tolerance
        else:
            self.converged = np.zeros(0, dtype=bool)


def convergence_study(builder, cutoffs, level_count: int, tolerance: float = 1e-10) -> ConvergenceStudy:
    """Track the lowest levels across ascending cutoffs.

    `builder(cutoff)` may return either a Hermitian matrix (diagonalized here)
    or a 1-D array of ascending eigenvalues (e.g. assembled sector-wise).
    """
    cutoffs = list(cutoffs)
    if sorted(cutoffs) != cutoffs:
        raise ValueError("cutoffs must be ascending")
    rows = []
    for c in cutoffs:
        out = np.asarray(builder(c))
        vals = hermitian_eigenvalues(out) if out.ndim == 2 else np.sort(out)
        if len(vals) < level_count:
            raise ValueError(f"cutoff {c} yields only {len(vals)} levels")
        rows.append(vals[:level_count])
    levels = np.array(rows)
    deltas = np.abs(np.diff(levels, axis=0))
    return ConvergenceStudy(cutoffs, levels, deltas, tolerance)


@dataclass
class MatchReport:
    """Greedy injective nearest-neighbor pairing of two eigenvalue lists."""

    pairs: list[tuple[float, float, float]]   # (left value, right value, abs error)
    unmatched_left: list[float]
    unmatched_right: list[float]

    @property
    def max_error(self) -> float:
        return max((e for _, _, e in self.pairs), default=0.0)


def match_spectra(left, right, tol: float) -> MatchReport:
    """Pair each left value with its nearest unmatched right value within tol.

    Candidate pairs are processed globally by ascending distance, ties broken
    toward smaller indices, so the pairing is injective and deterministic.
    """
    lv = [float(x) for x in left]
    rv = [float(x) for x in right]
    cand = [
        (abs(a - b), i, j)
        for i, a in enumerate(lv)
        for j, b in enumerate(rv)
        if abs(a - b) <= tol
    ]
    cand.sort()
    used_l: set[int] = set()
    used_r: set[int] = set()
    pairs = []
    for dist, i, j in cand:
        if i in used_l or j in used_r:
            continue
        used_l.add(i)
        used_r.add(j)
        pairs.append((lv[i], rv[j], dist))
    pairs.sort(key=lambda p: (p[0], p[1]))
    unmatched_left = [a for i, a in enumerate(lv) if i not in used_l]
    unmatched_right = [b for j, b in enumerate(rv) if j not in used_r]
    return MatchReport(pairs, unmatched_left, unmatched_right)
