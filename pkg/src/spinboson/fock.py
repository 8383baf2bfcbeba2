"""Truncated Fock spaces and dense matrix realizations of boson and spin operators.

All operators act on occupation-number bases truncated at a per-mode maximum
occupation. Matrix elements are the exact ladder amplitudes (sqrt(n) per
element); the only deviations from the untruncated algebra live at the
truncation edge and are handled by interior projection, never by silently
enlarging cutoffs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Cutoff",
    "FockBasis",
    "BosonOp",
    "SpinorOperator",
    "InteriorProjector",
    "build_annihilation",
    "build_creation",
    "number_operator",
    "adjoint",
    "mul",
    "add_scaled",
    "commutator",
    "embed_two_mode",
    "spinor_assemble",
    "interior_projector",
    "total_occupation_projector",
    "matrix_dump",
    "matrix_load",
]


@dataclass(frozen=True)
class Cutoff:
    """Maximum occupation per mode. ``n_max_b`` is None for one-mode spaces."""

    n_max_a: int
    n_max_b: int | None = None

    def __post_init__(self):
        if self.n_max_a < 1:
            raise ValueError("n_max_a must be >= 1")
        if self.n_max_b is not None and self.n_max_b < 1:
            raise ValueError("n_max_b must be >= 1")

    @property
    def two_mode(self) -> bool:
        return self.n_max_b is not None

    @property
    def dim(self) -> int:
        if self.n_max_b is None:
            return self.n_max_a + 1
        return (self.n_max_a + 1) * (self.n_max_b + 1)


class FockBasis:
    """Occupation-number basis with a fixed lexicographic (mode-a major) ordering.

    One mode: |n> has index n. Two modes: |n_a, n_b> has index
    n_a*(n_max_b+1) + n_b, so index_of((0, 0)) == 0 and indices are contiguous.
    """

    def __init__(self, cutoff: Cutoff):
        self.cutoff = cutoff
        self.dim = cutoff.dim
        if cutoff.two_mode:
            self.occupations = [
                (na, nb)
                for na in range(cutoff.n_max_a + 1)
                for nb in range(cutoff.n_max_b + 1)
            ]
        else:
            self.occupations = [(n,) for n in range(cutoff.n_max_a + 1)]
        self._index = {occ: i for i, occ in enumerate(self.occupations)}

    @property
    def two_mode(self) -> bool:
        return self.cutoff.two_mode

    def index_of(self, occ) -> int:
        occ = tuple(int(n) for n in occ)
        try:
            return self._index[occ]
        except KeyError:
            raise ValueError(f"occupation {occ} outside cutoff {self.cutoff}") from None

    def occupation_of(self, index: int):
        return self.occupations[index]

    def contains(self, occ) -> bool:
        return tuple(int(n) for n in occ) in self._index

    def state_vector(self, occ) -> np.ndarray:
        """Unit column for |occ>."""
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.index_of(occ)] = 1.0
        return vec


@dataclass(frozen=True)
class BosonOp:
    """A dense operator on a truncated Fock space, tagged with what it is."""

    matrix: np.ndarray
    label: str

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _mode_axis(basis: FockBasis, mode: str) -> int:
    if mode == "a":
        return 0
    if mode == "b":
        if not basis.two_mode:
            raise ValueError("mode 'b' requested on a one-mode basis")
        return 1
    raise ValueError(f"unknown mode {mode!r}")


def build_annihilation(basis: FockBasis, mode: str = "a") -> BosonOp:
    """Annihilation operator with <.., n-1, ..| op |.., n, ..> = sqrt(n) on `mode`."""
    axis = _mode_axis(basis, mode)
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for i, occ in enumerate(basis.occupations):
        n = occ[axis]
        if n == 0:
            continue
        target = list(occ)
        target[axis] = n - 1
        mat[basis.index_of(target), i] = math.sqrt(n)
    return BosonOp(mat, mode)


def build_creation(basis: FockBasis, mode: str = "a") -> BosonOp:
    return adjoint(build_annihilation(basis, mode))


def number_operator(basis: FockBasis, mode: str = "a") -> BosonOp:
    axis = _mode_axis(basis, mode)
    diag = np.array([occ[axis] for occ in basis.occupations], dtype=float)
    return BosonOp(np.diag(diag).astype(complex), f"{mode}†{mode}")


def adjoint(op: BosonOp) -> BosonOp:
    label = op.label[:-1] if op.label.endswith("†") else op.label + "†"
    return BosonOp(op.matrix.conj().T.copy(), label)


def mul(left: BosonOp, right: BosonOp) -> BosonOp:
    if left.matrix.shape != right.matrix.shape:
        raise ValueError("dimension mismatch in operator product")
    return BosonOp(left.matrix @ right.matrix, f"{left.label}·{right.label}")


def add_scaled(left: BosonOp, scalar: complex, right: BosonOp) -> BosonOp:
    if left.matrix.shape != right.matrix.shape:
        raise ValueError("dimension mismatch in operator sum")
    return BosonOp(left.matrix + scalar * right.matrix, f"{left.label}+({scalar})·{right.label}")


def commutator(left: BosonOp, right: BosonOp) -> BosonOp:
    if left.matrix.shape != right.matrix.shape:
        raise ValueError("dimension mismatch in commutator")
    mat = left.matrix @ right.matrix - right.matrix @ left.matrix
    return BosonOp(mat, f"[{left.label},{right.label}]")


def embed_two_mode(op: BosonOp, basis: FockBasis, mode: str = "a") -> BosonOp:
    """Lift a single-mode operator to a two-mode basis, identity on the other mode."""
    if not basis.two_mode:
        raise ValueError("embed_two_mode needs a two-mode basis")
    axis = _mode_axis(basis, mode)
    n_single = basis.cutoff.n_max_a if axis == 0 else basis.cutoff.n_max_b
    if op.dim != n_single + 1:
        raise ValueError(
            f"operator dimension {op.dim} does not match mode {mode} cutoff {n_single}"
        )
    eye_a = np.eye(basis.cutoff.n_max_a + 1, dtype=complex)
    eye_b = np.eye(basis.cutoff.n_max_b + 1, dtype=complex)
    if axis == 0:
        mat = np.kron(op.matrix, eye_b)
    else:
        mat = np.kron(eye_a, op.matrix)
    return BosonOp(mat, op.label)


class SpinorOperator:
    """Operator on C^2 (x) Fock with component ordering (psi_1, psi_2).

    The full matrix uses global index = component*dim + fock_index, so the
    2x2 block structure is [[B11, B12], [B21, B22]] with sigma_0 = diag(-1, 1),
    sigma_+ mapping component 2 -> 1 and sigma_- mapping 1 -> 2.
    """

    def __init__(self, full: np.ndarray):
        n = full.shape[0]
        if full.ndim != 2 or full.shape[1] != n or n % 2:
            raise ValueError("spinor operator must be square with even dimension")
        self.full = full
        self.block_dim = n // 2

    def block(self, row: int, col: int) -> np.ndarray:
        d = self.block_dim
        return self.full[row * d : (row + 1) * d, col * d : (col + 1) * d]

    @property
    def blocks(self):
        return ((self.block(0, 0), self.block(0, 1)), (self.block(1, 0), self.block(1, 1)))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.full - self.full.conj().T)))


def spinor_assemble(h0: np.ndarray, beta: complex, upper: np.ndarray, lower: np.ndarray) -> SpinorOperator:
    """Assemble [[h0 - beta*I, upper], [lower, h0 + beta*I]].

    This is h0 + beta*sigma_0 + upper*sigma_+ + lower*sigma_- in the
    (psi_1, psi_2) component convention.
    """
    d = h0.shape[0]
    for name, m in (("h0", h0), ("upper", upper), ("lower", lower)):
        if m.shape != (d, d):
            raise ValueError(f"block {name} has shape {m.shape}, expected {(d, d)}")
    real_ok = (
        np.isrealobj(h0) or not np.any(h0.imag)
    ) and (
        np.isrealobj(upper) or not np.any(upper.imag)
    ) and (
        np.isrealobj(lower) or not np.any(lower.imag)
    ) and complex(beta).imag == 0.0
    dtype = np.float64 if real_ok else np.complex128
    full = np.zeros((2 * d, 2 * d), dtype=dtype)
    eye = np.eye(d)
    full[:d, :d] = (h0 - beta * eye).real if dtype == np.float64 else h0 - beta * eye
    full[d:, d:] = (h0 + beta * eye).real if dtype == np.float64 else h0 + beta * eye
    full[:d, d:] = upper.real if dtype == np.float64 else upper
    full[d:, :d] = lower.real if dtype == np.float64 else lower
    return SpinorOperator(full)


@dataclass(frozen=True)
class InteriorProjector:
    """Diagonal 0/1 projector discarding states near the truncation edge."""

    margin: int
    matrix: np.ndarray


def interior_projector(basis: FockBasis, margin: int) -> InteriorProjector:
    """Projector keeping states with every occupation <= n_max - margin."""
    if margin < 0:
        raise ValueError("margin must be >= 0")
    cut = basis.cutoff
    limits = (cut.n_max_a - margin,) if not cut.two_mode else (
        cut.n_max_a - margin,
        cut.n_max_b - margin,
    )
    keep = np.array(
        [all(n <= lim for n, lim in zip(occ, limits)) for occ in basis.occupations],
        dtype=float,
    )
    return InteriorProjector(margin, np.diag(keep).astype(complex))


def total_occupation_projector(basis: FockBasis, max_total: int) -> np.ndarray:
    """Projector onto states with n_a + n_b <= max_total.

    Number-conserving operators (and their exponentials) act within blocks of
    fixed total occupation; blocks with total <= min cutoff are free of
    truncation artifacts, so this is the right interior for rotation checks.
    """
    keep = np.array([sum(occ) <= max_total for occ in basis.occupations], dtype=float)
    return np.diag(keep).astype(complex)


def matrix_dump(matrix: np.ndarray) -> list:
    """Row-major nested list of [re, im] pairs (the CLI --dump wire format)."""
    m = np.asarray(matrix, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def matrix_load(rows: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
