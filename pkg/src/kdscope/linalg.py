"""Dense complex linear-algebra kernels: Hermitian eigendecomposition,
unitary synthesis from Hermitian generators, minors, and orthonormal null spaces.

All routines work on plain complex ndarrays at desk scale (dimension <= 12-ish)
and are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitianError, NotSquareError, SizeMismatchError

HERMITICITY_TOL = 1e-10
ORTHONORMALITY_TOL = 1e-10
NULL_SPACE_TOL = 1e-10


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex ndarray and reject non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise SizeMismatchError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise SizeMismatchError(f"{name} contains non-finite entries")
    return m


@dataclass
class SubspaceBasis:
    """Orthonormal basis of a subspace of C^ambient_dim.

    ``columns`` has shape (ambient_dim, dim); its columns are pairwise
    orthonormal to within ORTHONORMALITY_TOL.  ``dim`` may be zero.
    """

    ambient_dim: int
    dim: int
    columns: np.ndarray

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=complex)
        if cols.shape != (self.ambient_dim, self.dim):
            raise SizeMismatchError(
                f"columns shape {cols.shape} does not match "
                f"({self.ambient_dim}, {self.dim})"
            )
        if self.dim > self.ambient_dim:
            raise SizeMismatchError("dim exceeds ambient_dim")
        if self.dim:
            gram = cols.conj().T @ cols
            dev = np.abs(gram - np.eye(self.dim)).max()
            if dev > ORTHONORMALITY_TOL:
                raise SizeMismatchError(f"columns not orthonormal (deviation {dev:.3e})")
        self.columns = cols


def _require_square(m: np.ndarray, name: str) -> int:
    if m.shape[0] != m.shape[1]:
        raise NotSquareError(f"{name} must be square, got shape {m.shape}")
    return m.shape[0]


def _require_hermitian(m: np.ndarray, name: str, tol: float = HERMITICITY_TOL) -> None:
    dev = np.abs(m - m.conj().T).max()
    if dev > tol:
        raise NotHermitianError(f"{name} deviates from Hermitian by {dev:.3e} (> {tol:g})")


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, v)`` with eigenvalues real and ascending and ``v``
    unitary, such that ``h = v @ diag(eigenvalues) @ v.conj().T``.

    Raises
    ------
    NotSquareError, NotHermitianError
    """
    m = as_complex_matrix(h, "H")
    _require_square(m, "H")
    _require_hermitian(m, "H")
    w, v = np.linalg.eigh(m)
    return w, v


def unitary_from_generator(generator, eps: float) -> np.ndarray:
    """Unitary ``exp(-1j * eps * L)`` for Hermitian ``L``, via eigendecomposition."""
    w, v = hermitian_eig(generator)
    return (v * np.exp(-1j * eps * w)) @ v.conj().T


def minor(u, row_set, col_set) -> complex:
    """Determinant of the submatrix selected by ``row_set`` x ``col_set``.

    The index sequences are taken in the order given, so swapping two rows
    flips the sign.  Sizes must match and be at least 1; the 1-minor is the
    entry itself.  Larger minors use LU with partial pivoting.
    """
    m = as_complex_matrix(u, "U")
    rows = list(row_set)
    cols = list(col_set)
    if len(rows) != len(cols) or not rows:
        raise SizeMismatchError(
            f"row and column sets must have equal size >= 1, got {len(rows)} and {len(cols)}"
        )
    if len(rows) == 1:
        return complex(m[rows[0], cols[0]])
    return complex(np.linalg.det(m[np.ix_(rows, cols)]))


def orthonormal_null_space(c, tol: float = NULL_SPACE_TOL) -> SubspaceBasis:
    """Orthonormal basis of the kernel of ``c``.

    Rank is decided from the singular values of ``c``: a singular value counts
    as zero iff it is <= tol * sigma_max.  A matrix with no rows (or all-zero)
    has full kernel.  Each returned column x satisfies ||c @ x|| <= 10 * tol * sigma_max.
    """
    if tol <= 0:
        raise SizeMismatchError("tol must be positive")
    m = as_complex_matrix(c, "C")
    n = m.shape[1]
    if m.shape[0] == 0:
        return SubspaceBasis(n, n, np.eye(n, dtype=complex))
    _, s, vh = np.linalg.svd(m)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        return SubspaceBasis(n, n, np.eye(n, dtype=complex))
    rank = int(np.count_nonzero(s > tol * smax))
    basis = vh[rank:].conj().T
    return SubspaceBasis(n, n - rank, basis)
