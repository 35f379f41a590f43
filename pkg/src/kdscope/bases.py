"""Constructors and validation for transition matrices between basis pairs.

A basis pair (A, B) is represented solely by its unitary transition matrix
``U[i, j] = <a_i|b_j>``.  Indices are 0-based everywhere: ``i, j`` run over
``0..d-1`` (documentation of quantities that are conventionally written
1-based is shifted by one accordingly).

Families provided here:

* ``dft`` -- discrete Fourier transform, positive sign convention
  ``U[i, j] = exp(+2j*pi*i*j/d) / sqrt(d)``.
* ``mub4`` -- the one-parameter family of 4x4 mutually unbiased transition
  matrices ``U(s)``, ``|s| = 1``.
* ``perturbed`` -- ``exp(-1j*eps*L) @ U`` for a Hermitian generator ``L``.
* ``spin_transition`` -- Wigner little-d rotation matrix ``d^(s)(beta)``,
  which for ``beta = pi/2`` is the transition matrix between the J_z and J_x
  eigenbases of a spin ``s``.
* ``load_matrix`` -- user-supplied matrix from a JSON file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import serialize
from .errors import (
    DimensionMismatchError,
    DimensionTooSmallError,
    InvalidSpinError,
    NotUnitaryError,
    NotUnitModulusError,
    SpinTooLargeError,
)
from .linalg import as_complex_matrix, unitary_from_generator

UNITARITY_TOL = 1e-10
FILE_UNITARITY_TOL = 1e-8
MAX_SPIN = 10.0


@dataclass(eq=False)
class TransitionMatrix:
    """A d x d unitary transition matrix between two orthonormal bases."""

    d: int
    u: np.ndarray
    unitarity_tol: float = field(default=UNITARITY_TOL, repr=False)

    def __post_init__(self):
        m = as_complex_matrix(self.u, "U")
        if m.shape != (self.d, self.d):
            raise DimensionMismatchError(f"U has shape {m.shape}, expected ({self.d}, {self.d})")
        dev = float(np.abs(m @ m.conj().T - np.eye(self.d)).max())
        if dev > self.unitarity_tol:
            raise NotUnitaryError(
                f"matrix is not unitary: max |U U^dag - I| = {dev:.3e} (> {self.unitarity_tol:g})"
            )
        m = m.copy()
        m.setflags(write=False)
        self.u = m

    @classmethod
    def from_array(cls, u, unitarity_tol: float = UNITARITY_TOL) -> "TransitionMatrix":
        m = as_complex_matrix(u, "U")
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"U must be square, got shape {m.shape}")
        return cls(m.shape[0], m, unitarity_tol)

    def adjoint(self) -> "TransitionMatrix":
        """Transition matrix with the roles of the two bases swapped."""
        return TransitionMatrix(self.d, self.u.conj().T, self.unitarity_tol)


def dft(d: int) -> TransitionMatrix:
    """Discrete Fourier transform matrix ``exp(+2j*pi*i*j/d) / sqrt(d)``."""
    if d < 2:
        raise DimensionTooSmallError(f"dft requires d >= 2, got {d}")
    idx = np.arange(d)
    phase = np.outer(idx, idx)
    u = np.exp(2j * np.pi * phase / d) / np.sqrt(d)
    return TransitionMatrix(d, u)


def mub4(s: complex) -> TransitionMatrix:
    """The 4x4 mutually unbiased transition matrix U(s), |s| = 1.

    Every entry has modulus 1/2, and ``mub4(s).adjoint()`` equals
    ``mub4(conj(s))`` entrywise.  ``s = 1j`` is unitarily equivalent to the
    d = 4 DFT.
    """
    s = complex(s)
    if abs(abs(s) - 1.0) > 1e-12:
        raise NotUnitModulusError(f"s must have unit modulus, got |s| = {abs(s)!r}")
    u = 0.5 * np.array(
        [
            [1, 1, 1, 1],
            [1, 1, -1, -1],
            [1, -1, s, -s],
            [1, -1, -s, s],
        ],
        dtype=complex,
    )
    return TransitionMatrix(4, u)


def default_generator(d: int) -> np.ndarray:
    """Hermitian generator with ``L[j, k] = 1j`` for j < k and ``-1j`` for j > k."""
    upper = 1j * np.triu(np.ones((d, d)), 1)
    return upper + upper.conj().T


def perturbed(base: TransitionMatrix, eps: float, generator=None) -> TransitionMatrix:
    """Perturbation ``exp(-1j*eps*L) @ base`` of a transition matrix.

    ``generator`` must be Hermitian and d x d; when omitted the default
    all-pairs generator from :func:`default_generator` is used.
    """
    d = base.d
    gen = default_generator(d) if generator is None else as_complex_matrix(generator, "L")
    if gen.shape != (d, d):
        raise DimensionMismatchError(f"generator has shape {gen.shape}, expected ({d}, {d})")
    u = unitary_from_generator(gen, eps) @ base.u
    return TransitionMatrix(d, u)


def _wigner_little_d(two_s: int, beta: float) -> np.ndarray:
    # Standard factorial sum formula; rows m' and columns m both run
    # descending from +s to -s, which reproduces the usual printed form of
    # the spin-2 matrix at beta = pi/2 entry for entry.
    dim = two_s + 1
    cos_b = math.cos(beta / 2.0)
    sin_b = math.sin(beta / 2.0)
    two_ms = [two_s - 2 * r for r in range(dim)]
    out = np.zeros((dim, dim))
    for a, two_mp in enumerate(two_ms):
        jp_mp = (two_s + two_mp) // 2
        jm_mp = (two_s - two_mp) // 2
        for b, two_m in enumerate(two_ms):
            jp_m = (two_s + two_m) // 2
            jm_m = (two_s - two_m) // 2
            pref = math.sqrt(
                math.factorial(jp_mp)
                * math.factorial(jm_mp)
                * math.factorial(jp_m)
                * math.factorial(jm_m)
            )
            k_lo = max(0, (two_m - two_mp) // 2)
            k_hi = min(jm_mp, jp_m)
            total = 0.0
            for k in range(k_lo, k_hi + 1):
                denom = (
                    math.factorial(jm_mp - k)
                    * math.factorial(jp_m - k)
                    * math.factorial(k + (two_mp - two_m) // 2)
                    * math.factorial(k)
                )
                c_pow = (2 * two_s + two_m - two_mp) // 2 - 2 * k
                s_pow = (two_mp - two_m) // 2 + 2 * k
                total += (-1) ** k * cos_b**c_pow * sin_b**s_pow / denom
            out[a, b] = pref * total
    return out


def spin_transition(s: float, beta: float = math.pi / 2) -> TransitionMatrix:
    """Wigner little-d matrix of a spin ``s`` at rotation angle ``beta``.

    At ``beta = pi/2`` this is the transition matrix between the J_z and J_x
    eigenbases, with both row and column labels ordered m = +s ... -s.
    ``s`` must be a half-integer >= 1/2; factorial precision caps it at 10.
    """
    two_s = round(2 * s)
    if abs(2 * s - two_s) > 1e-9 or two_s < 1:
        raise InvalidSpinError(f"spin must be a half-integer >= 1/2, got {s!r}")
    if s > MAX_SPIN:
        raise SpinTooLargeError(f"spin {s} exceeds the double-precision cap {MAX_SPIN}")
    u = _wigner_little_d(two_s, float(beta)).astype(complex)
    return TransitionMatrix(two_s + 1, u)


def load_matrix(path) -> TransitionMatrix:
    """Load and validate a transition matrix from its JSON file format.

    Raises ParseError for malformed files and NotUnitaryError (with the
    maximum deviation) when the stored matrix is not unitary to 1e-8.
    """
    d, u = serialize.read_matrix(path)
    return TransitionMatrix(d, u, unitarity_tol=FILE_UNITARITY_TOL)


def save_matrix(tm: TransitionMatrix, path) -> None:
    """Write a transition matrix in the JSON file format (lossless)."""
    serialize.write_matrix(path, tm.u)


_FAMILIES = ("dft", "mub4", "perturbed", "spin", "file")


@dataclass
class BasisSpec:
    """Declarative description of a transition-matrix construction."""

    family: str
    d: int | None = None
    s: complex | None = None
    eps: float | None = None
    generator: np.ndarray | None = None
    spin: float | None = None
    path: str | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DimensionMismatchError(
                f"unknown basis family {self.family!r}; expected one of {_FAMILIES}"
            )

    def build(self) -> TransitionMatrix:
        if self.family == "dft":
            if self.d is None:
                raise DimensionMismatchError("dft basis requires a dimension")
            return dft(self.d)
        if self.family == "mub4":
            if self.s is None:
                raise NotUnitModulusError("mub4 basis requires the unit-modulus parameter s")
            return mub4(self.s)
        if self.family == "perturbed":
            if self.eps is None:
                raise DimensionMismatchError("perturbed basis requires eps")
            if self.s is not None:
                base = mub4(self.s)
            elif self.d is not None:
                base = dft(self.d)
            else:
                raise DimensionMismatchError("perturbed basis requires --s (MUB base) or a dimension (DFT base)")
            return perturbed(base, self.eps, self.generator)
        if self.family == "spin":
            if self.spin is None:
                raise InvalidSpinError("spin basis requires the spin value")
            return spin_transition(self.spin)
        if self.path is None:
            raise DimensionMismatchError("file basis requires a path")
        return load_matrix(self.path)

    def describe(self) -> dict:
        """JSON-ready summary used in artifact metadata headers."""
        out: dict = {"family": self.family}
        if self.d is not None:
            out["d"] = self.d
        if self.s is not None:
            out["s"] = [self.s.real, self.s.imag]
        if self.eps is not None:
            out["eps"] = self.eps
        if self.generator is not None:
            out["generator"] = "custom"
        if self.spin is not None:
            out["spin"] = self.spin
        if self.path is not None:
            out["path"] = str(self.path)
        return out
