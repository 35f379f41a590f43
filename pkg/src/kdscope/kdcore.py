"""Kirkwood-Dirac distributions of pure states, their nonclassicality,
supports, and the support-uncertainty bounds.

States are always stored in A-basis coordinates ``amps[i] = <a_i|psi>``;
B-coordinates are derived as ``U.conj().T @ amps``.  The KD distribution of a
state relative to a transition matrix U is

    Q[i, j] = <a_i|psi> <psi|b_j> <b_j|a_i>
            = amps[i] * conj((U^dag amps)[j]) * conj(U[i, j]),

a complex matrix with total sum 1 whose row sums are the A-basis outcome
probabilities and whose column sums are the B-basis ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bases import TransitionMatrix
from .errors import (
    DimensionMismatchError,
    InternalInconsistencyError,
    NotNormalizedError,
)

NORM_TOL = 1e-10
DEFAULT_SUPPORT_ETA = 1e-9
DEFAULT_CLASSICALITY_TAU = 1e-9


@dataclass(eq=False)
class StateVector:
    """Unit-norm pure state in A-basis coordinates."""

    d: int
    amps: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex).reshape(-1)
        if a.shape[0] != self.d:
            raise DimensionMismatchError(f"expected {self.d} amplitudes, got {a.shape[0]}")
        if not np.all(np.isfinite(a)):
            raise NotNormalizedError("amplitudes contain non-finite values")
        nrm = float(np.linalg.norm(a))
        if abs(nrm - 1.0) > NORM_TOL:
            raise NotNormalizedError(f"state norm {nrm!r} deviates from 1 by more than {NORM_TOL:g}")
        a = a.copy()
        a.setflags(write=False)
        self.amps = a

    @classmethod
    def from_amplitudes(cls, amps) -> "StateVector":
        """Normalize arbitrary non-zero amplitudes into a StateVector."""
        a = np.asarray(amps, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(a)
        if nrm == 0:
            raise NotNormalizedError("cannot normalize the zero vector")
        return cls(a.shape[0], a / nrm)

    @classmethod
    def from_b_coordinates(cls, u: TransitionMatrix, b_coords) -> "StateVector":
        """Build a state given its B-basis coordinates ``<b_j|psi>``."""
        b = np.asarray(b_coords, dtype=complex).reshape(-1)
        if b.shape[0] != u.d:
            raise DimensionMismatchError(f"expected {u.d} coordinates, got {b.shape[0]}")
        return cls.from_amplitudes(u.u @ b)

    def b_coordinates(self, u: TransitionMatrix) -> np.ndarray:
        return u.u.conj().T @ self.amps


@dataclass(eq=False)
class KDDistribution:
    """Kirkwood-Dirac quasiprobability matrix of a pure state."""

    d: int
    q: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.q, dtype=complex)
        if m.shape != (self.d, self.d):
            raise DimensionMismatchError(f"Q has shape {m.shape}, expected ({self.d}, {self.d})")
        total = complex(m.sum())
        if abs(total - 1.0) > NORM_TOL:
            raise InternalInconsistencyError(f"KD entries sum to {total!r}, expected 1")
        m = m.copy()
        m.setflags(write=False)
        self.q = m


@dataclass(frozen=True)
class SupportProfile:
    """Index supports of a state in the two bases, at zero tolerance ``eta``."""

    S: tuple[int, ...]
    T: tuple[int, ...]
    n_a: int
    n_b: int
    eta: float

    @property
    def total(self) -> int:
        return self.n_a + self.n_b


class ClassicalityCheck(NamedTuple):
    classical: bool
    index: tuple[int, int] | None
    value: complex | None
    offense: float


@dataclass(frozen=True)
class BoundReport:
    n_a: int
    n_b: int
    product_lower_bound: float
    ncc: float
    ncc_upper_bound: float
    edge_value: int


def _check_pair(u: TransitionMatrix, psi: StateVector) -> None:
    if u.d != psi.d:
        raise DimensionMismatchError(f"state dimension {psi.d} does not match basis dimension {u.d}")


def kd_distribution(u: TransitionMatrix, psi: StateVector) -> KDDistribution:
    """KD quasiprobability matrix of ``psi`` relative to the basis pair ``u``.

    Verifies the marginal identities (row sums = A-probabilities, column sums
    = B-probabilities) before returning.
    """
    _check_pair(u, psi)
    b = psi.b_coordinates(u)
    q = psi.amps[:, None] * b.conj()[None, :] * u.u.conj()
    row_dev = np.abs(q.sum(axis=1) - np.abs(psi.amps) ** 2).max()
    col_dev = np.abs(q.sum(axis=0) - np.abs(b) ** 2).max()
    if max(row_dev, col_dev) > NORM_TOL:
        raise InternalInconsistencyError(
            f"KD marginals deviate by {max(row_dev, col_dev):.3e}"
        )
    return KDDistribution(u.d, q)


def nonclassicality(q: KDDistribution) -> float:
    """Total absolute mass ``sum |Q[i, j]|``; equals 1 iff the state is KD-classical."""
    return float(np.abs(q.q).sum())


def is_kd_classical(q: KDDistribution, tau: float = DEFAULT_CLASSICALITY_TAU) -> ClassicalityCheck:
    """Decide whether every entry is real (|Im| <= tau) and nonnegative (Re >= -tau).

    When the answer is False, the worst offending entry (largest violation)
    is reported as a witness.
    """
    if tau <= 0:
        raise InternalInconsistencyError("tau must be positive")
    offense = np.maximum(np.abs(q.q.imag), -q.q.real)
    worst = float(offense.max())
    if worst <= tau:
        return ClassicalityCheck(True, None, None, worst)
    i, j = np.unravel_index(int(np.argmax(offense)), offense.shape)
    return ClassicalityCheck(False, (int(i), int(j)), complex(q.q[i, j]), worst)


def support(u: TransitionMatrix, psi: StateVector, eta: float = DEFAULT_SUPPORT_ETA) -> SupportProfile:
    """Index sets where the state has amplitude modulus > eta, in both bases."""
    if eta <= 0:
        raise InternalInconsistencyError("eta must be positive")
    _check_pair(u, psi)
    b = psi.b_coordinates(u)
    s_idx = tuple(int(i) for i in np.flatnonzero(np.abs(psi.amps) > eta))
    t_idx = tuple(int(j) for j in np.flatnonzero(np.abs(b) > eta))
    return SupportProfile(s_idx, t_idx, len(s_idx), len(t_idx), eta)


def bound_report(
    u: TransitionMatrix, psi: StateVector, eta: float = DEFAULT_SUPPORT_ETA
) -> BoundReport:
    """Supports, nonclassicality, and the two uncertainty bounds for one state.

    The product bound ``n_a * n_b >= 1/M^2`` and the chain
    ``1 <= ncc <= M * sqrt(n_a * n_b)`` are mathematical identities; a
    violation beyond 1e-9 raises InternalInconsistencyError.
    """
    _check_pair(u, psi)
    prof = support(u, psi, eta)
    m_max = float(np.abs(u.u).max())
    ncc = nonclassicality(kd_distribution(u, psi))
    product_lower = 1.0 / m_max**2
    upper = m_max * np.sqrt(prof.n_a * prof.n_b)
    slack = 1e-9
    if prof.n_a * prof.n_b < product_lower - slack:
        raise InternalInconsistencyError(
            f"support product {prof.n_a * prof.n_b} below bound {product_lower!r}"
        )
    if ncc < 1.0 - slack or ncc > upper + slack:
        raise InternalInconsistencyError(
            f"nonclassicality {ncc!r} outside [1, {upper!r}]"
        )
    return BoundReport(prof.n_a, prof.n_b, product_lower, ncc, float(upper), u.d + 1)


def random_state(d: int, seed: int) -> StateVector:
    """Haar-uniform random pure state: normalized standard complex Gaussians."""
    if d < 1:
        raise DimensionMismatchError(f"d must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return StateVector.from_amplitudes(z)
