"""Incompatibility analysis of a transition matrix.

Two grades of incompatibility of a basis pair, both functions of U alone:

* strongly incompatible (no overlap vanishes and none has modulus 1), decided
  from the overlap extrema; and
* completely incompatible (every pair of index sets S, T with |S| + |T| <= d
  spans trivially intersecting projector ranges), decided by scanning all
  k x k minors of U for k = 1 .. d-1: complete incompatibility holds iff no
  minor vanishes.

When a minor does vanish, a witness pair of index sets with a nontrivial
subspace intersection is extracted from the first vanishing minor in scan
order (increasing k, lexicographic row and column subsets), which makes the
reported witness deterministic and canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import ceil, floor, sqrt

import numpy as np

from .bases import TransitionMatrix
from .errors import DimensionTooLargeError, InternalInconsistencyError
from .kdcore import DEFAULT_SUPPORT_ETA

DEFAULT_MINOR_TOL = 1e-10
MAX_COINC_DIM = 12
MAX_ENUM_DIM = 8
_MINOR_CHUNK = 4_000_000  # complex entries per det batch


@dataclass(frozen=True)
class OverlapExtrema:
    """Smallest and largest overlap modulus ``|U[i, j]|`` of a basis pair."""

    m_ab: float
    M_ab: float

    def __post_init__(self):
        if not -1e-12 <= self.m_ab <= self.M_ab <= 1 + 1e-12:
            raise InternalInconsistencyError(
                f"overlap extrema out of order: m={self.m_ab!r}, M={self.M_ab!r}"
            )


def overlap_extrema(u: TransitionMatrix) -> OverlapExtrema:
    mods = np.abs(u.u)
    m, big = float(mods.min()), float(mods.max())
    root = 1.0 / sqrt(u.d)
    if m > root + 1e-12 or big < root - 1e-12:
        raise InternalInconsistencyError(
            f"extrema ({m!r}, {big!r}) do not bracket d**-0.5 = {root!r}"
        )
    return OverlapExtrema(m, big)


def is_stroinc(u: TransitionMatrix, eta: float = DEFAULT_SUPPORT_ETA) -> bool:
    """True iff every overlap is nonzero (> eta) and none has modulus 1 (within eta)."""
    ext = overlap_extrema(u)
    return ext.m_ab > eta and ext.M_ab < 1.0 - eta


def _iter_minor_batches(u: np.ndarray, k: int):
    """Yield (row_subsets, col_subsets, |det| matrix) for all k-minors, in
    lexicographic order, chunked over row subsets to bound memory."""
    d = u.shape[0]
    rows = np.array(list(combinations(range(d), k)), dtype=int)
    cols = rows  # same subset list for columns
    n_cols = len(cols)
    chunk = max(1, _MINOR_CHUNK // max(1, n_cols * k * k))
    for lo in range(0, len(rows), chunk):
        r = rows[lo : lo + chunk]
        sub = u[r[:, None, :, None], cols[None, :, None, :]]
        dets = np.abs(np.linalg.det(sub))
        yield r, cols, dets


def _first_vanishing_minor(u: np.ndarray, tol: float):
    """Smallest (k, rows, cols) in scan order with |minor| <= tol, or None."""
    d = u.shape[0]
    for k in range(1, d):
        for r, c, dets in _iter_minor_batches(u, k):
            hits = np.argwhere(dets <= tol)
            if hits.size:
                i, j = hits[0]
                return k, tuple(int(x) for x in r[i]), tuple(int(x) for x in c[j])
    return None


def is_coinc(u: TransitionMatrix, tol: float = DEFAULT_MINOR_TOL) -> bool:
    """True iff no k x k minor of U vanishes, for k = 1 .. d-1.

    The full determinant (k = d) is skipped: it has modulus 1 for unitary U.
    Enumeration is capped at d <= 12.
    """
    if tol <= 0:
        raise InternalInconsistencyError("tol must be positive")
    if u.d > MAX_COINC_DIM:
        raise DimensionTooLargeError(f"minor enumeration capped at d <= {MAX_COINC_DIM}")
    return _first_vanishing_minor(u.u, tol) is None


def coinc_witness(
    u: TransitionMatrix, tol: float = DEFAULT_MINOR_TOL
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Index sets (S, T) with |S| + |T| <= d and a nontrivial intersection
    of the corresponding projector ranges, or None when completely
    incompatible.

    S is the complement of the vanishing minor's row set and T is its column
    set; the pair is validated by checking that the intersection subspace is
    nontrivial before being returned.
    """
    if u.d > MAX_COINC_DIM:
        raise DimensionTooLargeError(f"minor enumeration capped at d <= {MAX_COINC_DIM}")
    hit = _first_vanishing_minor(u.u, tol)
    if hit is None:
        return None
    _, rows, cols = hit
    s_set = tuple(i for i in range(u.d) if i not in rows)
    t_set = cols
    from .diagram import support_subspace  # deferred: diagram depends on this module

    if support_subspace(u, s_set, t_set).dim < 1:
        raise InternalInconsistencyError(
            f"witness ({s_set}, {t_set}) has a trivial intersection subspace"
        )
    return s_set, t_set


def min_support_uncertainty(u: TransitionMatrix, eta: float = DEFAULT_SUPPORT_ETA) -> int:
    """Minimum of ``n_a(psi) + n_b(psi)`` over all nonzero states.

    Scans index-set pairs (S, T) in increasing |S| + |T|; for each pair whose
    intersection subspace is nontrivial, the generic support sum of that
    subspace is a realized value, and the first total with any nontrivial
    pair yields the minimum.  Pairs with |S| + |T| > d + 1 never need to be
    visited because basis vectors already realize d + 1.
    """
    if u.d > MAX_ENUM_DIM:
        raise DimensionTooLargeError(f"support enumeration capped at d <= {MAX_ENUM_DIM}")
    from .diagram import generic_support, support_subspace

    d = u.d
    for total in range(2, d + 2):
        realized = []
        for n_a in range(max(1, total - d), min(d, total - 1) + 1):
            n_b = total - n_a
            for s_set in combinations(range(d), n_a):
                for t_set in combinations(range(d), n_b):
                    basis = support_subspace(u, s_set, t_set)
                    if basis.dim >= 1:
                        prof = generic_support(basis, u, eta)
                        realized.append(prof.total)
        if realized:
            return min(realized)
    raise InternalInconsistencyError("no nontrivial support pair found up to d + 1")


@dataclass(frozen=True)
class IncompatReport:
    """Full incompatibility analysis of one transition matrix."""

    extrema: OverlapExtrema
    stroinc: bool
    coinc: bool
    coinc_witness: tuple[tuple[int, ...], tuple[int, ...]] | None
    n_min: int
    n_min_lower_bound: float
    edge: int
    legacy_bound: int

    def __post_init__(self):
        if self.n_min < ceil(self.n_min_lower_bound - 1e-9):
            raise InternalInconsistencyError(
                f"n_min = {self.n_min} below lower bound {self.n_min_lower_bound!r}"
            )
        if self.coinc != (self.n_min == self.edge):
            raise InternalInconsistencyError(
                f"coinc = {self.coinc} inconsistent with n_min = {self.n_min}, edge = {self.edge}"
            )
        if self.coinc and not self.stroinc:
            raise InternalInconsistencyError("complete incompatibility must imply strong")

    def to_json_dict(self) -> dict:
        witness = None
        if self.coinc_witness is not None:
            witness = {"S": list(self.coinc_witness[0]), "T": list(self.coinc_witness[1])}
        return {
            "m_ab": self.extrema.m_ab,
            "M_ab": self.extrema.M_ab,
            "stroinc": self.stroinc,
            "coinc": self.coinc,
            "coinc_witness": witness,
            "n_min": self.n_min,
            "n_min_lower_bound": self.n_min_lower_bound,
            "edge": self.edge,
            "legacy_bound": self.legacy_bound,
        }


def incompat_report(
    u: TransitionMatrix,
    eta: float = DEFAULT_SUPPORT_ETA,
    minor_tol: float = DEFAULT_MINOR_TOL,
) -> IncompatReport:
    """Run the full incompatibility analysis (requires d <= 8 for n_min)."""
    ext = overlap_extrema(u)
    return IncompatReport(
        extrema=ext,
        stroinc=is_stroinc(u, eta),
        coinc=is_coinc(u, minor_tol),
        coinc_witness=coinc_witness(u, minor_tol),
        n_min=min_support_uncertainty(u, eta),
        n_min_lower_bound=2.0 / ext.M_ab,
        edge=u.d + 1,
        legacy_bound=floor(3 * u.d / 2),
    )
