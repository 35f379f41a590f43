"""Support-uncertainty diagrams of a basis pair, with KD-classicality
classification of every realized (n_a, n_b) point.

A cell is an index-set pair (S, T); its subspace is the set of states whose
A-support lies in S and B-support in T.  A cell is canonical when the generic
support of that subspace is exactly (S, T); every realized diagram point is
realized by at least one canonical cell, and canonical cells with the same
(|S|, |T|) are exactly the cells the classification has to examine.

Classification is search-based: a point is NONCLASSICAL when the configured
search found no state at the point with unit total absolute KD mass, and
CLASSICAL/MIXED according to the witnesses found.  One-dimensional cells are
decided exactly from their unique state; higher-dimensional cells run a
restarted simplex minimization of the nonclassicality over the cell.  A
search minimizer whose support dropped below the cell's generic support is
discarded as a witness for the cell's point (it belongs to a smaller point);
claimed classical minimizers are re-polished at tighter tolerance to push
boundary artifacts over the support threshold before being accepted.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import combinations
from math import sqrt

import numpy as np

from .bases import TransitionMatrix
from .errors import (
    DimensionTooLargeError,
    EmptySubspaceError,
    IndexOutOfRangeError,
    InternalInconsistencyError,
    InvalidFactorizationError,
    DegenerateParameterError,
    NotUnitModulusError,
)
from .incompat import MAX_ENUM_DIM, is_stroinc, overlap_extrema
from .kdcore import (
    DEFAULT_SUPPORT_ETA,
    StateVector,
    SupportProfile,
    kd_distribution,
    nonclassicality,
    support,
)
from .linalg import NULL_SPACE_TOL, SubspaceBasis, orthonormal_null_space
from .optimize import nelder_mead_batch

EMPTY = "EMPTY"
CLASSICAL = "CLASSICAL"
NONCLASSICAL = "NONCLASSICAL"
MIXED = "MIXED"

DEFAULT_TAU_EXACT = 1e-9
DEFAULT_TAU_CLASS = 1e-6
_POLISH_RESTARTS = 8
_PROBE_TRIES = 16


@dataclass(frozen=True)
class SearchConfig:
    """Budget and seeding of the per-cell classicality search."""

    seed: int = 0
    restarts: int = 50
    max_iter: int = 2000
    conv_tol: float = 1e-10

    def __post_init__(self):
        if self.conv_tol <= 0:
            raise InternalInconsistencyError("conv_tol must be positive")
        if self.restarts < 1 or self.max_iter < 1:
            raise InternalInconsistencyError("restarts and max_iter must be >= 1")


@dataclass(frozen=True)
class DiagramPoint:
    n_a: int
    n_b: int
    classification: str
    min_ncc_found: float
    cells: int
    classical_witness: StateVector | None = None
    nonclassical_witness: StateVector | None = None

    @property
    def witnesses(self) -> tuple[StateVector, ...]:
        return tuple(w for w in (self.classical_witness, self.nonclassical_witness) if w is not None)


@dataclass(frozen=True)
class Diagram:
    d: int
    points: tuple[DiagramPoint, ...]
    hyperbola_constant: float
    edge: int
    n_min: int

    def point(self, n_a: int, n_b: int) -> DiagramPoint | None:
        for p in self.points:
            if (p.n_a, p.n_b) == (n_a, n_b):
                return p
        return None

    def realized(self) -> set[tuple[int, int]]:
        return {(p.n_a, p.n_b) for p in self.points}


def support_subspace(u: TransitionMatrix, s_set, t_set, tol: float = NULL_SPACE_TOL) -> SubspaceBasis:
    """Orthonormal basis (A-coordinates) of the states with A-support in S
    and B-support in T: the kernel of the rows ``{e_i : i not in S}`` stacked
    with ``{column j of U, conjugate-transposed : j not in T}``."""
    d = u.d
    s_set = tuple(sorted(int(i) for i in s_set))
    t_set = tuple(sorted(int(j) for j in t_set))
    if not s_set or not t_set:
        raise IndexOutOfRangeError("S and T must be nonempty")
    if s_set[0] < 0 or s_set[-1] >= d or t_set[0] < 0 or t_set[-1] >= d:
        raise IndexOutOfRangeError(f"indices out of range for d = {d}")
    eye = np.eye(d, dtype=complex)
    rows = [eye[i] for i in range(d) if i not in s_set]
    rows += [u.u[:, j].conj() for j in range(d) if j not in t_set]
    if not rows:
        return SubspaceBasis(d, d, eye)
    return orthonormal_null_space(np.array(rows), tol)


def generic_support(
    basis: SubspaceBasis, u: TransitionMatrix, eta: float = DEFAULT_SUPPORT_ETA
) -> SupportProfile:
    """Support pattern of almost every state in the subspace: the coordinates
    not forced to zero across the whole basis (row norms > eta)."""
    if basis.dim < 1:
        raise EmptySubspaceError("generic support of the zero subspace is undefined")
    if basis.ambient_dim != u.d:
        raise IndexOutOfRangeError("basis ambient dimension does not match U")
    a_norms = np.linalg.norm(basis.columns, axis=1)
    b_norms = np.linalg.norm(u.u.conj().T @ basis.columns, axis=1)
    s_idx = tuple(int(i) for i in np.flatnonzero(a_norms > eta))
    t_idx = tuple(int(j) for j in np.flatnonzero(b_norms > eta))
    return SupportProfile(s_idx, t_idx, len(s_idx), len(t_idx), eta)


def _canonical_amplitudes(v: np.ndarray) -> np.ndarray:
    """Normalize and fix the global phase: the largest-modulus amplitude is
    made real positive (first index wins ties), so output is deterministic."""
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    phase = v[k] / abs(v[k])
    return v * phase.conjugate()


def _cell_rng(seed: int, s_set, t_set) -> np.random.Generator:
    s_mask = sum(1 << i for i in s_set)
    t_mask = sum(1 << j for j in t_set)
    return np.random.default_rng(np.random.SeedSequence((int(seed), s_mask, t_mask)))


def _make_objective(abs_u: np.ndarray, b_mat: np.ndarray, w_mat: np.ndarray, k: int):
    bt = b_mat.T.copy()
    wt = w_mat.T.copy()

    def fn(x: np.ndarray) -> np.ndarray:
        c = x[:, :k] + 1j * x[:, k:]
        nrm = np.linalg.norm(c, axis=1)
        nrm = np.where(nrm == 0.0, 1.0, nrm)
        a_abs = np.abs(c @ bt) / nrm[:, None]
        b_abs = np.abs(c @ wt) / nrm[:, None]
        return ((a_abs @ abs_u) * b_abs).sum(axis=1)

    return fn


def _state_from_coeffs(basis: SubspaceBasis, x: np.ndarray, k: int) -> StateVector:
    c = x[:k] + 1j * x[k:]
    v = basis.columns @ (c / np.linalg.norm(c))
    return StateVector.from_amplitudes(_canonical_amplitudes(v))


def minimize_ncc_over_subspace(
    u: TransitionMatrix, basis: SubspaceBasis, cfg: SearchConfig | None = None
) -> tuple[float, StateVector]:
    """Minimize the nonclassicality over unit vectors of the subspace.

    One-dimensional subspaces are evaluated exactly (no search).  Otherwise a
    batched Nelder-Mead run over ``cfg.restarts`` random starting points in
    the 2*dim real coefficients (normalization enforced by projection)
    returns the best value and its state.  Deterministic given ``cfg.seed``.
    The caller is responsible for discarding the minimizer as a support
    witness when its support dropped below the subspace's generic support.
    """
    cfg = cfg or SearchConfig()
    if basis.dim < 1:
        raise EmptySubspaceError("cannot minimize over the zero subspace")
    if basis.dim == 1:
        st = StateVector.from_amplitudes(_canonical_amplitudes(basis.columns[:, 0]))
        return nonclassicality(kd_distribution(u, st)), st
    k = basis.dim
    w_mat = u.u.conj().T @ basis.columns
    fn = _make_objective(np.abs(u.u), basis.columns, w_mat, k)
    rng = np.random.default_rng(int(cfg.seed))
    x0 = rng.standard_normal((cfg.restarts, 2 * k))
    xb, fb = nelder_mead_batch(fn, x0, cfg.max_iter, cfg.conv_tol)
    best = int(np.argmin(fb))
    return float(fb[best]), _state_from_coeffs(basis, xb[best], k)


@dataclass
class _CellResult:
    classical_state: StateVector | None = None
    classical_value: float = np.inf
    nonclassical_state: StateVector | None = None
    nonclassical_value: float = -np.inf
    min_valid: float = np.inf


def _exact_ncc(u: TransitionMatrix, st: StateVector) -> float:
    return nonclassicality(kd_distribution(u, st))


def _search_cell(
    u: TransitionMatrix,
    s_set: tuple[int, ...],
    t_set: tuple[int, ...],
    basis: SubspaceBasis,
    cfg: SearchConfig,
    eta: float,
    tau_exact: float,
    tau_class: float,
) -> _CellResult:
    res = _CellResult()
    cell = (s_set, t_set)

    def record(st: StateVector, value: float, classical: bool) -> None:
        res.min_valid = min(res.min_valid, value)
        if classical:
            if value < res.classical_value:
                res.classical_state, res.classical_value = st, value
        elif value > res.nonclassical_value:
            res.nonclassical_state, res.nonclassical_value = st, value

    if basis.dim == 1:
        st = StateVector.from_amplitudes(_canonical_amplitudes(basis.columns[:, 0]))
        value = _exact_ncc(u, st)
        record(st, value, value <= 1.0 + tau_exact)
        return res

    rng = _cell_rng(cfg.seed, s_set, t_set)
    k = basis.dim
    w_mat = u.u.conj().T @ basis.columns
    fn = _make_objective(np.abs(u.u), basis.columns, w_mat, k)
    x0 = rng.standard_normal((cfg.restarts, 2 * k))
    xb, fb = nelder_mead_batch(fn, x0, cfg.max_iter, cfg.conv_tol)
    best = int(np.argmin(fb))
    st = _state_from_coeffs(basis, xb[best], k)
    value = float(fb[best])
    prof = support(u, st, eta)
    valid = (prof.S, prof.T) == cell
    if valid and value <= 1.0 + tau_class:
        # A near-unit minimum with intact support may be a genuine interior
        # classical state or a stalled approach to a smaller-support one;
        # polishing at tighter tolerance separates the two (the latter loses
        # support once converged).
        xp = xb[best][None, :] + 1e-3 * rng.standard_normal((_POLISH_RESTARTS, 2 * k))
        xpb, fpb = nelder_mead_batch(fn, xp, cfg.max_iter, cfg.conv_tol * 1e-2)
        j = int(np.argmin(fpb))
        st_p = _state_from_coeffs(basis, xpb[j], k)
        value_p = float(fpb[j])
        prof_p = support(u, st_p, eta)
        if (prof_p.S, prof_p.T) == cell and value_p <= 1.0 + tau_class:
            record(st_p, value_p, True)
    elif valid:
        record(st, value, value <= 1.0 + tau_class)

    # Generic probe: a random state of the cell is nonclassical evidence when
    # its mass exceeds the threshold, and bounds min_valid from above.
    for _ in range(_PROBE_TRIES):
        coeff = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        probe = StateVector.from_amplitudes(_canonical_amplitudes(basis.columns @ coeff))
        prof = support(u, probe, eta)
        if (prof.S, prof.T) == cell:
            value = _exact_ncc(u, probe)
            record(probe, value, value <= 1.0 + tau_class)
            break
    return res


def _enumerate_canonical_cells(
    u: TransitionMatrix,
    eta: float,
    null_tol: float,
    prune_product: float | None = None,
) -> dict[tuple[int, int], list[tuple[tuple[int, ...], tuple[int, ...], SubspaceBasis]]]:
    """All canonical cells, bucketed by their (n_a, n_b) point.

    Cells whose |S| * |T| falls below the overlap product bound are skipped:
    they cannot host states.
    """
    d = u.d
    bound = prune_product if prune_product is not None else 1.0 / overlap_extrema(u).M_ab ** 2
    buckets: dict[tuple[int, int], list] = {}
    for n_a in range(1, d + 1):
        for n_b in range(1, d + 1):
            if n_a * n_b < bound - 1e-9:
                continue
            for s_set in combinations(range(d), n_a):
                for t_set in combinations(range(d), n_b):
                    basis = support_subspace(u, s_set, t_set, null_tol)
                    if basis.dim < 1:
                        continue
                    prof = generic_support(basis, u, eta)
                    if prof.S == s_set and prof.T == t_set:
                        buckets.setdefault((n_a, n_b), []).append((s_set, t_set, basis))
    return buckets


def _classify_cells(
    u: TransitionMatrix,
    n_a: int,
    n_b: int,
    cells,
    cfg: SearchConfig,
    eta: float,
    tau_exact: float,
    tau_class: float,
) -> DiagramPoint:
    if not cells:
        return DiagramPoint(n_a, n_b, EMPTY, float("nan"), 0)
    has_cl = False
    has_nc = False
    min_found = np.inf
    cl_state, cl_value = None, np.inf
    nc_state, nc_value = None, -np.inf
    for s_set, t_set, basis in cells:
        res = _search_cell(u, s_set, t_set, basis, cfg, eta, tau_exact, tau_class)
        min_found = min(min_found, res.min_valid)
        if res.classical_state is not None:
            has_cl = True
            if res.classical_value < cl_value:
                cl_state, cl_value = res.classical_state, res.classical_value
        if res.nonclassical_state is not None:
            has_nc = True
            if res.nonclassical_value > nc_value:
                nc_state, nc_value = res.nonclassical_state, res.nonclassical_value
    if has_cl and has_nc:
        label = MIXED
    elif has_cl:
        label = CLASSICAL
    elif has_nc:
        label = NONCLASSICAL
    else:
        raise InternalInconsistencyError(
            f"point ({n_a}, {n_b}): no valid state evaluation in any of {len(cells)} cells"
        )
    return DiagramPoint(n_a, n_b, label, float(min_found), len(cells), cl_state, nc_state)


def classify_point(
    u: TransitionMatrix,
    n_a: int,
    n_b: int,
    cfg: SearchConfig | None = None,
    *,
    eta: float = DEFAULT_SUPPORT_ETA,
    tau_exact: float = DEFAULT_TAU_EXACT,
    tau_class: float = DEFAULT_TAU_CLASS,
    null_tol: float = NULL_SPACE_TOL,
) -> DiagramPoint:
    """Classify one (n_a, n_b) point over all of its canonical cells."""
    if u.d > MAX_ENUM_DIM:
        raise DimensionTooLargeError(f"diagram enumeration capped at d <= {MAX_ENUM_DIM}")
    if not (1 <= n_a <= u.d and 1 <= n_b <= u.d):
        raise IndexOutOfRangeError(f"point ({n_a}, {n_b}) outside the 1..{u.d} lattice")
    cfg = cfg or SearchConfig()
    cells = []
    for s_set in combinations(range(u.d), n_a):
        for t_set in combinations(range(u.d), n_b):
            basis = support_subspace(u, s_set, t_set, null_tol)
            if basis.dim < 1:
                continue
            prof = generic_support(basis, u, eta)
            if prof.S == s_set and prof.T == t_set:
                cells.append((s_set, t_set, basis))
    return _classify_cells(u, n_a, n_b, cells, cfg, eta, tau_exact, tau_class)


def _bucket_worker(args):
    u_array, point, cells, cfg, eta, tau_exact, tau_class = args
    u = TransitionMatrix.from_array(u_array)
    return _classify_cells(u, point[0], point[1], cells, cfg, eta, tau_exact, tau_class)


def uncertainty_diagram(
    u: TransitionMatrix,
    cfg: SearchConfig | None = None,
    *,
    eta: float = DEFAULT_SUPPORT_ETA,
    tau_exact: float = DEFAULT_TAU_EXACT,
    tau_class: float = DEFAULT_TAU_CLASS,
    null_tol: float = NULL_SPACE_TOL,
    jobs: int = 1,
) -> Diagram:
    """Enumerate and classify the full uncertainty diagram of a basis pair.

    Every index-set pair is scanned once; realized points are the generic
    supports of the nontrivial canonical cells, and each realized point is
    classified over its cells.  With ``jobs > 1`` the per-point work runs on
    a process pool; per-cell seeds depend only on (seed, S, T), so parallel
    and serial runs produce identical output.
    """
    if u.d > MAX_ENUM_DIM:
        raise DimensionTooLargeError(f"diagram enumeration capped at d <= {MAX_ENUM_DIM}")
    cfg = cfg or SearchConfig()
    ext = overlap_extrema(u)
    hyperbola = 1.0 / ext.M_ab**2
    buckets = _enumerate_canonical_cells(u, eta, null_tol, hyperbola)
    items = sorted(buckets.items())
    if jobs > 1 and len(items) > 1:
        args = [(u.u, point, cells, cfg, eta, tau_exact, tau_class) for point, cells in items]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_bucket_worker, args))
    else:
        points = [
            _classify_cells(u, point[0], point[1], cells, cfg, eta, tau_exact, tau_class)
            for point, cells in items
        ]
    points.sort(key=lambda p: (p.n_a, p.n_b))
    diagram = Diagram(
        d=u.d,
        points=tuple(points),
        hyperbola_constant=hyperbola,
        edge=u.d + 1,
        n_min=min(p.n_a + p.n_b for p in points),
    )
    _validate_diagram(u, diagram)
    return diagram


def _validate_diagram(u: TransitionMatrix, diagram: Diagram) -> None:
    for p in diagram.points:
        if p.n_a * p.n_b < diagram.hyperbola_constant - 1e-9:
            raise InternalInconsistencyError(
                f"point ({p.n_a}, {p.n_b}) violates the product bound"
            )
    if is_stroinc(u):
        for p in diagram.points:
            if p.classification in (CLASSICAL, MIXED) and p.n_a + p.n_b > diagram.edge:
                raise InternalInconsistencyError(
                    f"classical witness above the edge at ({p.n_a}, {p.n_b})"
                )


def dft_min_states(d: int, p: int, q: int, m: int, s: int) -> StateVector:
    """Product-bound-saturating states of the DFT for a factorization d = p*q.

    The state is supported on the q indices ``{m, m+p, ..., m+(q-1)p}`` in the
    A basis with phases ``exp(2j*pi*s*k/q)``, has B-support of size p, and has
    unit total absolute KD mass.
    """
    if p <= 1 or q <= 1 or p * q != d:
        raise InvalidFactorizationError(f"need d = p*q with 1 < p, q < d, got d={d}, p={p}, q={q}")
    if not (0 <= m < p and 0 <= s < q):
        raise InvalidFactorizationError(f"need 0 <= m < p and 0 <= s < q, got m={m}, s={s}")
    amps = np.zeros(d, dtype=complex)
    ks = np.arange(q)
    amps[ks * p + m] = np.exp(2j * np.pi * s * ks / q) / sqrt(q)
    return StateVector(d, amps)


def mub4_edge_states(s: complex) -> tuple[StateVector, StateVector]:
    """The two equal-weight superpositions of B-basis vectors 0 and 2 of the
    4x4 MUB family: in A-coordinates ``(2, 0, 1+s, 1-s) / (2*sqrt(2))`` and
    ``(0, 2, 1-s, 1+s) / (2*sqrt(2))``.

    For s != +-1 they sit at support (3, 2); at s = +-1 the A-support
    degenerates, so those parameters are rejected.
    """
    s = complex(s)
    if abs(abs(s) - 1.0) > 1e-12:
        raise NotUnitModulusError(f"s must have unit modulus, got |s| = {abs(s)!r}")
    if abs(s - 1.0) <= 1e-12 or abs(s + 1.0) <= 1e-12:
        raise DegenerateParameterError("s = +-1 collapses the A-support of the edge states")
    scale = 1.0 / (2.0 * sqrt(2.0))
    plus = StateVector(4, scale * np.array([2.0, 0.0, 1.0 + s, 1.0 - s], dtype=complex))
    minus = StateVector(4, scale * np.array([0.0, 2.0, 1.0 - s, 1.0 + s], dtype=complex))
    return plus, minus


def dft6_two_support(k1: int, k2: int, i1: int) -> StateVector:
    """d = 6 DFT states supported on two B-basis vectors k1 < k2, with the
    relative phase chosen so that A-amplitude i1 vanishes:
    ``(w**(i1*k2) |b_k1> - w**(i1*k1) |b_k2>) / sqrt(2)``, w = exp(2j*pi/6)."""
    if not (0 <= k1 < k2 <= 5):
        raise IndexOutOfRangeError(f"need 0 <= k1 < k2 <= 5, got k1={k1}, k2={k2}")
    if not (0 <= i1 <= 5):
        raise IndexOutOfRangeError(f"need 0 <= i1 <= 5, got i1={i1}")
    from .bases import dft

    w = np.exp(2j * np.pi / 6)
    b_coords = np.zeros(6, dtype=complex)
    b_coords[k1] = w ** (i1 * k2) / sqrt(2.0)
    b_coords[k2] = -(w ** (i1 * k1)) / sqrt(2.0)
    return StateVector.from_b_coordinates(dft(6), b_coords)
