"""Batched Nelder-Mead simplex minimization.

Runs R independent simplex searches in lockstep so the objective can be
evaluated as one vectorized call per iteration.  Each search evolves exactly
as it would on its own (standard coefficients: reflection 1, expansion 2,
contraction 0.5, shrink 0.5); batching is purely a vectorization of the
bookkeeping.  Everything is deterministic in the starting points.
"""

from __future__ import annotations

import numpy as np

_NONZDELT = 0.05
_ZDELT = 0.00025


def initial_simplexes(x0: np.ndarray) -> np.ndarray:
    """Axis-step initial simplexes, one per row of ``x0``: shape (R, n+1, n)."""
    r, n = x0.shape
    simplex = np.repeat(x0[:, None, :], n + 1, axis=1)
    for i in range(n):
        col = simplex[:, i + 1, i]
        simplex[:, i + 1, i] = np.where(col != 0.0, col * (1.0 + _NONZDELT), _ZDELT)
    return simplex


def nelder_mead_batch(
    fn,
    x0: np.ndarray,
    max_iter: int = 2000,
    tol: float = 1e-10,
) -> tuple[np.ndarray, np.ndarray]:
    """Minimize ``fn`` from every row of ``x0`` (shape (R, n)).

    ``fn`` maps an (M, n) array to an (M,) array of values.  A search stops
    once the value spread over its simplex is at most ``tol * (1 + |best|)``
    or after ``max_iter`` iterations.  Returns ``(xbest, fbest)`` of shapes
    (R, n) and (R,).
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.ndim != 2:
        raise ValueError(f"x0 must have shape (restarts, n), got {x0.shape}")
    r, n = x0.shape
    simplex = initial_simplexes(x0)
    fv = np.asarray(fn(simplex.reshape(-1, n)), dtype=float).reshape(r, n + 1)
    order = np.argsort(fv, axis=1)
    simplex = np.take_along_axis(simplex, order[:, :, None], axis=1)
    fv = np.take_along_axis(fv, order, axis=1)

    for _ in range(max_iter):
        spread = fv[:, -1] - fv[:, 0]
        act = np.flatnonzero(spread > tol * (1.0 + np.abs(fv[:, 0])))
        if act.size == 0:
            break
        sx = simplex[act]
        sf = fv[act]
        centroid = sx[:, :-1, :].mean(axis=1)
        worst = sx[:, -1, :]
        x_refl = 2.0 * centroid - worst
        x_exp = 3.0 * centroid - 2.0 * worst
        x_out = 1.5 * centroid - 0.5 * worst
        x_in = 0.5 * centroid + 0.5 * worst
        cand = np.stack([x_refl, x_exp, x_out, x_in], axis=1)
        fc = np.asarray(fn(cand.reshape(-1, n)), dtype=float).reshape(-1, 4)
        f_refl, f_exp, f_out, f_in = fc[:, 0], fc[:, 1], fc[:, 2], fc[:, 3]
        f_best, f_second, f_worst = sf[:, 0], sf[:, -2], sf[:, -1]

        expand = f_refl < f_best
        use_exp = expand & (f_exp < f_refl)
        reflect = (f_refl >= f_best) & (f_refl < f_second)
        out_con = (f_refl >= f_second) & (f_refl < f_worst)
        ok_out = out_con & (f_out <= f_refl)
        in_con = f_refl >= f_worst
        ok_in = in_con & (f_in < f_worst)
        shrink = (out_con & ~ok_out) | (in_con & ~ok_in)

        new_x = np.where(use_exp[:, None], x_exp, x_refl)
        new_f = np.where(use_exp, f_exp, f_refl)
        new_x = np.where(ok_out[:, None], x_out, new_x)
        new_f = np.where(ok_out, f_out, new_f)
        new_x = np.where(ok_in[:, None], x_in, new_x)
        new_f = np.where(ok_in, f_in, new_f)

        accept = ~shrink
        sx[accept, -1, :] = new_x[accept]
        sf[accept, -1] = new_f[accept]
        if shrink.any():
            idx = np.flatnonzero(shrink)
            best_pt = sx[idx, 0:1, :]
            shrunk = best_pt + 0.5 * (sx[idx, 1:, :] - best_pt)
            sx[idx, 1:, :] = shrunk
            sf[idx, 1:] = np.asarray(fn(shrunk.reshape(-1, n)), dtype=float).reshape(len(idx), n)

        order = np.argsort(sf, axis=1)
        simplex[act] = np.take_along_axis(sx, order[:, :, None], axis=1)
        fv[act] = np.take_along_axis(sf, order, axis=1)

    return simplex[:, 0, :], fv[:, 0]
