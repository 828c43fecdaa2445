"""Nelder-Mead simplex descent run on many starting points at once.

Every start owns its own simplex; each iteration evaluates the reflection,
expansion, contraction and shrink candidates for all of them in a single
batched call and then picks per-start with masks.  This keeps a few hundred
restarts of a cheap low-dimensional objective fast in pure numpy.
"""
import numpy as np

ALPHA, GAMMA, RHO, SIGMA = 1.0, 2.0, 0.5, 0.5


def batched_nelder_mead(func, starts, step=0.3, maxiter=400, fatol=1e-30):
    """Minimize ``func`` from every row of *starts*.

    Parameters
    ----------
    func : callable
        Maps an array of points ``(k, d)`` to values ``(k,)``.
    starts : array_like, shape (r, d)
    step : float
        Edge length of the initial axis-aligned simplex.
    maxiter : int
        Iterations per start.
    fatol : float
        A start is frozen once its simplex values spread by less than this.

    Returns
    -------
    x : ndarray, shape (r, d)
        Best vertex of each simplex.
    fx : ndarray, shape (r,)
    """
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    r, d = starts.shape
    simplex = np.repeat(starts[:, None, :], d + 1, axis=1)
    simplex[:, 1:, :] += step * np.eye(d)[None]
    values = func(simplex.reshape(-1, d)).reshape(r, d + 1)
    active = np.ones(r, dtype=bool)

    for _ in range(maxiter):
        order = np.argsort(values, axis=1, kind="stable")
        simplex = np.take_along_axis(simplex, order[:, :, None], axis=1)
        values = np.take_along_axis(values, order, axis=1)
        active &= (values[:, -1] - values[:, 0]) > fatol
        if not active.any():
            break

        best, worst = simplex[:, 0], simplex[:, -1]
        f_best, f_second, f_worst = values[:, 0], values[:, -2], values[:, -1]
        centroid = simplex[:, :-1].mean(axis=1)
        xr = centroid + ALPHA * (centroid - worst)
        xe = centroid + GAMMA * (xr - centroid)
        xo = centroid + RHO * (xr - centroid)       # outside contraction
        xi = centroid + RHO * (worst - centroid)    # inside contraction
        shrunk = best[:, None, :] + SIGMA * (simplex[:, 1:] - best[:, None, :])

        batch = np.concatenate([xr, xe, xo, xi, shrunk.reshape(-1, d)])
        fb = func(batch)
        fr, fe, fo, fi = fb[:r], fb[r:2 * r], fb[2 * r:3 * r], fb[3 * r:4 * r]
        fs = fb[4 * r:].reshape(r, d)

        new_x = worst.copy()
        new_f = f_worst.copy()
        do_shrink = np.zeros(r, dtype=bool)

        expand = fr < f_best
        use_e = expand & (fe < fr)
        new_x[use_e], new_f[use_e] = xe[use_e], fe[use_e]
        use_r = (expand & ~use_e) | ((fr >= f_best) & (fr < f_second))
        new_x[use_r], new_f[use_r] = xr[use_r], fr[use_r]

        outside = (fr >= f_second) & (fr < f_worst)
        ok_o = outside & (fo <= fr)
        new_x[ok_o], new_f[ok_o] = xo[ok_o], fo[ok_o]
        inside = fr >= f_worst
        ok_i = inside & (fi < f_worst)
        new_x[ok_i], new_f[ok_i] = xi[ok_i], fi[ok_i]
        do_shrink |= (outside & ~ok_o) | (inside & ~ok_i)

        step_mask = active & ~do_shrink
        simplex[step_mask, -1] = new_x[step_mask]
        values[step_mask, -1] = new_f[step_mask]
        shrink_mask = active & do_shrink
        simplex[shrink_mask, 1:] = shrunk[shrink_mask]
        values[shrink_mask, 1:] = fs[shrink_mask]

    k = np.argmin(values, axis=1)
    return simplex[np.arange(r), k], values[np.arange(r), k]
