"""Numerical search for a 3x3 parity making a given matrix PT-symmetric.

A Nelder-Mead descent runs from every start of a scrambled Halton sequence
at once (see ``simplex``). The best few candidates then get a
Levenberg-Marquardt polish. A small residual certifies PT symmetry and can
be re-checked independently with ``check_pt_symmetry``. A large residual
proves nothing.

The search uses the reflections ``1 - 2 v v^dag`` with
``v = (-sin chi sin theta e^{-i phi}, -sin chi cos theta e^{-i rho}, cos chi)``.
For ``cos 2chi >= 0`` this is exactly ``parity3(chi, theta, rho, phi)``.
The other half of the angle range gives reflections with ``|v_3|^2 < 1/2``.
The folded ``parity3`` family never reaches those, so the search reports
them as explicit-matrix parities.
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares
from scipy.stats import qmc

from .errors import DimensionMismatch
from .linalg import as_matrix, dagger, fro
from .parity import ParityDescriptor, parity3, parity_from_matrix, parity_trivial
from .simplex import batched_nelder_mead

SEARCH_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SearchResult:
    parity: ParityDescriptor
    residual: float
    certified: bool
    restart: int        # index of the winning start, -1 for a trivial parity
    restarts: int
    angles: tuple = ()  # (chi, theta, rho, phi) of the reflection, if any

    def to_json(self) -> dict:
        return {"parity": self.parity.to_json(), "residual": self.residual,
                "certified": self.certified, "restart": self.restart,
                "restarts": self.restarts, "angles": list(self.angles)}


def reflection_batch(x):
    """Reflections ``1 - 2 v v^dag`` for angle rows ``x`` of shape (k, 4)."""
    x = np.atleast_2d(x)
    chi, theta, rho, phi = x.T
    sc = np.sin(chi)
    v = np.stack([-sc * np.sin(theta) * np.exp(-1j * phi),
                  -sc * np.cos(theta) * np.exp(-1j * rho),
                  np.cos(chi) + 0j], axis=-1)
    return np.eye(3) - 2 * v[:, :, None] * v.conj()[:, None, :]


def _residual_batch(x, h, hd):
    p = reflection_batch(x)
    return p @ hd @ p - h


def _residual_vector(x, h, hd):
    r = _residual_batch(x, h, hd)[0].ravel()
    return np.concatenate([r.real, r.imag])


def search_parity3(h, restarts=50, tol=SEARCH_TOL, seed=0, maxiter=400, polish=3) -> SearchResult:
    """Best 3x3 reflection parity (or trivial parity) for ``P h^dag P = h``.

    The residual does not change under ``P -> -P``, so only one overall
    sign is searched. Ties go to the lowest restart index. The trivial
    parity wins only on a strictly smaller residual.
    """
    h = as_matrix(h)
    if h.shape != (3, 3):
        raise DimensionMismatch(f"search_parity3 needs a 3x3 matrix, got {h.shape}")
    if restarts < 1:
        raise ValueError("restarts must be positive")
    hd = dagger(h)

    def objective(xs):
        r = _residual_batch(xs, h, hd)
        return np.einsum("kij,kij->k", r.real, r.real) + np.einsum("kij,kij->k", r.imag, r.imag)

    starts = 2 * np.pi * qmc.Halton(d=4, scramble=True, rng=seed).random(restarts)
    xs, fs = batched_nelder_mead(objective, starts, maxiter=maxiter)
    order = np.lexsort((np.arange(restarts), fs))

    best_res, best_idx, best_x = np.inf, -1, None
    for i in order[:polish]:
        ls = least_squares(_residual_vector, xs[i], args=(h, hd), method="lm",
                           xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
        for cand in (ls.x, xs[i]):
            r = float(np.linalg.norm(_residual_vector(cand, h, hd)))
            if r < best_res or (r == best_res and i < best_idx):
                best_res, best_idx, best_x = r, int(i), cand

    chi, theta, rho, phi = (float(a) for a in best_x)
    if np.cos(2 * chi) >= 0:
        parity = parity3(chi, theta, rho, phi, sign=1)
    else:
        parity = parity_from_matrix(reflection_batch(best_x)[0])
    angles = (chi, theta, rho, phi)
    trivial_res = fro(hd - h)
    if trivial_res < best_res:
        parity, best_res, best_idx, angles = parity_trivial(3, 1), trivial_res, -1, ()
    return SearchResult(parity, best_res, best_res <= tol, best_idx, restarts, angles)
