"""Small dense complex linear algebra.

Matrices are plain ``numpy`` complex arrays of shape ``(n, n)``.  For
``n <= 3`` eigenvalues come from the characteristic polynomial in closed
form (quadratic formula, Cardano) followed by inverse iteration for the
eigenvectors; larger matrices go through LAPACK's shifted-QR driver.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (DimensionOutOfRange, MatrixFormatError, NonConvergence,
                     NotHermitian, NotPositiveDefinite)

DEFAULT_TOL = 1e-10
MAX_DIM = 8

_EPS = np.finfo(float).eps


def as_matrix(m) -> np.ndarray:
    """Coerce *m* to a finite square complex128 array."""
    try:
        a = np.asarray(m, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"not a numeric matrix: {exc}") from exc
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise MatrixFormatError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise MatrixFormatError("matrix has non-finite entries")
    return a


def fro(m) -> float:
    return float(np.linalg.norm(m))


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(m)).T


class Residuals(NamedTuple):
    hermiticity: float
    involution: float


def residuals(m) -> Residuals:
    """Frobenius norms of ``m - m^dag`` and ``m^2 - 1``."""
    m = as_matrix(m)
    eye = np.eye(m.shape[0])
    return Residuals(fro(m - dagger(m)), fro(m @ m - eye))


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray         # shape (n,), sorted by (real, imag)
    right_eigenvectors: np.ndarray  # columns, unit norm
    is_degenerate: bool
    condition_estimate: float

    def __iter__(self):
        return iter((self.eigenvalues, self.right_eigenvectors))


def _quadratic_roots(m):
    half_sum = 0.5 * (m[0, 0] + m[1, 1])
    half_diff = 0.5 * (m[0, 0] - m[1, 1])
    disc = np.sqrt(half_diff * half_diff + m[0, 1] * m[1, 0])
    return np.array([half_sum - disc, half_sum + disc])


def _cubic_roots(m):
    shift = np.trace(m) / 3.0
    b = m - shift * np.eye(3)
    # depressed characteristic polynomial x^3 + p x + q
    p = -0.5 * np.trace(b @ b)
    q = -(b[0, 0] * (b[1, 1] * b[2, 2] - b[1, 2] * b[2, 1])
          - b[0, 1] * (b[1, 0] * b[2, 2] - b[1, 2] * b[2, 0])
          + b[0, 2] * (b[1, 0] * b[2, 1] - b[1, 1] * b[2, 0]))
    s = np.sqrt((0.5 * q) ** 2 + (p / 3.0) ** 3)
    w = -0.5 * q + s
    if abs(-0.5 * q - s) > abs(w):
        w = -0.5 * q - s
    if w == 0:
        roots = np.zeros(3, dtype=complex)
    else:
        c = w ** (1.0 / 3.0)
        omega = np.exp(2j * np.pi / 3.0)
        cs = c * omega ** np.arange(3)
        roots = cs - p / (3.0 * cs)

    def f(x):
        return (x * x + p) * x + q

    # Newton polish, only accepting steps that shrink |f|
    for k in range(3):
        x = roots[k]
        fx = f(x)
        for _ in range(4):
            d = 3.0 * x * x + p
            if fx == 0 or d == 0:
                break
            y = x - fx / d
            fy = f(y)
            if abs(fy) >= abs(fx):
                break
            x, fx = y, fy
        roots[k] = x
    return roots + shift


def _start_vector(n, k):
    v = np.exp(1j * np.arange(1, n + 1) * (0.7 + k)) * (1.0 + 0.1 * np.arange(n))
    return v / np.linalg.norm(v)


def _inverse_iteration(m, vals, scale):
    n = m.shape[0]
    eye = np.eye(n)
    vecs = np.empty((n, n), dtype=complex)
    cluster_tol = 1e-8 * scale
    for k, lam in enumerate(vals):
        earlier = [vecs[:, j] for j in range(k) if abs(vals[j] - lam) <= cluster_tol]
        shift = lam + 16 * _EPS * scale * (1 + 1j)
        a = m - shift * eye
        candidates = []
        for orthogonalize in (True, False) if earlier else (False,):
            x = _start_vector(n, len(earlier))
            for _ in range(2):  # initial solve + one refinement pass
                try:
                    x = np.linalg.solve(a, x)
                except np.linalg.LinAlgError:
                    x = np.linalg.solve(a + 1e3 * _EPS * scale * eye, x)
                if orthogonalize:
                    for e in earlier:
                        x = x - np.vdot(e, x) * e
                nx = np.linalg.norm(x)
                if nx == 0 or not np.isfinite(nx):
                    x = _start_vector(n, k + 1)
                    continue
                x = x / nx
            candidates.append((np.linalg.norm(m @ x - lam * x), x))
            if candidates[-1][0] <= 1e-12 * scale:
                break
        vecs[:, k] = min(candidates, key=lambda t: t[0])[1]
    return vecs


def _rayleigh_refine(m, vals, vecs):
    """Replace each root by ``v^dag m v / v^dag v`` when that shrinks the residual.

    Multiple roots of the characteristic polynomial are only accurate to
    about ``sqrt(eps)``; the inverse-iteration vectors are much better, so
    the quotient recovers full precision.
    """
    out = vals.astype(complex)
    for k in range(len(vals)):
        v = vecs[:, k]
        mv = m @ v
        rq = np.vdot(v, mv) / np.vdot(v, v)
        if np.linalg.norm(mv - rq * v) < np.linalg.norm(mv - vals[k] * v):
            out[k] = rq
    return out


def _fix_phase(v):
    k = int(np.argmax(np.abs(v)))
    a = v[k]
    return v * (np.conj(a) / abs(a)) if a != 0 else v


def eigenvalues(m, max_dim=MAX_DIM) -> np.ndarray:
    """Eigenvalues only, sorted like :func:`eigen_decompose`.

    Skips the eigenvector-based refinement, so a repeated eigenvalue of a
    2x2 or 3x3 matrix is only good to about ``sqrt(eps) * |m|``.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if n > max_dim:
        raise DimensionOutOfRange(f"n={n} exceeds max_dim={max_dim}")
    if n == 1:
        vals = m[0].copy()
    elif n == 2:
        vals = _quadratic_roots(m)
    elif n == 3:
        vals = _cubic_roots(m)
    else:
        try:
            vals = np.linalg.eigvals(m)
        except np.linalg.LinAlgError as exc:
            raise NonConvergence(f"eigensolver did not converge: {exc}") from exc
    scale = max(1.0, fro(m))
    return vals[np.lexsort((vals.imag, np.round(vals.real / scale, 10)))]


def eigen_decompose(m, tol=DEFAULT_TOL, max_dim=MAX_DIM) -> Spectrum:
    """Eigenvalues and unit right eigenvectors of a small complex matrix.

    Parameters
    ----------
    m : array_like
        Square matrix with ``n <= max_dim``.
    tol : float
        Relative tolerance; eigenvalues closer than ``tol * max(1, |m|_F)``
        flag the spectrum as degenerate.

    Returns
    -------
    Spectrum
        Eigenvalues sorted by real then imaginary part.  Each eigenvector has
        unit Euclidean norm and its largest-modulus entry is real positive.

    Raises
    ------
    DimensionOutOfRange
        If ``n > max_dim``.
    NonConvergence
        If the iterative path (``n >= 4``) fails.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if n > max_dim:
        raise DimensionOutOfRange(f"n={n} exceeds max_dim={max_dim}")
    scale = max(1.0, fro(m))

    if n == 1:
        vals, vecs = m[0].copy(), np.ones((1, 1), dtype=complex)
    elif n <= 3:
        vals = _quadratic_roots(m) if n == 2 else _cubic_roots(m)
        vecs = _inverse_iteration(m, vals, scale)
        vals = _rayleigh_refine(m, vals, vecs)
    else:
        try:
            vals, vecs = np.linalg.eig(m)
        except np.linalg.LinAlgError as exc:
            raise NonConvergence(f"eigensolver did not converge: {exc}") from exc
        if not np.all(np.isfinite(vals)):
            raise NonConvergence("eigensolver returned non-finite values")
        # LAPACK can return a wrong vector (right value) on badly scaled input
        res = np.linalg.norm(m @ vecs - vecs * vals, axis=0)
        bad = res > 1e3 * n * _EPS * scale
        if bad.any():
            redo = _inverse_iteration(m, vals, scale)
            redo_res = np.linalg.norm(m @ redo - redo * vals, axis=0)
            swap = bad & (redo_res < res)
            vecs[:, swap] = redo[:, swap]

    # bucket the real part so that rounding noise cannot reorder conjugate pairs
    order = np.lexsort((vals.imag, np.round(vals.real / scale, 10)))
    vals = vals[order]
    vecs = np.column_stack([_fix_phase(vecs[:, k] / np.linalg.norm(vecs[:, k]))
                            for k in order])

    if n > 1:
        gaps = np.abs(vals[:, None] - vals[None, :])[np.triu_indices(n, 1)]
        degenerate = bool(gaps.min() < tol * scale)
    else:
        degenerate = False
    with np.errstate(all="ignore"):
        cond = float(np.linalg.cond(vecs))
    if not np.isfinite(cond):
        cond = float("inf")
    return Spectrum(vals, vecs, degenerate, cond)


def hermitian_sqrt(w, tol=DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a Hermitian positive-definite matrix."""
    w = as_matrix(w)
    scale = max(1.0, fro(w))
    herm = fro(w - dagger(w))
    if herm > tol * scale:
        raise NotHermitian(f"|w - w^dag|_F = {herm:.3e}")
    vals, vecs = np.linalg.eigh(0.5 * (w + dagger(w)))
    if vals[0] <= tol * scale:
        raise NotPositiveDefinite(f"eigenvalue {vals[0]:.6g} is not positive",
                                  eigenvalue=float(vals[0]))
    eta = (vecs * np.sqrt(vals)) @ dagger(vecs)
    return 0.5 * (eta + dagger(eta))
