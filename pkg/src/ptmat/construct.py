"""PT-symmetric Hamiltonians from the M-matrix eigenproblem.

Writing ``H = eps * 1 + sum_i alpha_i l_i`` the condition ``P H^dag P = H``
becomes ``sum_i M_ki alpha_i = conj(alpha_k)`` with a real symmetric
involution ``M``.  Real parts of ``alpha`` live in the +1 eigenspace of
``M``, imaginary parts in the -1 eigenspace.
"""
from dataclasses import asdict, dataclass
from typing import NamedTuple, Tuple

import numpy as np

from .errors import (Broken, CoefficientNotInEigenspace, DegenerateParameterPoint,
                     DimensionMismatch, ExceptionalPoint, SpectrumNotPlusMinusOne,
                     WrongParityKind)
from .linalg import DEFAULT_TOL, as_matrix, dagger, fro
from .parity import (SQRT3, ParityCoefficients3, ParityDescriptor, azimuthal_vector,
                     parity2, parity3, parity3_coeffs, parity3_matrix, parity_matrix,
                     polar_vector, radial_vector)
from .sun import BasisSet, build_basis, compose, expand


# -- parameter records -----------------------------------------------------

@dataclass(frozen=True)
class PTParams2:
    epsilon: float = 0.0
    gamma: float = 0.0
    mu: float = 0.0
    nu: float = 0.0
    theta: float = 0.0
    phi: float = 0.0

    n = 2

    def parity(self) -> ParityDescriptor:
        return parity2(self.theta, self.phi)

    def alpha(self) -> np.ndarray:
        """Pauli coefficients ``gamma n^r + i mu n^theta + i nu n^phi``."""
        return (self.gamma * radial_vector(self.theta, self.phi)
                + 1j * self.mu * polar_vector(self.theta, self.phi)
                + 1j * self.nu * azimuthal_vector(self.theta, self.phi))

    def discriminant(self) -> float:
        return self.gamma ** 2 - self.mu ** 2 - self.nu ** 2

    def to_dict(self) -> dict:
        return {k: float(v) for k, v in asdict(self).items()}


@dataclass(frozen=True)
class PTParams3:
    epsilon: float = 0.0
    gammas: Tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    mus: Tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    chi: float = 0.0
    theta: float = 0.0
    rho: float = 0.0
    phi: float = 0.0

    n = 3

    def __post_init__(self):
        if len(self.gammas) != 4 or len(self.mus) != 4:
            raise ValueError("PTParams3 needs four gammas and four mus")
        if not np.all(np.isfinite(np.r_[self.epsilon, self.gammas, self.mus,
                                        self.chi, self.theta, self.rho, self.phi])):
            raise ValueError("PTParams3 entries must be finite")

    def parity(self, sign=1) -> ParityDescriptor:
        return parity3(self.chi, self.theta, self.rho, self.phi, sign)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gammas"] = [float(x) for x in self.gammas]
        d["mus"] = [float(x) for x in self.mus]
        return d


# -- M-matrix --------------------------------------------------------------

def m_matrix2(parity: ParityDescriptor) -> np.ndarray:
    """``M_ki = -delta_ki + 2 n_k n_i`` for a parametrized 2x2 parity."""
    if not isinstance(parity, ParityDescriptor) or parity.kind != "parametrized2":
        raise WrongParityKind("m_matrix2 needs a parametrized2 parity")
    nr = parity.unit_vector()
    return -np.eye(3) + 2 * np.outer(nr, nr)


def m_matrix3(coeffs: ParityCoefficients3, basis: BasisSet = None) -> np.ndarray:
    """M-matrix assembled from the SU(3) structure constants."""
    basis = basis or build_basis(3)
    if basis.n != 3:
        raise DimensionMismatch(f"m_matrix3 needs the n=3 basis, got n={basis.n}")
    p0, p = coeffs.p0, np.asarray(coeffs.p, dtype=float)
    d, f = basis.d, basis.f
    m = p0 * p0 * np.eye(8)
    m += 2 * p0 * np.einsum("j,ijk->ki", p, d)
    m += (2.0 / 3.0) * np.outer(p, p)
    dp = np.einsum("j,ijl->il", p, d)
    fp = np.einsum("j,ijl->il", p, f)
    dq = np.einsum("m,lmk->lk", p, d)
    fq = np.einsum("m,lmk->lk", p, f)
    m += (dp @ dq + fp @ fq).T
    return m


def m_matrix_oracle(parity, basis: BasisSet) -> np.ndarray:
    """``M_ki = Tr(l_k P l_i P) / 2`` for any dimension."""
    p = parity_matrix(parity)
    if p.shape[0] != basis.n:
        raise DimensionMismatch(f"parity is {p.shape[0]}x{p.shape[0]}, basis is for n={basis.n}")
    lam = basis.generators
    conj = np.einsum("ab,ibc,cd->iad", p, lam, p)
    return 0.5 * np.einsum("kab,iba->ki", lam, conj).real


class EigenbasisSplit(NamedTuple):
    plus: np.ndarray   # rows: orthonormal +1 eigenvectors
    minus: np.ndarray  # rows: orthonormal -1 eigenvectors


def _seeded_gram_schmidt(projector, threshold=1e-8):
    dim = projector.shape[0]
    out = []
    for k in range(dim):
        v = projector[:, k].copy()
        for _ in range(2):
            for q in out:
                v -= (q @ v) * q
        nv = np.linalg.norm(v)
        if nv > threshold:
            out.append(v / nv)
    return np.array(out).reshape(len(out), dim)


def split_eigenspaces(m, tol=DEFAULT_TOL) -> EigenbasisSplit:
    """Orthonormal bases of the +1 and -1 eigenspaces of an involution ``M``.

    Columns of the projectors ``(1 +- M) / 2`` (i.e. projections of the
    standard basis) are orthonormalized in index order, so the result is
    reproducible.
    """
    m = np.asarray(m, dtype=float)
    dim = m.shape[0]
    scale = max(1.0, float(np.linalg.norm(m)))
    if np.linalg.norm(m - m.T) > tol * scale or np.linalg.norm(m @ m - np.eye(dim)) > 1e3 * tol * scale:
        raise SpectrumNotPlusMinusOne("M is not a symmetric involution")
    plus = _seeded_gram_schmidt(0.5 * (np.eye(dim) + m))
    minus = _seeded_gram_schmidt(0.5 * (np.eye(dim) - m))
    if len(plus) + len(minus) != dim:
        raise SpectrumNotPlusMinusOne(
            f"eigenspace dimensions {len(plus)} + {len(minus)} do not add up to {dim}")
    return EigenbasisSplit(plus, minus)


def basis_vectors_3(chi, theta, rho, phi, allow_degenerate=False):
    """Closed-form orthonormal +1 / -1 eigenvectors of the 3x3 M-matrix.

    Returns ``(A, B)``, each of shape ``(4, 8)``.  ``A[0]`` is
    ``(sqrt(3)/2) P_i``; ``A[1]`` is ``P''_i / 2 + 3 P_i / 2`` (derivatives in
    chi); the rest follow the explicit component lists.  On the
    ``cos 2chi < 0`` branch everything is evaluated at ``pi/2 - chi``, matching
    :func:`ptmat.parity.parity3_coeffs`.

    Raises ``DegenerateParameterPoint`` when ``|sin 2chi| < 1e-8`` unless
    *allow_degenerate* is set; the vectors stay finite there, but that point is
    outside the derivative construction.
    """
    if abs(np.sin(2 * chi)) < 1e-8 and not allow_degenerate:
        raise DegenerateParameterPoint(f"sin(2 chi) = {np.sin(2 * chi):.3e}")
    if np.cos(2 * chi) < 0:
        chi = np.pi / 2 - chi
    sx, cx = np.sin(chi), np.cos(chi)
    s2x, c2x = np.sin(2 * chi), np.cos(2 * chi)
    st, ct = np.sin(theta), np.cos(theta)
    s2t, c2t = np.sin(2 * theta), np.cos(2 * theta)
    cd, sd = np.cos(rho - phi), np.sin(rho - phi)
    cf, sf, cr, sr = np.cos(phi), np.sin(phi), np.cos(rho), np.sin(rho)

    p = parity3_coeffs(chi, theta, rho, phi).p
    k = (3 + c2x) / 2
    a = np.array([
        SQRT3 / 2 * p,
        0.5 * np.array([-k * s2t * cd, k * s2t * sd, k * c2t,
                        -s2x * st * cf, -s2x * st * sf, -s2x * ct * cr, -s2x * ct * sr,
                        SQRT3 * sx * sx]),
        [-cx * c2t * cd, cx * c2t * sd, -cx * s2t,
         -sx * ct * cf, -sx * ct * sf, sx * st * cr, sx * st * sr, 0.0],
        [cx * sd, cx * cd, 0.0,
         -sx * ct * sf, sx * ct * cf, sx * st * sr, -sx * st * cr, 0.0],
    ])
    b = np.array([
        0.5 * np.array([-s2x * s2t * cd, s2x * s2t * sd, s2x * c2t,
                        2 * c2x * st * cf, 2 * c2x * st * sf, 2 * c2x * ct * cr, 2 * c2x * ct * sr,
                        -SQRT3 * s2x]),
        [-sx * c2t * cd, sx * c2t * sd, -sx * s2t,
         cx * ct * cf, cx * ct * sf, -cx * st * cr, -cx * st * sr, 0.0],
        [0.0, 0.0, 0.0, -st * sf, st * cf, -ct * sr, ct * cr, 0.0],
        [sx * sd, sx * cd, 0.0,
         cx * ct * sf, -cx * ct * cf, -cx * st * sr, cx * st * cr, 0.0],
    ])
    return a, b


# -- Hamiltonians ----------------------------------------------------------

def build_h2(p: PTParams2) -> np.ndarray:
    """General 2x2 PT-symmetric Hamiltonian ``eps + alpha . sigma``."""
    return compose(p.epsilon, p.alpha(), build_basis(2))


def build_h3(p: PTParams3, basis: BasisSet = None, allow_degenerate=False) -> np.ndarray:
    basis = basis or build_basis(3)
    a, b = basis_vectors_3(p.chi, p.theta, p.rho, p.phi, allow_degenerate)
    alpha = np.asarray(p.gammas) @ a + 1j * (np.asarray(p.mus) @ b)
    return compose(p.epsilon, alpha, basis)


def build_hN(epsilon, a, b, basis: BasisSet, parity=None, tol=DEFAULT_TOL) -> np.ndarray:
    """``eps * 1 + sum_i (a_i + i b_i) l_i``.

    If *parity* is given, ``a`` must lie in the +1 eigenspace and ``b`` in
    the -1 eigenspace of its M-matrix.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if parity is not None:
        m = m_matrix_oracle(parity, basis)
        scale = max(1.0, np.linalg.norm(a) + np.linalg.norm(b))
        ra = np.linalg.norm(m @ a - a) / 2
        rb = np.linalg.norm(m @ b + b) / 2
        if ra > tol * scale:
            raise CoefficientNotInEigenspace(f"real part leaves the +1 eigenspace by {ra:.3e}")
        if rb > tol * scale:
            raise CoefficientNotInEigenspace(f"imaginary part leaves the -1 eigenspace by {rb:.3e}")
    return compose(float(epsilon), a + 1j * b, basis)


def check_pt_symmetry(h, parity) -> float:
    """Frobenius residual ``|P h^dag P - h|``."""
    h = as_matrix(h)
    p = parity_matrix(parity)
    if p.shape != h.shape:
        raise DimensionMismatch(f"h is {h.shape}, parity is {p.shape}")
    return fro(p @ dagger(h) @ p - h)


class PhaseClass(NamedTuple):
    label: str  # unbroken | broken | exceptional
    discriminant: float


def classify2(p: PTParams2, tol=DEFAULT_TOL) -> PhaseClass:
    disc = p.discriminant()
    if disc > tol:
        return PhaseClass("unbroken", disc)
    if disc < -tol:
        return PhaseClass("broken", disc)
    return PhaseClass("exceptional", disc)


def fit_pt2(h, tol=DEFAULT_TOL):
    """Recover ``(PTParams2, parity)`` from a 2x2 matrix with real spectrum.

    Gauge: ``gamma >= 0``, ``theta in [0, pi]``, ``phi = 0`` whenever
    ``sin(theta) = 0`` and ``theta = phi = 0`` for scalar matrices.

    Raises
    ------
    Broken
        Complex spectrum (``Im eps != 0``, ``A.B != 0`` or ``|A| < |B|``).
    ExceptionalPoint
        ``|A| = |B| > 0``: real but defective spectrum.
    """
    h = as_matrix(h)
    if h.shape != (2, 2):
        raise DimensionMismatch(f"fit_pt2 needs a 2x2 matrix, got {h.shape}")
    c0, alpha = expand(h, build_basis(2))
    scale = max(1.0, fro(h))
    a, b = alpha.real, alpha.imag
    aa, bb, ab = a @ a, b @ b, a @ b
    size = max(aa + bb, np.finfo(float).tiny)
    if abs(c0.imag) > tol * scale:
        raise Broken(f"energy offset is not real (Im = {c0.imag:.3e})")
    if np.sqrt(bb) > tol * scale:
        if abs(ab) > tol * size:
            raise Broken(f"real and imaginary coefficient vectors are not orthogonal (A.B = {ab:.3e})")
        if aa - bb < -tol * size:
            raise Broken("imaginary coefficient vector is longer than the real one")
        if aa - bb <= tol * size:
            raise ExceptionalPoint("|A| = |B|: exceptional point, spectrum is defective")

    gamma = float(np.sqrt(aa))
    if gamma > 0:
        nr = a / gamma
        theta = float(np.arctan2(np.hypot(nr[0], nr[1]), nr[2]))
        phi = float(np.arctan2(nr[1], nr[0])) if np.hypot(nr[0], nr[1]) > 1e-15 else 0.0
    else:
        theta = phi = 0.0
    mu = float(b @ polar_vector(theta, phi))
    nu = float(b @ azimuthal_vector(theta, phi))
    params = PTParams2(float(c0.real), gamma, mu, nu, theta, phi)
    return params, params.parity()


# -- parameter counting ----------------------------------------------------

def _jacobian_rank(func, x0, step=1e-6, rel_tol=1e-6):
    x0 = np.asarray(x0, dtype=float)
    cols = []
    for k in range(len(x0)):
        dx = np.zeros_like(x0)
        dx[k] = step
        d = (func(x0 + dx) - func(x0 - dx)) / (2 * step)
        cols.append(np.r_[d.real.ravel(), d.imag.ravel()])
    sv = np.linalg.svd(np.array(cols).T, compute_uv=False)
    return int(np.sum(sv > rel_tol * sv[0]))


def parity_parameter_count(n, rng=None) -> int:
    """Local dimension of the nontrivial parity family, from a numerical Jacobian rank."""
    rng = np.random.default_rng(rng)
    if n == 2:
        x0 = rng.uniform(0.3, 1.2, 2)
        return _jacobian_rank(lambda x: parity2(*x).matrix, x0)
    if n == 3:
        x0 = rng.uniform(0.2, 0.6, 4)
        return _jacobian_rank(lambda x: parity3_matrix(*x), x0)
    raise ValueError("explicit parity families exist for n = 2 and n = 3 only")


def solution_space_dimension(n, rng=None) -> dict:
    """Real parameter count ``1 + dim(+1) + dim(-1) + parity parameters``."""
    rng = np.random.default_rng(rng)
    basis = build_basis(n)
    if n == 2:
        par = parity2(*rng.uniform(0.3, 1.2, 2))
        m = m_matrix2(par)
    else:
        par = parity3(*rng.uniform(0.2, 0.6, 4))
        m = m_matrix3(parity3_coeffs(*(par.params[k] for k in ("chi", "theta", "rho", "phi"))), basis)
    split = split_eigenspaces(m)
    count = parity_parameter_count(n, rng)
    return {"plus": len(split.plus), "minus": len(split.minus), "parity": count,
            "total": 1 + len(split.plus) + len(split.minus) + count}
