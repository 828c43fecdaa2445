"""C operator, CPT metric ``W = P C``, its square root and the Hermitian partner."""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .construct import PTParams2, check_pt_symmetry, classify2
from .errors import (BrokenOrExceptional, ComplexSpectrum, DegenerateSpectrum,
                     DimensionMismatch, GammaZero, InvalidWeight, MinusBranchSingular,
                     NotPTSymmetric, SingularEta)
from .linalg import DEFAULT_TOL, as_matrix, dagger, eigen_decompose, fro, hermitian_sqrt
from .parity import azimuthal_vector, parity_matrix, polar_vector
from .sun import build_basis, compose

# C blows up like u near an exceptional point; refuse below this relative gap
NEAR_EXCEPTIONAL = 1e-6


def _vectors(psi, phi, n):
    psi = np.asarray(psi, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    if psi.shape != (n,) or phi.shape != (n,):
        raise DimensionMismatch(f"expected vectors of length {n}, got {psi.shape} and {phi.shape}")
    return psi, phi


def pt_inner(psi, phi, parity) -> complex:
    """Indefinite PT inner product ``<psi|P|phi>``."""
    p = parity_matrix(parity)
    psi, phi = _vectors(psi, phi, p.shape[0])
    return complex(np.vdot(psi, p @ phi))


# -- 2x2 closed forms ------------------------------------------------------

def _unbroken2(p: PTParams2, tol):
    if p.gamma == 0:
        raise GammaZero("gamma = 0")
    phase = classify2(p, tol * max(1.0, p.gamma ** 2))
    if phase.label != "unbroken":
        raise BrokenOrExceptional(f"phase is {phase.label} (discriminant {phase.discriminant:.6g})")
    return np.sqrt(phase.discriminant)


def u_factor(p: PTParams2) -> float:
    """``u = sqrt(gamma^2 / (gamma^2 - mu^2 - nu^2))``."""
    return float(abs(p.gamma) / np.sqrt(p.discriminant()))


def beta_vector(p: PTParams2) -> np.ndarray:
    return (p.nu / p.gamma) * polar_vector(p.theta, p.phi) - (p.mu / p.gamma) * azimuthal_vector(p.theta, p.phi)


@dataclass(frozen=True, eq=False)
class ClosedForm2Spectrum:
    e_plus: float
    e_minus: float
    kappa0: float
    kappa_plus: float
    kappa_minus: float
    u: float
    states: np.ndarray  # columns |E+>, |E->


def spectrum2_closed(p: PTParams2, tol=DEFAULT_TOL) -> ClosedForm2Spectrum:
    """Energies and PT-normalized eigenstates of the 2x2 family in closed form.

    The states carry the prefactor ``sqrt(u / 2)`` so that
    ``<E+-|P|E+-> = +-sign(gamma)``.
    """
    root = _unbroken2(p, tol)
    g, m, n, t, f = p.gamma, p.mu, p.nu, p.theta, p.phi
    u = abs(g) / root
    kappa0 = float(np.angle(g * np.sin(t) + n + 1j * m * np.cos(t)))
    kappas = {}
    cols = []
    for s in (1, -1):
        kappas[s] = float(np.angle(-g * np.cos(t) + s * root + 1j * m * np.sin(t)))
        top = max(0.0, 1 + n / g * np.sin(t) + s * root / g * np.cos(t))
        bottom = max(0.0, 1 - n / g * np.sin(t) - s * root / g * np.cos(t))
        cols.append(np.sqrt(u / 2) * np.array([np.exp(1j * (kappa0 - f)) * np.sqrt(top),
                                               np.exp(1j * kappas[s]) * np.sqrt(bottom)]))
    return ClosedForm2Spectrum(p.epsilon + root, p.epsilon - root, kappa0,
                               kappas[1], kappas[-1], float(u), np.column_stack(cols))


def c_closed2(p: PTParams2, tol=DEFAULT_TOL) -> np.ndarray:
    """``C = (u / gamma) alpha . sigma``."""
    _unbroken2(p, tol)
    return compose(0.0, (u_factor(p) / p.gamma) * p.alpha(), build_basis(2))


def eta2_closed(w, u, sign=1) -> np.ndarray:
    """Two-branch square root ``(W +- 1) / sqrt(2 (u +- 1))`` of a 2x2 weight."""
    w = as_matrix(w)
    eye = np.eye(w.shape[0])
    if sign == 1:
        return (w + eye) / np.sqrt(2 * (u + 1))
    if sign == -1:
        if u - 1 <= 1e-12 * max(1.0, abs(u)):
            raise MinusBranchSingular(
                "u = 1 (Hermitian limit): eta_- tends to beta.sigma with beta = 0")
        return (w - eye) / np.sqrt(2 * (u - 1))
    raise ValueError(f"sign must be +1 or -1, got {sign!r}")


# -- general n -------------------------------------------------------------

def pt_normalized_states(h, parity, tol=DEFAULT_TOL):
    """Eigen-decompose a PT-symmetric ``h`` and scale states to PT-norm +-1.

    Returns ``(energies, states, norms)`` with real energies, states as
    columns and ``norms[i] = <E_i|P|E_i>`` in ``{+1, -1}``.
    """
    h = as_matrix(h)
    p = parity_matrix(parity)
    scale = max(1.0, fro(h))
    res = check_pt_symmetry(h, p)
    if res > tol * scale:
        raise NotPTSymmetric(f"|P h^dag P - h|_F = {res:.3e}")
    spec = eigen_decompose(h, tol)
    vals, vecs = spec.eigenvalues, spec.right_eigenvectors
    guard = NEAR_EXCEPTIONAL * scale
    n = len(vals)
    if n > 1:
        gap = np.abs(vals[:, None] - vals[None, :])[np.triu_indices(n, 1)].min()
        if gap < guard:
            raise DegenerateSpectrum(f"eigenvalue gap {gap:.3e} below {guard:.1e}")
    if np.max(np.abs(vals.imag)) > guard:
        raise ComplexSpectrum(f"max |Im E| = {np.max(np.abs(vals.imag)):.3e} (broken PT phase)")
    norms = np.einsum("ai,ab,bi->i", vecs.conj(), p, vecs).real
    if np.min(np.abs(norms)) < guard ** 2:
        raise DegenerateSpectrum("eigenstate with vanishing PT norm")
    states = vecs / np.sqrt(np.abs(norms))
    return vals.real, states, np.sign(norms)


def build_c(h, parity, tol=DEFAULT_TOL) -> np.ndarray:
    """``C = sum_i |E_i><E_i| P`` over PT-normalized eigenstates.

    Independent of the phases of the eigenstates.
    """
    _, states, _ = pt_normalized_states(h, parity, tol)
    return states @ dagger(states) @ parity_matrix(parity)


def weight(parity, c) -> np.ndarray:
    """CPT weight ``W = P C``."""
    p = parity_matrix(parity)
    c = as_matrix(c)
    if p.shape != c.shape:
        raise DimensionMismatch(f"parity is {p.shape}, C is {c.shape}")
    return p @ c


def weight_report(w, h=None) -> dict:
    """Hermiticity, smallest eigenvalue and (if *h* given) ``|W h - h^dag W|``."""
    w = as_matrix(w)
    out = {"hermiticity": fro(w - dagger(w)),
           "min_eigenvalue": float(np.linalg.eigvalsh(0.5 * (w + dagger(w)))[0])}
    if h is not None:
        h = as_matrix(h)
        out["self_adjointness"] = fro(w @ h - dagger(h) @ w)
    return out


def cpt_inner(psi, phi, w, tol=DEFAULT_TOL) -> complex:
    """Positive-definite CPT inner product ``<psi|W|phi>``."""
    w = as_matrix(w)
    rep = weight_report(w)
    scale = max(1.0, fro(w))
    if rep["hermiticity"] > tol * scale or rep["min_eigenvalue"] <= tol * scale:
        raise InvalidWeight(f"weight is not Hermitian positive definite "
                            f"(|W - W^dag| = {rep['hermiticity']:.3e}, min eig = {rep['min_eigenvalue']:.3e})")
    psi, phi = _vectors(psi, phi, w.shape[0])
    return complex(np.vdot(psi, w @ phi))


def bbj_bmw_inner(psi, phi, c, parity) -> complex:
    """Transpose-based inner product ``<psi|P^T C^T|phi>``."""
    p = parity_matrix(parity)
    c = as_matrix(c)
    if p.shape != c.shape:
        raise DimensionMismatch(f"parity is {p.shape}, C is {c.shape}")
    psi, phi = _vectors(psi, phi, p.shape[0])
    return complex(np.vdot(psi, p.T @ c.T @ phi))


def hermitian_equivalent(h_pt, eta, tol=DEFAULT_TOL) -> np.ndarray:
    """``h = eta H eta^-1``."""
    h_pt = as_matrix(h_pt)
    eta = as_matrix(eta)
    if h_pt.shape != eta.shape:
        raise DimensionMismatch(f"H is {h_pt.shape}, eta is {eta.shape}")
    smin = np.linalg.svd(eta, compute_uv=False)[-1]
    if smin <= tol:
        raise SingularEta(f"smallest singular value of eta is {smin:.3e}")
    return np.linalg.solve(eta.T, (eta @ h_pt).T).T


@dataclass(eq=False)
class CPTFrame:
    H: np.ndarray
    P: np.ndarray
    C: np.ndarray
    W: np.ndarray
    eta: np.ndarray
    h: np.ndarray
    energies: np.ndarray
    states: np.ndarray
    pt_norms: np.ndarray
    eta_plus: Optional[np.ndarray] = None
    eta_minus: Optional[np.ndarray] = None
    residuals: dict = field(default_factory=dict)

    def ok(self, tol=1e-9) -> bool:
        return all(v <= tol for v in self.residuals.values())

    def to_json(self) -> dict:
        from .io import matrix_to_json
        out = {"C": matrix_to_json(self.C), "W": matrix_to_json(self.W),
               "eta": matrix_to_json(self.eta), "h": matrix_to_json(self.h),
               "energies": [float(e) for e in self.energies],
               "pt_norms": [int(s) for s in self.pt_norms],
               "residuals": dict(self.residuals)}
        if self.eta_plus is not None:
            out["eta_plus"] = matrix_to_json(self.eta_plus)
        if self.eta_minus is not None:
            out["eta_minus"] = matrix_to_json(self.eta_minus)
        return out


def cpt_frame(h, parity, tol=DEFAULT_TOL) -> CPTFrame:
    """Build ``(C, W, eta, h)`` for an unbroken PT-symmetric ``h`` and record
    every structural identity as a Frobenius residual."""
    h = as_matrix(h)
    p = parity_matrix(parity)
    energies, states, norms = pt_normalized_states(h, p, tol)
    n = h.shape[0]
    eye = np.eye(n)
    c = states @ dagger(states) @ p
    w = p @ c
    eta = hermitian_sqrt(0.5 * (w + dagger(w)), tol)
    hh = hermitian_equivalent(h, eta, tol)
    gram = dagger(states) @ w @ states
    wrep = weight_report(w, h)
    res = {
        "C_involution": fro(c @ c - eye),
        "C_commutes_H": fro(c @ h - h @ c),
        "C_eigen_relation": float(np.linalg.norm(c @ states - states * norms, axis=0).max()),
        "PCdagP_minus_C": fro(p @ dagger(c) @ p - c),
        "W_hermiticity": wrep["hermiticity"],
        "W_positivity": max(0.0, -wrep["min_eigenvalue"]),
        "WH_minus_HdagW": wrep["self_adjointness"],
        "CPT_orthonormality": fro(gram - eye),
        "eta_squared_minus_W": fro(eta @ eta - w),
        "h_hermiticity": fro(hh - dagger(hh)),
        "spectrum_match": float(np.max(np.abs(np.sort(np.linalg.eigvalsh(0.5 * (hh + dagger(hh))))
                                              - np.sort(energies)))),
    }
    frame = CPTFrame(h, p, c, w, eta, hh, energies, states, norms, residuals=res)
    if n == 2:
        u = float(np.trace(w).real / 2)
        frame.eta_plus = eta2_closed(w, u, 1)
        res["eta_plus_squared_minus_W"] = fro(frame.eta_plus @ frame.eta_plus - w)
        # (W - 1) / sqrt(2(u - 1)) loses digits as u -> 1
        if u - 1 > 1e-6:
            frame.eta_minus = eta2_closed(w, u, -1)
            res["eta_minus_squared_minus_W"] = fro(frame.eta_minus @ frame.eta_minus - w)
    return frame
