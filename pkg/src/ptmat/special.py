"""Named 2x2 reductions of the general family and maps from external parametrizations."""
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .construct import PTParams2, build_h2, fit_pt2
from .errors import DegeneratePoint, ExceptionalOrBroken, MapSingular
from .linalg import DEFAULT_TOL, fro


@dataclass(frozen=True, eq=False)
class ParameterMapRecord:
    source_params: dict
    target: PTParams2
    caveats: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        src = {k: ({"re": v.real, "im": v.imag} if isinstance(v, complex) else v)
               for k, v in self.source_params.items()}
        return {"source_params": src, "target": self.target.to_dict(),
                "caveats": list(self.caveats)}


def hermitian_case(epsilon, gamma, theta, phi) -> np.ndarray:
    """``eps + gamma n^r . sigma``: every 2x2 Hermitian matrix, with ``C = P`` and ``W = 1``."""
    return build_h2(PTParams2(epsilon, gamma, 0.0, 0.0, theta, phi))


def _c_prefactor(gamma, mu):
    if gamma ** 2 <= mu ** 2:
        raise ExceptionalOrBroken(f"need gamma^2 > mu^2, got gamma={gamma}, mu={mu}")
    return np.sqrt(gamma ** 2 / (gamma ** 2 - mu ** 2))


def bbj_case(epsilon, gamma, mu):
    """Symmetric ``(H, C)`` pair with parity ``sigma_x``."""
    h = np.array([[epsilon - 1j * mu, gamma],
                  [gamma, epsilon + 1j * mu]], dtype=complex)
    r = mu / gamma if gamma else 0.0
    c = _c_prefactor(gamma, mu) * np.array([[-1j * r, 1], [1, 1j * r]])
    return h, c


def bmw_case(epsilon, gamma, mu, theta):
    """Symmetric ``(H, C)`` pair with the real parity ``[[cos, sin], [sin, -cos]]``."""
    ct, st = np.cos(theta), np.sin(theta)
    off = gamma * st + 1j * mu * ct
    h = np.array([[epsilon + gamma * ct - 1j * mu * st, off],
                  [off, epsilon - gamma * ct + 1j * mu * st]], dtype=complex)
    r = mu / gamma if gamma else 0.0
    coff = st + 1j * r * ct
    c = _c_prefactor(gamma, mu) * np.array([[ct - 1j * r * st, coff],
                                             [coff, -ct + 1j * r * st]])
    return h, c


def pt_eigenstate_phase(v, parity) -> np.ndarray:
    """Rephase *v* so that ``P conj(v) = v``.

    Only possible when ``P conj(v)`` is parallel to ``v``, as for the
    eigenstates of a symmetric Hamiltonian with a real parity.
    """
    v = np.asarray(v, dtype=complex)
    p = np.asarray(parity, dtype=complex)
    overlap = np.vdot(v, p @ v.conj()) / np.vdot(v, v)
    return v * np.exp(0.5j * np.angle(overlap))


def mostafazadeh_matrix(r, s, t, u, phi_ext) -> np.ndarray:
    c, sn = np.cos(phi_ext), np.sin(phi_ext)
    return np.array([[r + t * c - 1j * s * sn, t * sn + 1j * (s * c - u)],
                     [t * sn + 1j * (s * c + u), r - t * c + 1j * s * sn]], dtype=complex)


def map_mostafazadeh(r, s, t, u, phi_ext) -> ParameterMapRecord:
    """Five-parameter family ``(r, s, t, u, phi_ext)`` in terms of ``(eps, gamma, mu, nu, theta, phi)``.

    ``tan(phi) = u / (t sin phi_ext)`` fixes ``phi`` only modulo ``pi``;
    the ``atan2`` branch is the one that reproduces the matrix.
    """
    g2 = t * t + u * u
    d2 = (t * np.sin(phi_ext)) ** 2 + u * u
    if g2 == 0 or d2 == 0:
        raise MapSingular(f"map denominators vanish (t^2+u^2={g2}, t^2 sin^2 phi+u^2={d2})")
    gamma = np.sqrt(g2)
    d = np.sqrt(d2)
    mu = s * gamma * np.sin(phi_ext) / d
    nu = -s * u * np.cos(phi_ext) / d
    theta = np.arccos(np.clip(t * np.cos(phi_ext) / gamma, -1.0, 1.0))
    phi = np.arctan2(u, t * np.sin(phi_ext))
    target = PTParams2(float(r), float(gamma), float(mu), float(nu), float(theta), float(phi))
    src = {"r": r, "s": s, "t": t, "u": u, "phi_ext": phi_ext}
    return ParameterMapRecord(src, target, [])


def mo_matrix(q, e, big_theta, big_phi) -> np.ndarray:
    ct, st = np.cos(big_theta), np.sin(big_theta)
    return q * np.eye(2) + e * np.array([[ct, np.exp(-1j * big_phi) * st],
                                         [np.exp(1j * big_phi) * st, -ct]])


MO_CAVEAT = ("E = 0 is excluded: the external matrix is then proportional to the identity, "
             "while the general family at gamma^2 = mu^2 + nu^2 is not")


def map_mo(q, e, big_theta, big_phi, tol=DEFAULT_TOL) -> ParameterMapRecord:
    """Six-parameter family ``q + E (cos T, e^{-iF} sin T; e^{iF} sin T, -cos T)``, complex ``T, F``.

    Inverted with the closed-form 2x2 fit; the branch of
    ``+-sqrt(gamma^2 - mu^2 - nu^2) = E`` follows the sign of ``E``.
    """
    if e == 0:
        raise DegeneratePoint(MO_CAVEAT)
    h = mo_matrix(q, e, big_theta, big_phi)
    p, _ = fit_pt2(h, tol)
    if e < 0:
        # same matrix: n^r -> -n^r, n^theta fixed, n^phi -> -n^phi
        p = PTParams2(p.epsilon, -p.gamma, p.mu, -p.nu, np.pi - p.theta, p.phi + np.pi)
    # q may come back from the fit as eps up to rounding; keep the exact value
    p = PTParams2(float(q), *(getattr(p, k) for k in ("gamma", "mu", "nu", "theta", "phi")))
    err = fro(build_h2(p) - h)
    caveats = [MO_CAVEAT]
    if err > 1e-8 * max(1.0, fro(h)):
        caveats.append(f"reconstruction error {err:.3e}")
    src = {"q": q, "E": e, "Theta": complex(big_theta), "Phi": complex(big_phi)}
    return ParameterMapRecord(src, p, caveats)
