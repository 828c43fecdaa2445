"""Parity operators: Hermitian involutions in 2, 3 and N dimensions."""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotUnitary, WrongParityKind
from .linalg import DEFAULT_TOL, as_matrix, dagger, fro

SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True, eq=False)
class ParityDescriptor:
    n: int
    kind: str                   # trivial | parametrized2 | parametrized3 | generic
    matrix: np.ndarray
    params: dict = field(default_factory=dict)   # raw caller values
    overall_sign: int = 1
    cos2chi_branch: Optional[str] = None         # nonneg | neg, 3x3 family only

    def unit_vector(self) -> np.ndarray:
        """n^r for the 2x2 family."""
        if self.kind != "parametrized2":
            raise WrongParityKind(f"unit_vector needs a parametrized2 parity, got {self.kind}")
        return radial_vector(self.params["theta"], self.params["phi"])

    def to_json(self) -> dict:
        p = self.params
        if self.kind == "trivial":
            return {"kind": "trivial", "n": self.n, "sign": self.overall_sign}
        if self.kind == "parametrized2":
            return {"kind": "parity2", "theta": p["theta"], "phi": p["phi"]}
        if self.kind == "parametrized3":
            return {"kind": "parity3", "chi": p["chi"], "theta": p["theta"],
                    "rho": p["rho"], "phi": p["phi"], "sign": self.overall_sign}
        from .io import matrix_to_json
        return {"kind": "matrix", "matrix": matrix_to_json(self.matrix)}


def _sign(sign):
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    return int(sign)


def radial_vector(theta, phi):
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def polar_vector(theta, phi):
    return np.array([np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi), -np.sin(theta)])


def azimuthal_vector(theta, phi):
    return np.array([-np.sin(phi), np.cos(phi), 0.0])


def parity_trivial(n: int, sign: int = 1) -> ParityDescriptor:
    """The trivial solutions P0 = +-1."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    sign = _sign(sign)
    return ParityDescriptor(n, "trivial", sign * np.eye(n, dtype=complex), {"n": n}, sign)


def parity2(theta: float, phi: float) -> ParityDescriptor:
    """Nontrivial 2x2 parity ``n^r . sigma``."""
    c, s = np.cos(theta), np.sin(theta)
    m = np.array([[c, s * np.exp(-1j * phi)],
                  [s * np.exp(1j * phi), -c]])
    return ParityDescriptor(2, "parametrized2", m, {"theta": theta, "phi": phi})


@dataclass(frozen=True, eq=False)
class ParityCoefficients3:
    p0: float
    p: np.ndarray  # P_1..P_8 at indices 0..7

    def signed(self, sign=1):
        return sign * self.p0, sign * self.p


def _branch_terms(chi):
    """(|cos 2chi|, sin 2chi, sin^2 chi after the cos 2chi < 0 substitution)."""
    c = np.cos(2 * chi)
    ac = abs(c)
    # sin^2 chi = (1 - cos 2chi) / 2 carries the substitution too; at c < 0 this
    # is the same as evaluating at pi/2 - chi.
    return ac, np.sin(2 * chi), 0.5 * (1.0 - ac), ("nonneg" if c >= 0 else "neg")


def parity3_coeffs(chi, theta, rho, phi) -> ParityCoefficients3:
    c2x, s2x, sin2x, _ = _branch_terms(chi)
    s2t, c2t = np.sin(2 * theta), np.cos(2 * theta)
    p = np.array([
        -sin2x * s2t * np.cos(rho - phi),
        sin2x * s2t * np.sin(rho - phi),
        sin2x * c2t,
        s2x * np.sin(theta) * np.cos(phi),
        s2x * np.sin(theta) * np.sin(phi),
        s2x * np.cos(theta) * np.cos(rho),
        s2x * np.cos(theta) * np.sin(rho),
        (1 + 3 * c2x) / (2 * SQRT3),
    ])
    return ParityCoefficients3(1.0 / 3.0, p)


def parity3_matrix(chi, theta, rho, phi, sign=1) -> np.ndarray:
    c2x, s2x, sin2x, _ = _branch_terms(chi)
    st, ct = np.sin(theta), np.cos(theta)
    s2t = np.sin(2 * theta)
    m = np.array([
        [c2x * st * st + ct * ct, -sin2x * s2t * np.exp(1j * (rho - phi)), s2x * st * np.exp(-1j * phi)],
        [-sin2x * s2t * np.exp(-1j * (rho - phi)), c2x * ct * ct + st * st, s2x * ct * np.exp(-1j * rho)],
        [s2x * st * np.exp(1j * phi), s2x * ct * np.exp(1j * rho), -c2x],
    ])
    return sign * m


def parity3(chi, theta, rho, phi, sign=1) -> ParityDescriptor:
    """Four-parameter 3x3 parity family, times an overall sign.

    For ``cos 2chi < 0`` the entries use ``-cos 2chi`` in place of
    ``cos 2chi`` (with ``sin^2 chi = (1 - cos 2chi) / 2`` substituted
    consistently), which keeps the matrix an involution.
    """
    sign = _sign(sign)
    branch = _branch_terms(chi)[3]
    return ParityDescriptor(3, "parametrized3", parity3_matrix(chi, theta, rho, phi, sign),
                            {"chi": chi, "theta": theta, "rho": rho, "phi": phi},
                            sign, branch)


def parity_generic(rotation, signature, tol=DEFAULT_TOL) -> ParityDescriptor:
    """``rotation @ diag(signature) @ rotation^dag`` for a unitary rotation."""
    u = as_matrix(rotation)
    n = u.shape[0]
    signature = tuple(_sign(int(s)) for s in signature)
    if len(signature) != n:
        raise DimensionMismatch(f"signature has {len(signature)} entries, rotation is {n}x{n}")
    err = fro(dagger(u) @ u - np.eye(n))
    if err > tol:
        raise NotUnitary(f"|U^dag U - 1|_F = {err:.3e}")
    m = (u * np.array(signature)) @ dagger(u)
    m = 0.5 * (m + dagger(m))
    return ParityDescriptor(n, "generic", m, {"signature": signature, "rotation": u})


def parity_from_matrix(p, tol=DEFAULT_TOL) -> ParityDescriptor:
    """Wrap an explicit Hermitian involution as a generic descriptor."""
    p = as_matrix(p)
    n = p.shape[0]
    herm = fro(p - dagger(p))
    if herm > tol * max(1.0, fro(p)):
        raise NotHermitian(f"parity matrix is not Hermitian (|P - P^dag|_F = {herm:.3e})")
    vals, vecs = np.linalg.eigh(0.5 * (p + dagger(p)))
    if np.max(np.abs(np.abs(vals) - 1)) > tol * max(1.0, fro(p)):
        raise ValueError("parity matrix is not an involution (eigenvalues not +-1)")
    signature = tuple(int(np.sign(v)) for v in vals)
    return ParityDescriptor(n, "generic", p, {"signature": signature, "rotation": vecs})


def parity_from_json(obj, tol=DEFAULT_TOL) -> ParityDescriptor:
    """Parse the CLI-facing parity JSON (kinds parity2, parity3, trivial, matrix)."""
    from .io import matrix_from_json
    if not isinstance(obj, dict):
        raise ValueError("parity JSON must be an object")
    kind = obj.get("kind")
    if kind == "parity2":
        return parity2(float(obj["theta"]), float(obj["phi"]))
    if kind == "parity3":
        return parity3(float(obj["chi"]), float(obj["theta"]), float(obj["rho"]),
                       float(obj["phi"]), int(obj.get("sign", 1)))
    if kind == "trivial":
        return parity_trivial(int(obj["n"]), int(obj.get("sign", 1)))
    if kind == "matrix":
        return parity_from_matrix(matrix_from_json(obj["matrix"]), tol)
    if kind is None and "re" in obj:
        return parity_from_matrix(matrix_from_json(obj), tol)
    raise ValueError(f"unknown parity kind {kind!r}")


def parity_matrix(parity) -> np.ndarray:
    """Matrix of a descriptor, or the array itself."""
    if isinstance(parity, ParityDescriptor):
        return parity.matrix
    return as_matrix(parity)
