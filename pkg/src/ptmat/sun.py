"""Pauli / generalized Gell-Mann generators and SU(N) structure constants.

Generators are normalized as ``Tr(l_i l_j) = 2 delta_ij``.  They are ordered
level by level: for k = 2..n, the symmetric and antisymmetric pair
generators coupling rows j < k to row k (alternating sym/antisym, j
increasing), followed by the k-th diagonal generator.  For n = 2 this is
(sigma_x, sigma_y, sigma_z) and for n = 3 the standard lambda_1..lambda_8.
"""
import csv
import io
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, DimensionOutOfRange
from .linalg import as_matrix

MIN_DIM, MAX_DIM = 2, 8


@dataclass(frozen=True, eq=False)
class BasisSet:
    n: int
    generators: np.ndarray  # (n^2 - 1, n, n)
    d: np.ndarray           # (n^2 - 1,) * 3, totally symmetric
    f: np.ndarray           # (n^2 - 1,) * 3, totally antisymmetric

    @property
    def size(self) -> int:
        return self.n * self.n - 1

    def __getitem__(self, i):
        return self.generators[i]

    def __len__(self):
        return self.size


def _generators(n):
    gens = []
    for k in range(1, n):
        for j in range(k):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1
            a = np.zeros((n, n), dtype=complex)
            a[j, k], a[k, j] = -1j, 1j
            gens += [s, a]
        diag = np.zeros(n)
        diag[:k] = 1
        diag[k] = -k
        gens.append(np.diag(diag * np.sqrt(2.0 / (k * (k + 1)))).astype(complex))
    return np.array(gens)


@lru_cache(maxsize=None)
def build_basis(n: int) -> BasisSet:
    """Generators and structure constants for dimension ``2 <= n <= 8``.

    ``d[i,j,k] = Tr({l_i, l_j} l_k) / 4`` and
    ``f[i,j,k] = -i Tr([l_i, l_j] l_k) / 4``.
    """
    if not isinstance(n, (int, np.integer)) or not MIN_DIM <= n <= MAX_DIM:
        raise DimensionOutOfRange(f"basis dimension must be in [{MIN_DIM}, {MAX_DIM}], got {n}")
    lam = _generators(int(n))
    triple = np.einsum("iab,jbc,kca->ijk", lam, lam, lam)
    swapped = triple.transpose(1, 0, 2)
    d = ((triple + swapped) / 4).real
    f = (-1j * (triple - swapped) / 4).real
    for arr in (lam, d, f):
        arr.setflags(write=False)
    return BasisSet(int(n), lam, d, f)


def expand(m, basis: BasisSet):
    """Return ``(c0, coeffs)`` with ``m = c0 * 1 + sum_i coeffs[i] * l_i``."""
    m = as_matrix(m)
    if m.shape[0] != basis.n:
        raise DimensionMismatch(f"matrix is {m.shape[0]}x{m.shape[0]}, basis is for n={basis.n}")
    c0 = np.trace(m) / basis.n
    coeffs = np.einsum("iab,ba->i", basis.generators, m) / 2
    return complex(c0), coeffs


def compose(c0, coeffs, basis: BasisSet) -> np.ndarray:
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (basis.size,):
        raise DimensionMismatch(f"expected {basis.size} coefficients, got shape {coeffs.shape}")
    return c0 * np.eye(basis.n) + np.einsum("i,iab->ab", coeffs, basis.generators)


def structure_constants_csv(basis: BasisSet, threshold=1e-12) -> str:
    """CSV dump (1-based ``i, j, k, d, f``) of every entry where d or f is nonzero."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "j", "k", "d", "f"])
    mask = (np.abs(basis.d) > threshold) | (np.abs(basis.f) > threshold)
    for i, j, k in zip(*np.nonzero(mask)):
        d = basis.d[i, j, k] if abs(basis.d[i, j, k]) > threshold else 0.0
        f = basis.f[i, j, k] if abs(basis.f[i, j, k]) > threshold else 0.0
        writer.writerow([i + 1, j + 1, k + 1, repr(float(d)), repr(float(f))])
    return buf.getvalue()
