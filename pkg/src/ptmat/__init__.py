"""Construct, verify and analyze PT-symmetric matrix Hamiltonians."""
from .construct import (PTParams2, PTParams3, build_h2, build_h3, build_hN, check_pt_symmetry,
                        classify2, fit_pt2, m_matrix2, m_matrix3, m_matrix_oracle,
                        split_eigenspaces)
from .cpt import build_c, cpt_frame, hermitian_equivalent, weight
from .linalg import eigen_decompose, eigenvalues, hermitian_sqrt
from .parity import (ParityDescriptor, parity2, parity3, parity_from_matrix, parity_generic,
                     parity_trivial)
from .search import search_parity3
from .sun import build_basis, compose, expand

__version__ = "0.1.0"

__all__ = [
    "PTParams2", "PTParams3", "ParityDescriptor", "build_basis", "build_c", "build_h2",
    "build_h3", "build_hN", "check_pt_symmetry", "classify2", "compose", "cpt_frame",
    "eigen_decompose", "eigenvalues", "expand", "fit_pt2", "hermitian_equivalent",
    "hermitian_sqrt", "m_matrix2", "m_matrix3", "m_matrix_oracle", "parity2", "parity3",
    "parity_from_matrix", "parity_generic", "parity_trivial", "search_parity3",
    "split_eigenspaces", "weight",
]
