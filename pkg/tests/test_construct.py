import numpy as np
import pytest

from ptmat.construct import (PTParams2, PTParams3, basis_vectors_3, build_h2, build_h3, build_hN,
                             check_pt_symmetry, classify2, fit_pt2, m_matrix2, m_matrix_oracle,
                             solution_space_dimension, split_eigenspaces)
from ptmat.errors import (Broken, CoefficientNotInEigenspace, DegenerateParameterPoint,
                          DimensionMismatch, ExceptionalPoint, SpectrumNotPlusMinusOne)
from ptmat.parity import parity2, parity_generic, parity_trivial
from ptmat.sun import build_basis

H_BBJ = np.array([[-3j, 5], [5, 3j]])
BBJ = PTParams2(0, 5, 3, 0, np.pi / 2, 0)


def test_build_h2_bbj_example():
    np.testing.assert_allclose(build_h2(BBJ), H_BBJ, atol=1e-14)
    assert check_pt_symmetry(H_BBJ, parity2(np.pi / 2, 0)) < 1e-14
    assert check_pt_symmetry(H_BBJ, parity2(0, 0)) > 1


def test_build_h2_pt_symmetric(rng):
    for _ in range(200):
        p = PTParams2(*rng.normal(size=4), *rng.uniform(0, 2 * np.pi, 2))
        assert check_pt_symmetry(build_h2(p), p.parity()) < 1e-13


def test_m_matrix2_structure():
    m = m_matrix2(parity2(0.7, 1.1))
    np.testing.assert_allclose(m, m_matrix_oracle(parity2(0.7, 1.1), build_basis(2)), atol=1e-14)
    np.testing.assert_allclose(np.linalg.eigvalsh(m), [-1, -1, 1], atol=1e-14)


def test_vanishing_mus_give_hermitian_3x3(rng):
    p = PTParams3(0.4, tuple(rng.normal(size=4)), (0, 0, 0, 0), 0.3, 0.5, 0.7, 0.9)
    h = build_h3(p)
    np.testing.assert_allclose(h, h.conj().T, atol=1e-14)
    assert check_pt_symmetry(h, p.parity()) < 1e-13


def test_build_h3_all_zero_is_scalar():
    h = build_h3(PTParams3(2.5, chi=0.3), allow_degenerate=True)
    np.testing.assert_allclose(h, 2.5 * np.eye(3))


def test_basis_vectors_degenerate_point():
    with pytest.raises(DegenerateParameterPoint):
        basis_vectors_3(0.0, 0.1, 0.2, 0.3)
    a, b = basis_vectors_3(0.0, 0.1, 0.2, 0.3, allow_degenerate=True)
    assert np.all(np.isfinite(a)) and np.all(np.isfinite(b))


def test_params3_validation():
    with pytest.raises(ValueError):
        PTParams3(0, (1, 2, 3), (0, 0, 0, 0))
    with pytest.raises(ValueError):
        PTParams3(np.nan)


def test_classify2_examples():
    assert classify2(BBJ).label == "unbroken"
    broken = classify2(PTParams2(0, 3, 3, 4, np.pi / 2, 0))
    assert broken.label == "broken" and broken.discriminant == -16
    assert classify2(PTParams2(0, 5, 3, 4)).label == "exceptional"


def test_fit_examples():
    p, par = fit_pt2(H_BBJ)
    assert (p.epsilon, p.gamma, p.mu, p.nu) == pytest.approx((0, 5, 3, 0), abs=1e-14)
    assert p.theta == pytest.approx(np.pi / 2) and p.phi == pytest.approx(0)
    np.testing.assert_allclose(build_h2(p), H_BBJ, atol=1e-14)
    with pytest.raises(ExceptionalPoint):
        fit_pt2(np.array([[0, 1], [0, 0]]))
    with pytest.raises(Broken):
        fit_pt2(np.array([[1j, 0], [0, 1j]]))
    with pytest.raises(Broken):
        fit_pt2(build_h2(PTParams2(0, 3, 3, 4, np.pi / 2, 0)))
    with pytest.raises(DimensionMismatch):
        fit_pt2(np.eye(3))


def test_fit_scalar_gauge():
    p, _ = fit_pt2(2 * np.eye(2))
    assert (p.epsilon, p.gamma, p.theta, p.phi) == (2, 0, 0, 0)


def test_fit_recovers_similarity_transforms(rng):
    """Independent generator: S diag(l1, l2) S^-1 with random complex S."""
    done = 0
    while done < 500:
        s = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if np.linalg.cond(s) > 50:
            continue
        h = s @ np.diag(rng.normal(size=2)) @ np.linalg.inv(s)
        if abs(np.diff(np.linalg.eigvals(h))[0]) < 1e-2:
            continue
        p, par = fit_pt2(h)
        assert np.linalg.norm(build_h2(p) - h) <= 1e-9 * max(1, np.linalg.norm(h))
        assert check_pt_symmetry(h, par) <= 1e-9 * max(1, np.linalg.norm(h))
        done += 1


def test_build_hn_checks_eigenspaces(rng):
    basis = build_basis(4)
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    par = parity_generic(q, (1, 1, -1, -1))
    split = split_eigenspaces(m_matrix_oracle(par, basis))
    assert len(split.plus) + len(split.minus) == 15
    a = split.plus[0] + 0.5 * split.plus[1]
    b = split.minus[2]
    h = build_hN(0.3, a, b, basis, parity=par)
    assert check_pt_symmetry(h, par) < 1e-12
    with pytest.raises(CoefficientNotInEigenspace):
        build_hN(0.3, split.minus[0], b, basis, parity=par)
    with pytest.raises(CoefficientNotInEigenspace):
        build_hN(0.3, a, split.plus[0], basis, parity=par)


def test_trivial_parity_gives_hermitian_only():
    m = m_matrix_oracle(parity_trivial(3), build_basis(3))
    np.testing.assert_allclose(m, np.eye(8), atol=1e-14)
    split = split_eigenspaces(m)
    assert len(split.plus) == 8 and len(split.minus) == 0


def test_split_rejects_non_involution():
    with pytest.raises(SpectrumNotPlusMinusOne):
        split_eigenspaces(2 * np.eye(3))


@pytest.mark.parametrize("n,total", [(2, 6), (3, 13)])
def test_solution_space_dimension(n, total):
    assert solution_space_dimension(n, 7)["total"] == total
