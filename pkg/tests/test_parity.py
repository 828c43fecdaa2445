import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptmat.errors import NotHermitian, NotUnitary, WrongParityKind
from ptmat.parity import (parity2, parity3, parity3_coeffs, parity_from_json, parity_from_matrix,
                          parity_generic, parity_trivial)
from ptmat.sun import build_basis, compose

angle = st.floats(-10, 10, allow_nan=False)
SIGMA_X = np.array([[0, 1], [1, 0]])


def test_parity2_examples():
    np.testing.assert_allclose(parity2(np.pi / 2, 0).matrix, SIGMA_X, atol=1e-15)
    np.testing.assert_allclose(parity2(0, 1.3).matrix, np.diag([1, -1]), atol=1e-15)
    np.testing.assert_allclose(parity2(0.4, 0.9).unit_vector(),
                               [np.sin(.4) * np.cos(.9), np.sin(.4) * np.sin(.9), np.cos(.4)])


def test_parity3_at_origin_and_sign():
    np.testing.assert_allclose(parity3(0, 0, 0, 0).matrix, np.diag([1, 1, -1]), atol=1e-15)
    np.testing.assert_allclose(parity3(0, 0, 0, 0, sign=-1).matrix, np.diag([-1, -1, 1]), atol=1e-15)
    with pytest.raises(ValueError):
        parity3(0, 0, 0, 0, sign=2)


@settings(max_examples=300, deadline=None)
@given(angle, angle, angle, angle)
def test_parity3_is_hermitian_involution_with_trace_one(chi, theta, rho, phi):
    p = parity3(chi, theta, rho, phi).matrix
    assert np.linalg.norm(p - p.conj().T) < 1e-12
    assert np.linalg.norm(p @ p - np.eye(3)) < 1e-12
    assert np.trace(p).real == pytest.approx(1.0)


def test_branch_labels_and_continuity_at_boundary():
    assert parity3(0.2, 1, 1, 1).cos2chi_branch == "nonneg"
    assert parity3(1.2, 1, 1, 1).cos2chi_branch == "neg"
    eps = 1e-9
    below = parity3(np.pi / 4 - eps, .3, .5, .7).matrix
    above = parity3(np.pi / 4 + eps, .3, .5, .7).matrix
    assert np.linalg.norm(below - above) < 1e-7


def test_coefficients_compose_to_matrix(rng):
    b = build_basis(3)
    for _ in range(50):
        x = rng.uniform(0, 2 * np.pi, 4)
        c = parity3_coeffs(*x)
        np.testing.assert_allclose(compose(c.p0, c.p, b), parity3(*x).matrix, atol=1e-14)
        p0, p = c.signed(-1)
        np.testing.assert_allclose(compose(p0, p, b), parity3(*x, sign=-1).matrix, atol=1e-14)


def test_trivial_and_generic(rng):
    np.testing.assert_array_equal(parity_trivial(4, -1).matrix, -np.eye(4))
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    p = parity_generic(q, (1, -1, 1, -1)).matrix
    np.testing.assert_allclose(p @ p, np.eye(4), atol=1e-13)
    np.testing.assert_allclose(np.linalg.eigvalsh(p), [-1, -1, 1, 1], atol=1e-13)
    with pytest.raises(NotUnitary):
        parity_generic(2 * np.eye(2), (1, -1))


def test_from_matrix_validation():
    d = parity_from_matrix(SIGMA_X)
    assert d.kind == "generic" and sorted(d.params["signature"]) == [-1, 1]
    with pytest.raises(NotHermitian):
        parity_from_matrix([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        parity_from_matrix(np.diag([1.0, 2.0]))
    with pytest.raises(WrongParityKind):
        d.unit_vector()


def test_json_round_trip():
    for d in (parity2(0.3, 0.4), parity3(0.1, 0.2, 0.3, 0.4, -1), parity_trivial(3, -1),
              parity_from_matrix(SIGMA_X)):
        back = parity_from_json(d.to_json())
        np.testing.assert_array_equal(back.matrix, d.matrix)
    with pytest.raises(ValueError):
        parity_from_json({"kind": "nonsense"})
