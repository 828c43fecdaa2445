import numpy as np
import pytest

from ptmat import cpt, special
from ptmat.construct import PTParams2, build_h2
from ptmat.errors import DegeneratePoint, ExceptionalOrBroken, MapSingular
from ptmat.parity import parity2


def test_hermitian_examples():
    np.testing.assert_allclose(special.hermitian_case(0, 1, 0, 0), np.diag([1, -1]))
    np.testing.assert_allclose(special.hermitian_case(2, 0, 0.3, 0.4), 2 * np.eye(2))


def test_bbj_example_and_nesting():
    h, c = special.bbj_case(0, 5, 3)
    np.testing.assert_allclose(h, [[-3j, 5], [5, 3j]])
    np.testing.assert_allclose(c, [[-0.75j, 1.25], [1.25, 0.75j]], atol=1e-15)
    h0, c0 = special.bbj_case(1.5, 2.0, 0.0)
    np.testing.assert_allclose(h0, special.hermitian_case(1.5, 2.0, np.pi / 2, 0), atol=1e-15)
    np.testing.assert_allclose(c0, [[0, 1], [1, 0]])
    with pytest.raises(ExceptionalOrBroken):
        special.bbj_case(0, 3, 3)


def test_bmw_reduces_to_bbj_and_is_symmetric():
    hb, cb = special.bmw_case(0.2, 5, 3, np.pi / 2)
    hj, cj = special.bbj_case(0.2, 5, 3)
    np.testing.assert_allclose(hb, hj, atol=1e-15)
    np.testing.assert_allclose(cb, cj, atol=1e-15)
    h, _ = special.bmw_case(0, 5, 3, np.pi / 3)
    np.testing.assert_allclose(h, h.T, atol=1e-12)


def test_bmw_pt_eigenstates():
    th = np.pi / 3
    h, c = special.bmw_case(0, 5, 3, th)
    p = parity2(th, 0).matrix
    np.testing.assert_allclose(c, cpt.build_c(h, p), atol=1e-13)
    vals, vecs = np.linalg.eig(h)
    for v in vecs.T:
        v = special.pt_eigenstate_phase(v * np.exp(0.7j), p)
        np.testing.assert_allclose(p @ v.conj(), v, atol=1e-10)


def test_mostafazadeh_examples(rng):
    rec = special.map_mostafazadeh(1.0, 0.0, 2.0, 0.5, 0.7)
    assert rec.target.mu == 0 and rec.target.nu == 0
    rec = special.map_mostafazadeh(0.3, 1.2, -2.0, 0.0, np.pi / 2)
    t = rec.target
    assert t.gamma == pytest.approx(2.0) and np.cos(t.theta) == pytest.approx(0, abs=1e-15)
    assert t.nu == pytest.approx(0, abs=1e-15)
    for _ in range(200):
        r, s, tt, u, f = rng.normal(size=5)
        rec = special.map_mostafazadeh(r, s, tt, u, f)
        np.testing.assert_allclose(build_h2(rec.target), special.mostafazadeh_matrix(r, s, tt, u, f),
                                   atol=1e-10)
    with pytest.raises(MapSingular):
        special.map_mostafazadeh(1, 1, 0, 0, 0.3)
    with pytest.raises(MapSingular):
        special.map_mostafazadeh(1, 1, 2, 0, 0.0)


def test_mo_map(rng):
    rec = special.map_mo(0.5, 1.5, 0.3, 0.8)
    assert rec.target.mu == pytest.approx(0, abs=1e-14) and rec.target.nu == pytest.approx(0, abs=1e-14)
    for _ in range(200):
        q, e = rng.normal(size=2)
        th, ph = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        rec = special.map_mo(q, e, th, ph)
        ref = special.mo_matrix(q, e, th, ph)
        assert np.abs(build_h2(rec.target) - ref).max() <= 1e-8 * max(1, np.abs(ref).max())
        t = rec.target
        assert np.sign(t.gamma) == np.sign(e)
        assert np.sign(t.gamma) * np.sqrt(t.discriminant()) == pytest.approx(e, rel=1e-8)
        assert rec.caveats
    with pytest.raises(DegeneratePoint):
        special.map_mo(0.1, 0.0, 0.2, 0.3)


def test_record_json():
    rec = special.map_mo(0.5, -1.5, 0.3 + 0.1j, 0.8)
    out = rec.to_json()
    assert out["source_params"]["Theta"] == {"re": 0.3, "im": 0.1}
    assert isinstance(PTParams2(**out["target"]), PTParams2)
