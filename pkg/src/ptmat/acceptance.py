"""The acceptance suite: eleven seeded numerical checks with tolerances and time budgets.

Each ``criterion_*`` function returns a :class:`CriterionResult`; a criterion
passes when its worst measured error is within tolerance *and* it finished
inside its time budget.  ``quick=True`` divides every sample count by ten.
"""
import time
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from . import cpt, special
from .construct import (PTParams2, PTParams3, basis_vectors_3, build_h2, build_h3, build_hN,
                        check_pt_symmetry, fit_pt2, m_matrix2, m_matrix3, m_matrix_oracle,
                        solution_space_dimension, split_eigenspaces)
from .errors import DegeneratePoint
from .linalg import dagger, eigen_decompose, eigenvalues, fro
from .parity import parity2, parity3, parity3_coeffs, parity_generic, parity_trivial
from .search import search_parity3
from .sun import build_basis


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    worst: float
    tol: float
    runtime: float
    budget: float
    samples: int
    notes: List[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (f"[{status}] {self.number:2d} {self.name}: worst {self.worst:.2e} (tol {self.tol:.0e}), "
                f"{self.samples} samples, {self.runtime:.2f}s (budget {self.budget:.0f}s)")
        if self.notes:
            text += " | " + "; ".join(self.notes)
        return text


def _finish(number, name, worst, tol, start, budget, samples, notes=()):
    runtime = time.perf_counter() - start
    notes = list(notes)
    ok = bool(worst <= tol)
    if runtime > budget:
        notes.append("over time budget")
    return CriterionResult(number, name, ok and runtime <= budget, float(worst), tol,
                           runtime, budget, samples, notes)


def _count(full, quick):
    return max(1, full // 10) if quick else full


# -- samplers --------------------------------------------------------------

def _angles3(rng, min_sin2chi=0.0):
    while True:
        x = rng.uniform(0, 2 * np.pi, 4)
        if abs(np.sin(2 * x[0])) > min_sin2chi:
            return x


def draw_unbroken2(rng, margin=0.25) -> PTParams2:
    """Random 2x2 parameters with ``gamma^2 - mu^2 - nu^2 >= margin * gamma^2``."""
    while True:
        eps, g, m, n = rng.normal(size=4)
        th, ph = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        p = PTParams2(eps, g, m, n, th, ph)
        if abs(g) > 0.1 and p.discriminant() >= margin * g * g:
            return p


def draw_unbroken3(rng, min_gap=0.05, max_cond=50.0) -> PTParams3:
    """Random 3x3 parameters whose Hamiltonian has a real, well separated,
    well conditioned spectrum (rejection sampling)."""
    while True:
        chi, th, rho, ph = _angles3(rng, 0.1)
        p = PTParams3(rng.normal(), tuple(rng.normal(size=4)), tuple(0.3 * rng.normal(size=4)),
                      chi, th, rho, ph)
        h = build_h3(p)
        scale = max(1.0, fro(h))
        vals, vecs = np.linalg.eig(h)
        if np.max(np.abs(vals.imag)) > 1e-6 * scale:
            continue
        gaps = np.abs(vals[:, None] - vals[None, :])[np.triu_indices(3, 1)]
        if gaps.min() < min_gap * scale or np.linalg.cond(vecs) > max_cond:
            continue
        return p


# -- criteria --------------------------------------------------------------

def criterion_parity_validity(seed=0, quick=False):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = _count(1000, quick)
    eye2, eye3 = np.eye(2), np.eye(3)
    worst = 0.0
    for _ in range(n):
        p = parity2(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)).matrix
        worst = max(worst, fro(p - dagger(p)), fro(p @ p - eye2))
    # half the 3x3 draws land on each cos 2chi branch; add the boundary explicitly
    chis = list(rng.uniform(0, 2 * np.pi, n)) + [np.pi / 4, 3 * np.pi / 4, -np.pi / 4]
    branches = set()
    for chi in chis:
        _, th, rho, ph = rng.uniform(0, 2 * np.pi, 4)
        sign = 1 if rng.random() < 0.5 else -1
        d = parity3(chi, th, rho, ph, sign)
        branches.add(d.cos2chi_branch)
        p = d.matrix
        worst = max(worst, fro(p - dagger(p)), fro(p @ p - eye3))
    notes = [f"cos2chi branches {sorted(branches)}"]
    if branches != {"nonneg", "neg"}:
        worst = np.inf
    return _finish(1, "parity validity", worst, 1e-12, start, 1.0, n + len(chis), notes)


def _multiplicities(m, tol=1e-10):
    vals = np.linalg.eigvalsh(m)
    off = np.min(np.abs(np.abs(vals) - 1))
    return int(np.sum(vals > 0)), int(np.sum(vals < 0)), float(np.max(np.abs(np.abs(vals) - 1))), off


def criterion_m_matrix(seed=0, quick=False):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = _count(1000, quick)
    b2, b3 = build_basis(2), build_basis(3)
    worst = 0.0
    bad = 0
    for _ in range(n):
        par = parity2(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        m = m_matrix2(par)
        worst = max(worst, np.max(np.abs(m - m_matrix_oracle(par, b2))))
        plus, minus, err, _ = _multiplicities(m)
        worst = max(worst, err)
        bad += (plus, minus) != (1, 2)

        x = rng.uniform(0, 2 * np.pi, 4)
        par = parity3(*x)
        m = m_matrix3(parity3_coeffs(*x), b3)
        worst = max(worst, np.max(np.abs(m - m_matrix_oracle(par, b3))))
        plus, minus, err, _ = _multiplicities(m)
        worst = max(worst, err)
        bad += (plus, minus) != (4, 4)
    notes = [f"{bad} draws with wrong multiplicities"]
    if bad:
        worst = np.inf
    return _finish(2, "M-matrix oracle equivalence", worst, 1e-10, start, 5.0, 2 * n, notes)


def criterion_eigenvector_bases(seed=0, quick=False):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = _count(1000, quick)
    b3 = build_basis(3)
    worst = 0.0
    for _ in range(n):
        x = _angles3(rng, 0.1)
        m = m_matrix3(parity3_coeffs(*x), b3)
        a, b = basis_vectors_3(*x)
        worst = max(worst,
                    np.max(np.abs(a @ m.T - a)),
                    np.max(np.abs(b @ m.T + b)))
        v = np.vstack([a, b])
        worst = max(worst, np.max(np.abs(v @ v.T - np.eye(8))))
    return _finish(3, "3x3 closed-form eigenvector bases", worst, 1e-10, start, 5.0, n)


def criterion_spectrum_formula(seed=0, quick=False):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = _count(10000, quick)
    worst = 0.0
    counts = {"unbroken": 0, "broken": 0}
    skipped = 0
    for _ in range(n):
        eps, g, m, nu = rng.normal(size=4)
        p = PTParams2(eps, g, m, nu, rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        disc = p.discriminant()
        scale = g * g + m * m + nu * nu
        # eigenvalues are ill-conditioned right at the exceptional point
        if abs(disc) < 1e-3 * scale:
            skipped += 1
            continue
        vals = np.sort_complex(eigenvalues(build_h2(p)))
        if disc > 0:
            counts["unbroken"] += 1
            r = np.sqrt(disc)
            expected = np.array([eps - r, eps + r])
            worst = max(worst, np.max(np.abs(vals - expected)))
        else:
            counts["broken"] += 1
            r = np.sqrt(-disc)
            lo, hi = sorted(vals, key=lambda z: z.imag)
            worst = max(worst, abs(lo - np.conj(hi)), abs(lo - (eps - 1j * r)), abs(hi - (eps + 1j * r)))
    notes = [f"{counts['unbroken']} unbroken, {counts['broken']} broken, "
             f"{skipped} within 1e-3 of the exceptional surface skipped"]
    return _finish(4, "2x2 spectrum formula", worst, 1e-10, start, 5.0, n - skipped, notes)


def criterion_cpt_frames(seed=0, quick=False):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = _count(1000, quick)
    worst = 0.0
    worst_key = ""
    for dim in (2, 3):
        for _ in range(n):
            if dim == 2:
                p = draw_unbroken2(rng)
                h, par = build_h2(p), p.parity()
            else:
                p = draw_unbroken3(rng)
                h, par = build_h3(p), p.parity()
            frame = cpt.cpt_frame(h, par)
            for k, v in frame.residuals.items():
                if v > worst:
                    worst, worst_key = v, f"{dim}x{dim} {k}"
    return _finish(5, "CPT frame properties", worst, 1e-9, start, 30.0, 2 * n, [f"worst: {worst_key}"])


def _phase_distance(a, b):
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    ov = np.vdot(b, a)
    return float(np.linalg.norm(a - b * ov / abs(ov)))


def criterion_closed_forms(seed=0, quick=False):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = _count(1000, quick)
    worst = 0.0
    minus_skipped = 0
    for _ in range(n):
        p = draw_unbroken2(rng)
        h, par = build_h2(p), p.parity()
        c_num = cpt.build_c(h, par)
        worst = max(worst, np.max(np.abs(cpt.c_closed2(p) - c_num)))
        sp = cpt.spectrum2_closed(p)
        num = eigen_decompose(h)
        order = np.argsort(num.eigenvalues.real)[::-1]  # E+ first
        for k in range(2):
            worst = max(worst, _phase_distance(sp.states[:, k], num.right_eigenvectors[:, order[k]]))
        sg = np.sign(p.gamma)
        norms = np.einsum("ai,ab,bi->i", sp.states.conj(), par.matrix, sp.states).real
        worst = max(worst, abs(norms[0] - sg), abs(norms[1] + sg))
        w = cpt.weight(par, c_num)
        eta_p = cpt.eta2_closed(w, sp.u, 1)
        worst = max(worst, np.max(np.abs(eta_p @ eta_p - w)))
        if sp.u - 1 > 1e-6:
            eta_m = cpt.eta2_closed(w, sp.u, -1)
            worst = max(worst, np.max(np.abs(eta_m @ eta_m - w)))
        else:
            minus_skipped += 1
        beta = cpt.beta_vector(p)
        worst = max(worst, abs(sp.u ** 2 * (1 - beta @ beta) - 1))
    notes = [f"eta_- skipped for {minus_skipped} draws with u - 1 <= 1e-6"] if minus_skipped else []
    return _finish(6, "2x2 closed-form agreement", worst, 1e-12, start, 5.0, n, notes)


def draw_real_spectrum2(rng) -> np.ndarray:
    """``eps + (A + iB) . sigma`` with real ``eps``, ``A.B = 0`` and ``|B| < |A|``."""
    eps = rng.normal()
    a = rng.normal(size=3)
    t = rng.normal(size=3)
    t -= (t @ a) / (a @ a) * a
    b = rng.uniform(0, 0.95) * np.linalg.norm(a) * t / np.linalg.norm(t)
    alpha = a + 1j * b
    return eps * np.eye(2) + np.einsum("i,iab->ab", alpha, build_basis(2).generators)


def criterion_completeness2(seed=0, quick=False):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = _count(10000, quick)
    worst = 0.0
    failures = 0
    for _ in range(n):
        h = draw_real_spectrum2(rng)
        try:
            p, _ = fit_pt2(h)
        except Exception:
            failures += 1
            continue
        worst = max(worst, fro(build_h2(p) - h) / max(1.0, fro(h)))
    if failures:
        worst = np.inf
    return _finish(7, "2x2 completeness (fit round trip)", worst, 1e-8, start, 10.0, n,
                   [f"{failures} fits raised"])


def criterion_special_cases(seed=0, quick=False):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = _count(100, quick)
    worst = 0.0
    notes = []
    # Hermitian member: W = 1, C = P
    for _ in range(n):
        eps, g = rng.normal(size=2)
        g = abs(g) + 0.1
        th, ph = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        h = special.hermitian_case(eps, g, th, ph)
        par = parity2(th, ph)
        c = cpt.build_c(h, par)
        worst = max(worst, np.max(np.abs(c - par.matrix)),
                    np.max(np.abs(cpt.weight(par, c) - np.eye(2))), fro(h - dagger(h)))
    # BBJ fixture
    h, c = special.bbj_case(0, 5, 3)
    worst = max(worst,
                np.max(np.abs(h - np.array([[-3j, 5], [5, 3j]]))),
                np.max(np.abs(c - np.array([[-0.75j, 1.25], [1.25, 0.75j]]))),
                np.max(np.abs(c - cpt.build_c(h, parity2(np.pi / 2, 0)))))
    # BMW: symmetric, agrees with the general machinery, PT eigenstates
    for _ in range(n):
        p = draw_unbroken2(rng)
        h, c = special.bmw_case(p.epsilon, p.gamma, p.mu, p.theta)
        gen = PTParams2(p.epsilon, p.gamma, p.mu, 0.0, p.theta, 0.0)
        par = gen.parity()
        worst = max(worst, np.max(np.abs(h - h.T)), np.max(np.abs(h - build_h2(gen))),
                    np.max(np.abs(c - cpt.build_c(h, par))))
        for v in eigen_decompose(h).right_eigenvectors.T:
            v = special.pt_eigenstate_phase(v, par.matrix)
            worst = max(worst, np.max(np.abs(par.matrix @ v.conj() - v)))
    # five-parameter map
    for _ in range(n):
        r, s, t, u, f = rng.normal(size=5)
        rec = special.map_mostafazadeh(r, s, t, u, f)
        worst = max(worst, np.max(np.abs(build_h2(rec.target) - special.mostafazadeh_matrix(r, s, t, u, f))))
    # six-parameter map
    for _ in range(n):
        q, e = rng.normal(size=2)
        big_t, big_f = complex(*(0.7 * rng.normal(size=2))), complex(*(0.7 * rng.normal(size=2)))
        rec = special.map_mo(q, e, big_t, big_f)
        ref = special.mo_matrix(q, e, big_t, big_f)
        worst = max(worst, np.max(np.abs(build_h2(rec.target) - ref)) / max(1.0, np.max(np.abs(ref))))
    try:
        special.map_mo(0.3, 0.0, 0.2, 0.1)
        notes.append("E = 0 did not raise")
        worst = np.inf
    except DegeneratePoint:
        pass
    return _finish(8, "special-case fixtures", worst, 1e-10, start, 5.0, 4 * n + 2, notes)


def criterion_parameter_count(seed=0, quick=False):
    start = time.perf_counter()
    got = {n: solution_space_dimension(n, seed) for n in (2, 3)}
    expected = {2: 6, 3: 13}
    worst = max(abs(got[n]["total"] - expected[n]) for n in (2, 3))
    notes = [f"n={n}: 1 + {got[n]['plus']} + {got[n]['minus']} + {got[n]['parity']} = {got[n]['total']}"
             for n in (2, 3)]
    return _finish(9, "parameter counting", worst, 0.0, start, 1.0, 2, notes)


def criterion_planted_search(seed=0, quick=False):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = 5 if quick else 50
    worst = 0.0
    for i in range(n):
        chi, th, rho, ph = _angles3(rng, 0.1)
        p = PTParams3(rng.normal(), tuple(rng.normal(size=4)), tuple(rng.normal(size=4)),
                      chi, th, rho, ph)
        h = build_h3(p)
        res = search_parity3(h, restarts=50, seed=seed + i)
        worst = max(worst, res.residual, check_pt_symmetry(h, res.parity))
    return _finish(10, "planted-parity search", worst, 1e-8, start, 60.0, n, ["50 restarts each"])


def criterion_n4_smoke(seed=0, quick=False):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = _count(100, quick)
    basis = build_basis(4)
    worst = 0.0
    for _ in range(n):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        q, r = np.linalg.qr(z)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        k = int(rng.integers(1, 4))       # number of -1 eigenvalues, nontrivial
        par = parity_generic(q, [1] * (4 - k) + [-1] * k)
        m = m_matrix_oracle(par, basis)
        worst = max(worst, np.max(np.abs(m - m.T)), np.max(np.abs(m @ m - np.eye(15))))
        split = split_eigenspaces(m)
        a = rng.normal(size=len(split.plus)) @ split.plus
        b = rng.normal(size=len(split.minus)) @ split.minus
        h = build_hN(rng.normal(), a, b, basis, parity=par)
        worst = max(worst, check_pt_symmetry(h, par))
    return _finish(11, "n=4 generalization smoke test", worst, 1e-10, start, 5.0, n)


CRITERIA: List[Callable[..., CriterionResult]] = [
    criterion_parity_validity,
    criterion_m_matrix,
    criterion_eigenvector_bases,
    criterion_spectrum_formula,
    criterion_cpt_frames,
    criterion_closed_forms,
    criterion_completeness2,
    criterion_special_cases,
    criterion_parameter_count,
    criterion_planted_search,
    criterion_n4_smoke,
]


def run_all(seed=0, quick=False, echo=None) -> List[CriterionResult]:
    results = []
    for crit in CRITERIA:
        res = crit(seed=seed, quick=quick)
        if echo:
            echo(res.line())
        results.append(res)
    return results
