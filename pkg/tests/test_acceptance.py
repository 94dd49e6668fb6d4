"""End-to-end acceptance suite: one test per shipped guarantee.

Each criterion that carries a wall-clock budget asserts it via
time.perf_counter; conftest prints a one-line pass/fail summary per
criterion at the end of the run.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from hodocusp import (
    GridSpec,
    PolyTerm,
    PoleTerm,
    ProblemData,
    QComplex,
    SeedFunction,
    bidisc_check,
    bridge_check,
    build_normal_form,
    cauchy_bound_check,
    cbrt_exact,
    expand_potential,
    fold_curves,
    h_scaled,
    hodograph_map,
    hodograph_roundtrip,
    korobeinik_series,
    potential_residual,
    radius_probe,
    reconstruct,
    relation_checklist,
    scaled_residual,
    system_residual,
    verify_miniversal,
    wedge_halfwidth,
    zero_curves,
)
from hodocusp.errors import DomainError

from conftest import rand_fraction, random_singular_problem


def low2(s):
    return {(i, j): v for i, j, v in s.terms() if i + j <= s.eff}


@pytest.fixture(scope="module")
def twenty_packs():
    packs = []
    for seed in range(100, 120):
        rng = random.Random(seed)
        problem = random_singular_problem(rng)
        packs.append(build_normal_form(hodograph_map(expand_potential(problem, order=6))))
    return packs


def test_criterion_01():
    """All printed coefficient relations hold exactly on 50 random instances."""
    t0 = time.perf_counter()
    rng = random.Random(42)
    for _ in range(50):
        b0 = [rand_fraction(rng) for _ in range(7)]
        b0[2] = Fraction(0)
        problem = ProblemData(
            b0=b0,
            alpha=[rand_fraction(rng) for _ in range(4)],
            v_star=rand_fraction(rng),
            b0_polynomial=True,
        )
        sol = expand_potential(problem, order=5)
        checks = relation_checklist(sol)
        assert len(checks) == 8
        assert all(c.ok for c in checks), [c.name for c in checks if not c.ok]
        assert any(c.name == "b14 = 60*b06" for c in checks)
    assert time.perf_counter() - t0 < 5.0


def test_criterion_02():
    """Potential, h-scaled, and recurrence residuals vanish exactly at N = 8."""
    t0 = time.perf_counter()
    rng = random.Random(7)
    for _ in range(20):
        problem = random_singular_problem(rng)
        sol = expand_potential(problem, order=8)
        r = potential_residual(sol)
        assert all(v == 0 for i, j, v in r.terms() if i + j <= r.eff)
        c = h_scaled(sol.series)
        r2 = scaled_residual(c, sol.problem)
        assert all(v == 0 for i, j, v in r2.terms() if i + j <= r2.eff)

    rng = random.Random(11)
    pts = [QComplex(Fraction(1, 3)), QComplex(Fraction(1, 5), Fraction(1, 7))]
    for i in range(20):
        if i % 2 == 0:
            seed = SeedFunction((PolyTerm(tuple(rand_fraction(rng) for _ in range(5))),))
        else:
            # pole held at distance >= 1 from the expansion point
            a = QComplex(rand_fraction(rng, nonzero=True) + 2)
            seed = SeedFunction((PoleTerm(a, rand_fraction(rng, nonzero=True), 1),))
        ks = korobeinik_series(seed, 0, 8)
        res = ks.recurrence_residuals(pts)
        assert res and all(v == QComplex(0) for v in res)
    assert time.perf_counter() - t0 < 10.0


def test_criterion_03(twenty_packs):
    """Normal-form constants are the exact radical expressions in b11."""
    for pack in twenty_packs:
        b11 = pack.problem.b11
        c = cbrt_exact(Fraction(12, 5) / b11)
        assert pack.xi_of_tau_v.coefficient(0, 3) == Fraction(5, 12) * b11
        assert pack.lambda1_slope() == -c
        assert pack.lambda2.coefficient(1) == 0
        assert pack.v_of_w.coefficient(1) == c


def test_criterion_04(twenty_packs):
    """Recomposing U^3 + lambda1 U + lambda2 reproduces xi exactly."""
    for pack in twenty_packs:
        assert low2(verify_miniversal(pack)) == {}


def test_criterion_05(canonical_pack):
    """Fold/zero curves follow the leading laws on the canonical instance."""
    t0 = time.perf_counter()
    lam1 = canonical_pack.lambda1.to_float()
    assert canonical_pack.multivalued_halfplane() == 1
    for tau, tol in ((1e-2, 0.05), (1e-3, 0.015), (1e-4, 0.005)):
        assert lam1.evaluate(tau) < 0.0
        fp, fm = fold_curves(canonical_pack, [tau])
        zp, zm = zero_curves(canonical_pack, [tau])
        w_fold = (4.0 / 3.0) * math.sqrt(tau ** 3 / 5.0)
        w_zero = (4.0 / 3.0) * tau ** 1.5
        assert abs(fp.xi - w_fold) <= tol * w_fold
        assert abs(fm.xi + w_fold) <= tol * w_fold
        assert abs(zp.xi - w_zero) <= tol * w_zero
        assert abs(zm.xi + w_zero) <= tol * w_zero
        # fold strictly inside the zero-curve bracket
        assert zm.xi < fm.xi < fp.xi < zp.xi
        # the other half-plane is single-valued: no curves there
        with pytest.raises(DomainError):
            fold_curves(canonical_pack, [-tau])
        with pytest.raises(DomainError):
            zero_curves(canonical_pack, [-tau])
    fp, _ = fold_curves(canonical_pack, [1e-4])
    zp, _ = zero_curves(canonical_pack, [1e-4])
    assert abs(fp.xi / zp.xi - 5.0 ** -0.5) <= 0.01 * 5.0 ** -0.5
    assert time.perf_counter() - t0 < 5.0


def test_criterion_06(canonical_map, canonical_pack):
    """Branch counts and roundtrip error on 1000 probes near the base point."""
    t0 = time.perf_counter()
    p = canonical_pack.problem
    t_star, x_star, v_star = float(p.t_star), float(p.x_star), float(p.v_star)
    lam1 = canonical_pack.lambda1.to_float()
    lam2 = canonical_pack.lambda2.to_float()
    rng = random.Random(2024)

    probes = []
    for _ in range(700):
        ang = rng.uniform(0.0, 2.0 * math.pi)
        rad = 1e-3 * math.sqrt(rng.uniform(0.0, 1.0))
        probes.append((rad * math.cos(ang), rad * math.sin(ang)))
    # the wedge is a thin cusp, so aim 300 probes at it to exercise both counts
    for _ in range(300):
        tau = rng.uniform(2e-4, 9e-4)
        w = wedge_halfwidth(lam1.evaluate(tau))
        probes.append((tau, lam2.evaluate(tau) + rng.uniform(-0.9, 0.9) * w))

    pts, n3, n1 = [], 0, 0
    for tau, xi in probes:
        l1 = lam1.evaluate(tau, check=False)
        if l1 >= 0.0:
            want = 1
        else:
            w = wedge_halfwidth(l1)
            d = abs(xi - lam2.evaluate(tau, check=False))
            if abs(d - w) <= 1e-6 * max(1.0, w):
                continue
            want = 3 if d < w else 1
        t = t_star + tau
        x = x_star + v_star * tau + xi
        assert len(reconstruct(t, x, canonical_pack)) == want
        n3 += want == 3
        n1 += want == 1
        pts.append((t, x))
    assert n3 >= 200 and n1 >= 400
    assert hodograph_roundtrip(canonical_map, canonical_pack, pts) <= 1e-9
    assert time.perf_counter() - t0 < 10.0


def test_criterion_07(canonical_pack):
    """FD oracle: second-order convergence on both sheets, plateau <= 1e-4."""
    t0 = time.perf_counter()
    one = system_residual(canonical_pack, GridSpec((-0.5, 0.0), 1e-3, 2e-5))
    assert 1.8 <= one.order1 <= 2.2
    assert 1.8 <= one.order2 <= 2.2
    three = system_residual(canonical_pack, GridSpec((0.5, 0.0), 1e-3, 2e-5), branch=0)
    assert 1.8 <= three.order1 <= 2.2
    assert 1.8 <= three.order2 <= 2.2

    # truncation plateau of a non-terminating instance at order 10
    b0 = [Fraction(0), Fraction(0), Fraction(0), Fraction(1, 12)]
    b0 += [Fraction(1, 3) ** j for j in range(4, 18)]
    problem = ProblemData(b0=b0, alpha=(Fraction(1, 4),), b0_polynomial=True)
    pack = build_normal_form(hodograph_map(expand_potential(problem, order=10)))
    rep = system_residual(pack, GridSpec((-0.1, 0.0), 1e-4, 1e-6), check=False)
    assert rep.r1_rms <= 1e-4
    assert rep.r2_rms <= 1e-4
    assert time.perf_counter() - t0 < 30.0


def test_criterion_08():
    """Catalan coefficients, the radius law, and bidisc witnesses both ways."""
    t0 = time.perf_counter()
    seed = SeedFunction((PoleTerm(QComplex(Fraction(1)), Fraction(1), 1),))
    ks = korobeinik_series(seed, 0, 20)
    for k in range(1, 21):
        m = k - 1
        catalan = Fraction(math.comb(2 * m, m), m + 1)
        assert ks.coefficient(k, QComplex(0)) == QComplex(catalan)

    for u in (Fraction(0), Fraction(1, 2), Fraction(-1, 2)):
        rep = radius_probe(seed, u, K=40)
        assert rep.verdict == "converges"
        assert abs(rep.estimated_radius - rep.predicted_radius) <= 0.01 * rep.predicted_radius
    assert radius_probe(seed, 0, K=40).predicted_radius == 0.25

    # pole distance from u* = 0 is 1; R + 2 sqrt(R1) misses/clears it by 0.1
    inside = bidisc_check(seed, 0, Fraction(2, 5), Fraction(1, 16), samples=8)
    assert inside.analytic and inside.witness is None
    outside = bidisc_check(seed, 0, Fraction(3, 5), Fraction(1, 16), samples=8)
    assert not outside.analytic
    assert outside.witness is not None and outside.witness.confirmed
    assert time.perf_counter() - t0 < 20.0


def test_criterion_09():
    """Derivative bound check passes for three analytic specimens, n <= 20."""
    t0 = time.perf_counter()
    pole = SeedFunction((PoleTerm(QComplex(Fraction(1)), Fraction(1), 1),))
    assert cauchy_bound_check(pole, 1, Fraction(1, 2), "0.1", 20).passed

    poly = SeedFunction((PolyTerm((Fraction(1), Fraction(2), Fraction(3))),))
    assert cauchy_bound_check(poly, 2, 1, Fraction(1, 2), 20).passed

    entire = SeedFunction(
        (PolyTerm(tuple(Fraction(1, math.factorial(k)) for k in range(31))),)
    )
    assert cauchy_bound_check(entire, 2, 1, Fraction(1, 2), 15).passed
    assert time.perf_counter() - t0 < 5.0


def test_criterion_10():
    """Boundary-seed bridge agrees exactly at order 6 for three seeds."""
    t0 = time.perf_counter()
    seeds = [
        (SeedFunction((PolyTerm((0, 0, Fraction(1))),)), 0),
        (SeedFunction((PolyTerm((Fraction(1), Fraction(-2), Fraction(1, 3), Fraction(5))),)), Fraction(1, 2)),
        (SeedFunction((PoleTerm(QComplex(Fraction(1)), Fraction(1), 1),)), 0),
    ]
    for seed, u_star in seeds:
        rep = bridge_check(seed, u_star, order=6)
        assert rep.ok and not rep.mismatches
        assert rep.checked > 0
    assert time.perf_counter() - t0 < 5.0
