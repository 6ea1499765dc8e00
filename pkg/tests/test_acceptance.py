"""Release gate: one test per acceptance criterion, one pass/fail line each.

Every test prints `criterion NN <name>: PASS|FAIL` with the measured metric
and wall time before asserting, so the log carries the evidence either way.
Bounds and budgets are pinned; loosening them is not a fix.
"""
import itertools
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from e8tau import integrals, lattice, picard, sampling, tau
from e8tau.integrals import IntegrandContext
from e8tau.specialfn import EllipticParams, bracket_pm, three_term_residual
from e8tau.util import AdmissibilityError, ConvergenceError, e

CHAIN_PARAMS = EllipticParams.from_bases(0.03, 0.45)
BAILEY_PARAMS = EllipticParams.from_bases(0.15, 0.10)
HIROTA_PARAMS = EllipticParams.from_bases(0.2, 0.35)
TERM_PARAMS = EllipticParams.from_bases(0.05, 0.15)


@pytest.fixture(scope="module")
def chain2():
    return tau.build_chain(2, params=CHAIN_PARAMS, quad_tol=1e-8)


@pytest.fixture(scope="module")
def pm_eval():
    return tau.variant_evaluator("pm", CHAIN_PARAMS, quad_tol=1e-8)


def _line(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num:02d} {name}: {detail}"


def _resampled(draw, tries: int = 8):
    last = None
    for _ in range(tries):
        try:
            return draw()
        except (tau.BracketZeroError, AdmissibilityError, ConvergenceError) as err:
            last = err
    raise RuntimeError(f"no admissible draw in {tries} tries: {last!r}")


def test_criterion_01_exact_counts():
    t0 = time.perf_counter()
    got = [len(lattice.enumerate_norm(2)), len(lattice.enumerate_norm(4))]
    want = [240, 2160]
    c8 = lattice.enumerate_frames(8)
    c3 = lattice.enumerate_frames(3)
    got += [len(c8), len(c3)]
    want += [135, 7560]
    t8 = Counter(f.frame_type for f in c8)
    got += [t8[lattice.FrameType.C8_I], t8[lattice.FrameType.C8_II]]
    want += [72, 63]
    t3 = Counter(f.frame_type for f in c3)
    got += [t3[lattice.FrameType[k]] for k in ("C3_I", "C3_II0", "C3_II1", "C3_II2")]
    want += [4032, 1260, 1890, 378]
    seeds = [
        lattice.PHI - lattice.V[0] + lattice.V[1],
        lattice.PHI - lattice.V[0].scaled(2),
        lattice.PHI - lattice.V[0].scaled(2) - lattice.V[6] - lattice.V[7],
        -lattice.V[0].scaled(2),
        -lattice.PHI - lattice.V[0] + lattice.V[1],
    ]
    got += [len(lattice.weyl_orbit(s, "E7")) for s in seeds]
    want += [126, 576, 756, 576, 126]
    dt = time.perf_counter() - t0
    _line(1, "exact counts", got == want and dt < 10, f"{sum(g == w for g, w in zip(got, want))}/{len(want)} exact, {dt:.1f}s/10s")


def test_criterion_02_three_term_relation():
    t0 = time.perf_counter()
    rng = sampling.make_rng(201)
    worst = 0.0
    for _ in range(1000):
        base = (0.05 + 0.45 * rng.random()) * e(rng.random())
        par = EllipticParams.from_bases(base, 0.3)
        z, a, b, g = (0.4 * complex(rng.standard_normal(), rng.standard_normal()) for _ in range(4))
        worst = max(worst, float(three_term_residual(z, a, b, g, par)))
    dt = time.perf_counter() - t0
    _line(2, "three-term relation", worst < 1e-10 and dt < 5, f"worst {worst:.3e} < 1e-10, {dt:.1f}s/5s")


def test_criterion_03_canonical_and_transformed():
    t0 = time.perf_counter()
    rng = sampling.make_rng(202)
    par = HIROTA_PARAMS
    base = tau.canonical_tau(0.21 + 0.05j, par)
    gauged = tau.transform(base, tau.ExpGauge(k=0.3 - 0.1j, v=tuple(0.2j * k for k in range(8)), c=0.7))
    period = tau.transform(base, tau.PeriodShift(lattice.vec(2, 2, -2, -2, 0, 0, 0, 0), (1, 0)))
    frames = lattice.enumerate_frames(3)
    std = lattice.Frame.from_vectors(tau.A1_VECTORS[:3])
    worst = 0.0
    for _ in range(100):
        x = 0.35 * (rng.standard_normal(8) + 1j * rng.standard_normal(8))
        f = frames[int(rng.integers(len(frames)))]
        for ev, fr in ((base, f), (gauged, f), (period, std)):
            r = tau.hirota_residual(ev, fr, x, par)
            if not r.degenerate:
                worst = max(worst, float(r))
    dt = time.perf_counter() - t0
    _line(3, "canonical solution", worst < 1e-9 and dt < 30, f"worst {worst:.3e} < 1e-9, {dt:.1f}s/30s")


def test_criterion_04_reflection_transformations():
    t0 = time.perf_counter()
    rng = sampling.make_rng(203)
    p, q = BAILEY_PARAMS.p, BAILEY_PARAMS.q
    par_r = EllipticParams.from_bases(p, q, r=0.12)
    rho = abs(p * q) ** 0.25
    worst = 0.0
    for _ in range(10):
        u = sampling.sample_balanced(rng, (p * q) ** 2, rho)
        ctx = IntegrandContext(u=u, params=par_r)
        worst = max(worst, float(integrals.bailey_residual(ctx, "tilde")))
        worst = max(worst, float(integrals.bailey_residual(ctx, "hat")))
    dt = time.perf_counter() - t0
    _line(4, "reflection transformations", worst < 1e-8 and dt < 120, f"worst {worst:.3e} < 1e-8, {dt:.1f}s/120s")


def test_criterion_05_contiguity():
    t0 = time.perf_counter()
    rng = sampling.make_rng(204)
    worst = 0.0
    for _ in range(10):
        u = tuple(0.4 * e(t) for t in rng.random(8))
        res = integrals.contiguity_residual(IntegrandContext(u=u, params=BAILEY_PARAMS), 0, 3, 6)
        worst = max(worst, float(res))
    dt = time.perf_counter() - t0
    _line(5, "contiguity", worst < 1e-8 and dt < 60, f"worst {worst:.3e} < 1e-8, {dt:.1f}s/60s")


def test_criterion_06_initial_data_conditions(chain2):
    t0 = time.perf_counter()
    rng = sampling.make_rng(205)
    par = CHAIN_PARAMS
    a0, a1, a2 = tau.oriented_triple(tau.A1_VECTORS[:3])
    worst_ratio = 0.0
    for _ in range(10):
        def ratio_once():
            x = sampling.sample_on_level(rng, par, 0)
            d = par.delta
            num = tau.hg_tau0(x + d * a1.true_coords(), par) * tau.hg_tau0(x - d * a1.true_coords(), par)
            den = tau.hg_tau0(x + d * a2.true_coords(), par) * tau.hg_tau0(x - d * a2.true_coords(), par)
            lhs = num / den
            rhs = bracket_pm(lattice.pairing_c(a0, x), lattice.pairing_c(a1, x), par) / bracket_pm(
                lattice.pairing_c(a0, x), lattice.pairing_c(a2, x), par
            )
            return abs(lhs - rhs) / max(abs(lhs), abs(rhs))

        worst_ratio = max(worst_ratio, _resampled(ratio_once))

    frame_i = next(f for f in lattice.enumerate_frames(3) if f.frame_type is lattice.FrameType.C3_I)
    worst_half = 0.0
    for _ in range(10):
        r = _resampled(
            lambda: tau.hirota_residual(chain2.evaluator, frame_i, sampling.sample_on_level(rng, par, 1.5), par)
        )
        worst_half = max(worst_half, float(r))
    dt = time.perf_counter() - t0
    ok = worst_ratio < 1e-9 and worst_half < 1e-7 and dt < 120
    _line(6, "initial data conditions", ok, f"ratio {worst_ratio:.3e} < 1e-9, bilinear {worst_half:.3e} < 1e-7, {dt:.1f}s/120s")


def test_criterion_07_recursion_and_chain_families(chain2):
    t0 = time.perf_counter()
    rng = sampling.make_rng(206)
    par = CHAIN_PARAMS
    c0, c1 = chain2.components[0], chain2.components[1]
    frame8 = lattice.frame_containing(tau.A1_VECTORS[0])
    pairs = list(itertools.combinations(range(2, 8), 2))
    assert len(pairs) == 15

    def spread_once():
        x = sampling.sample_on_level(rng, par, 2)
        vals = [tau.toda_step(c0, c1, frame8, i, j, x, par) for i, j in pairs]
        vals.append(chain2.value(2, x))
        return max(abs(v - vals[0]) for v in vals) / abs(vals[0])

    spread = _resampled(spread_once)

    frames3 = lattice.enumerate_frames(3)
    by_type = {t: [f for f in frames3 if f.frame_type is t] for t in lattice.FrameType}
    worst = 0.0
    for ftype, level in (
        (lattice.FrameType.C3_II2, 1),
        (lattice.FrameType.C3_I, 1.5),
        (lattice.FrameType.C3_II0, 2),
    ):
        fam = by_type[ftype]
        for _ in range(10):
            def family_once():
                f = fam[int(rng.integers(len(fam)))]
                x = sampling.sample_on_level(rng, par, level)
                return float(tau.hirota_residual(chain2.evaluator, f, x, par))

            worst = max(worst, _resampled(family_once))
    dt = time.perf_counter() - t0
    ok = spread < 1e-8 and worst < 1e-7 and dt < 300
    _line(7, "recursion and chain families", ok, f"spread {spread:.3e} < 1e-8, families {worst:.3e} < 1e-7, {dt:.1f}s/300s")


def test_criterion_08_determinant_vs_quadrature():
    t0 = time.perf_counter()
    rng = sampling.make_rng(207)
    par = CHAIN_PARAMS
    worst = 0.0
    for _ in range(3):
        def once():
            x = sampling.sample_on_level(rng, par, 2)
            det = tau.tau_n_det(2, x, "frame_a0", par)
            quad = tau.tau_n_int(2, x, "direct", par)
            return abs(det - quad) / max(abs(det), abs(quad))

        worst = max(worst, _resampled(once))
    dt = time.perf_counter() - t0
    _line(8, "determinant vs quadrature", worst < 1e-6 and dt < 300, f"worst {worst:.3e} < 1e-6, {dt:.1f}s/300s")


def test_criterion_09_factorial_determinant():
    t0 = time.perf_counter()
    rng = sampling.make_rng(208)
    ok = True
    worst = {2: 0.0, 3: 0.0}
    for n, tol in ((2, 1e-10), (3, 1e-9)):
        for _ in range(10):
            a = 0.4 * e(rng.random())
            b = 0.55 * e(rng.random())
            zs = [np.exp(rng.uniform(np.log(0.5), np.log(0.9))) * e(rng.random()) for _ in range(n)]
            r = float(tau.warnaar_det_residual(a, b, zs, n, CHAIN_PARAMS))
            worst[n] = max(worst[n], r)
        ok = ok and worst[n] < tol
    dt = time.perf_counter() - t0
    _line(9, "factorial determinant", ok and dt < 30, f"n=2 {worst[2]:.3e} < 1e-10, n=3 {worst[3]:.3e} < 1e-9, {dt:.1f}s/30s")


def test_criterion_10_multiplicity_two_transformations():
    t0 = time.perf_counter()
    rng = sampling.make_rng(209)
    par = BAILEY_PARAMS
    worst = 0.0
    for _ in range(3):
        t = sampling.sample_balanced(rng, par.p**2, abs(par.p) ** 0.25)
        ctx = IntegrandContext(u=t, params=par, n=2)
        worst = max(worst, float(integrals.In_transform_residual(ctx, "tilde_n")))
        worst = max(worst, float(integrals.In_transform_residual(ctx, "hat_n")))
    dt = time.perf_counter() - t0
    _line(10, "multiplicity-two transformations", worst < 1e-6 and dt < 300, f"worst {worst:.3e} < 1e-6, {dt:.1f}s/300s")


def test_criterion_11_terminating_series():
    t0 = time.perf_counter()
    rng = sampling.make_rng(210)
    par = TERM_PARAMS
    p, q = par.p, par.q
    worst = 0.0
    for order in (1, 2):
        u0 = 0.45 * e(rng.random())
        u1 = q ** (order + 1) / u0
        mid = [(0.75 if order < 2 else 0.9) * e(t) for t in rng.random(5)]
        prod_mid = 1.0 + 0j
        for v in mid:
            prod_mid *= v
        u7 = q ** (1 - order) / prod_mid
        u = (u0, u1, *mid, u7)
        lhs = integrals.I(IntegrandContext(u=(p * u[0], *u[1:7], p * u[7]), params=par))
        rhs = integrals.terminating_eval(u, par, order)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    dt = time.perf_counter() - t0
    _line(11, "terminating series", worst < 1e-9 and dt < 60, f"worst {worst:.3e} < 1e-9, {dt:.1f}s/60s")


def test_criterion_12_rank_ten_lattice(pm_eval):
    t0 = time.perf_counter()
    rng = sampling.make_rng(211)
    par = CHAIN_PARAMS

    h = picard.pic(2, -1, 3, 0, 1, -2, 4, 1, -1, 2)
    a = picard.AFFINE_ROOTS[2]
    b = picard.AFFINE_ROOTS[5] + picard.AFFINE_ROOTS[0]
    kac_ok = (
        picard.kac_translate(a, picard.kac_translate(b, h)) == picard.kac_translate(a + b, h)
        and picard.kac_translate(picard.C, h) == h
        and picard.kac_translate(a, picard.C) == picard.C
        and picard.picard_ip(picard.kac_translate(a, h), picard.kac_translate(a, h))
        == picard.picard_ip(h, h)
        and picard.picard_ip(picard.C, picard.D) == Fraction(1)
    )

    worst_rt = 0.0
    for _ in range(10):
        x = 0.3 * (rng.standard_normal(8) + 1j * rng.standard_normal(8))
        mu = complex(rng.standard_normal(), rng.standard_normal())
        kappa = 0.3 + 0.4 * rng.random()
        eps = picard.coords_forward(x, mu, kappa)
        xb, mub, kapb = picard.coords_back(eps)
        worst_rt = max(worst_rt, float(np.max(np.abs(xb - x))), abs(mub - mu), abs(kapb - kappa))

    lev2 = -par.varpi + 2 * par.delta
    m2 = abs(e(lev2)) ** 0.25
    quads = ((1, 2, 3, 4), (2, 5, 7, 3), (1, 3, 6, 7), (4, 6, 2, 9), (1, 2, 3, 8))
    worst_h = 0.0
    for quad in quads:
        def lattice_once(quad=quad):
            x = sampling.sample_level_x(rng, lev2, (0.95 * m2, 1.05 * m2), (m2 / 1.2, 1.2 * m2))
            mu = 0.3 * complex(rng.standard_normal(), rng.standard_normal())
            eps = picard.coords_forward(x, mu, par.delta)
            return float(picard.quadruple_hirota_residual(pm_eval, (), eps, quad))

        worst_h = max(worst_h, _resampled(lattice_once))
    dt = time.perf_counter() - t0
    ok = kac_ok and worst_rt < 1e-12 and worst_h < 1e-6 and dt < 120
    _line(12, "rank-ten lattice", ok, f"kac exact {kac_ok}, round-trip {worst_rt:.3e} < 1e-12, bilinear {worst_h:.3e} < 1e-6, {dt:.1f}s/120s")


def test_criterion_13_negative_control():
    t0 = time.perf_counter()
    rng = sampling.make_rng(212)
    par = HIROTA_PARAMS
    base = tau.canonical_tau(0.21 + 0.05j, par)
    broken = tau.TauEvaluator(lambda x: base.fn(x) + 1.0, par)
    frames = lattice.enumerate_frames(3)
    smallest = np.inf
    for _ in range(5):
        f = frames[int(rng.integers(len(frames)))]
        x = 0.1 * (rng.standard_normal(8) + 1j * rng.standard_normal(8))
        r = tau.hirota_residual(broken, f, x, par)
        if not r.degenerate:
            smallest = min(smallest, float(r))
    dt = time.perf_counter() - t0
    _line(13, "negative control", smallest > 1e-2 and dt < 5, f"smallest broken residual {smallest:.3e} > 1e-2, {dt:.1f}s/5s")
