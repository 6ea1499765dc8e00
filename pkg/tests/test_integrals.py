"""Contour quadrature and the integral identities."""
from __future__ import annotations

import dataclasses
import itertools

import numpy as np
import pytest

from e8tau import sampling
from e8tau.integrals import (
    I,
    I_n,
    In_transform_residual,
    IntegrandContext,
    bailey_residual,
    contiguity_residual,
    integrand_H,
    psi_value,
    terminating_eval,
)
from e8tau.specialfn import EllipticParams, elliptic_gamma, theta
from e8tau.util import AdmissibilityError, ConvergenceError, e

from . import _oracles as O
from . import _quad_oracles as Q

PARAMS = EllipticParams.from_bases(0.15, 0.1)
U_FIXED = tuple(0.3 * e(k / 11) for k in range(8))


def _ctx(u=U_FIXED, params=PARAMS, **kw):
    return IntegrandContext(u=u, params=params, **kw)


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_integrand_spot_value():
    assert _rel(integrand_H(e(0.17), _ctx()), O.INTEGRAND_SPOT) < 1e-12


def test_integrand_inversion_symmetry():
    rng = sampling.make_rng(101)
    for _ in range(20):
        z = e(rng.random())
        h = integrand_H(z, _ctx())
        assert _rel(integrand_H(1 / z, _ctx()), h) < 1e-12


def test_integrand_vanishes_at_unit_argument():
    # the denominator has a pole of the gamma pair at z = +-1
    direct = integrand_H(1.0 + 0j, _ctx())
    composed = -theta(1.0 + 0j, PARAMS.p) * theta(1.0 + 0j, PARAMS.q)
    for uk in U_FIXED:
        composed *= elliptic_gamma(uk, PARAMS.p, PARAMS.q) ** 2
    assert direct == composed == 0.0


def test_integrand_q_shift_ratio():
    rng = sampling.make_rng(103)
    p = PARAMS.p
    for _ in range(10):
        z = e(rng.random())
        base = integrand_H(z, _ctx())
        shifted_u = (PARAMS.q * U_FIXED[0], *U_FIXED[1:])
        shifted = integrand_H(z, _ctx(u=shifted_u))
        ratio = theta(U_FIXED[0] * z, p) * theta(U_FIXED[0] / z, p)
        assert _rel(shifted / base, ratio) < 1e-11


def test_fixed_point_values():
    assert _rel(I(_ctx()), Q.I1_FIXED) < 1e-11
    assert _rel(I_n(_ctx(n=2, quad_points=64)), Q.I2_FIXED) < 1e-11


def test_permutation_invariance_and_sum_order():
    rng = sampling.make_rng(107)
    base = I(_ctx())
    for _ in range(4):
        perm = rng.permutation(8)
        assert _rel(I(_ctx(u=tuple(U_FIXED[int(i)] for i in perm))), base) < 1e-12
    # node summation is pairwise: reversing the accumulation order is inert
    from e8tau.integrals import _node_integrand

    h, _ = _node_integrand(_ctx(), 256)
    assert abs(np.sum(h) - np.sum(h[::-1])) <= 1e-14 * abs(np.sum(h))


def test_real_parameters_give_real_value():
    u = (0.3, 0.25, -0.2, 0.15, 0.35, -0.4, 0.1, 0.05)
    val = I(_ctx(u=u))
    assert abs(val.imag) / abs(val) < 1e-10


def test_multiplicity_zero_and_one():
    assert I_n(_ctx(n=0)) == 1.0 + 0j
    assert _rel(I_n(_ctx(n=1)), I(_ctx())) < 1e-12


def test_spectral_convergence():
    u = tuple(0.82 * e(k / 13) for k in range(8))
    ref = I(_ctx(u=u, quad_points=512), adaptive=False)
    errs = [
        abs(I(_ctx(u=u, quad_points=N), adaptive=False) - ref) / abs(ref) for N in (32, 64, 128)
    ]
    assert errs[1] < 0.05 * errs[0]
    assert errs[2] < 0.05 * errs[1]
    assert errs[2] > 0.0


def test_admissibility_guards():
    bad = (1.2, *U_FIXED[1:])
    with pytest.raises(AdmissibilityError):
        I(_ctx(u=bad))
    # a pair product within 1e-12 of 1 pinches the contour; both factors can
    # still sit strictly inside the disk
    c = (1.0 - 1e-13) ** 0.5
    pinched = (c, c, *U_FIXED[2:])
    with pytest.raises(AdmissibilityError):
        I(_ctx(u=pinched))


def test_convergence_error_carries_estimates():
    u = tuple(0.997 * e(k / 13) for k in range(8))
    with pytest.raises(ConvergenceError) as exc:
        I(_ctx(u=u, quad_points=64), quad_tol=1e-14)
    assert exc.value.last != 0 or exc.value.previous != 0


def test_contiguity_residual_both_forms():
    rng = sampling.make_rng(109)
    for trial in range(3):
        u = tuple(0.4 * e(t) for t in rng.random(8))
        for form in ("multiplicative", "additive"):
            res = contiguity_residual(_ctx(u=u), 0, 3, 6, form=form)
            assert res < 1e-8, (trial, form, float(res))


def test_contiguity_with_coincident_parameters():
    rng = sampling.make_rng(113)
    u = list(0.4 * e(t) for t in rng.random(8))
    u[1] = u[2]
    res = contiguity_residual(_ctx(u=tuple(u)), 1, 2, 5)
    assert res < 1e-8


def test_bailey_both_variants_and_weighted_invariance():
    p, q = PARAMS.p, PARAMS.q
    rho = abs(p * q) ** 0.25
    rng = sampling.make_rng(127)
    params_r = EllipticParams.from_bases(p, q, r=0.12)
    for _ in range(2):
        u = sampling.sample_balanced(rng, (p * q) ** 2, rho)
        ctx = IntegrandContext(u=u, params=params_r)
        assert bailey_residual(ctx, "tilde") < 1e-8
        assert bailey_residual(ctx, "hat") < 1e-8
        from e8tau.integrals import _tilde

        psi_u = psi_value(ctx)
        psi_t = psi_value(ctx.with_u(_tilde(u, p * q)))
        assert _rel(psi_t, psi_u) < 1e-8


def test_bailey_requires_balancing():
    with pytest.raises(ValueError):
        bailey_residual(_ctx(), "tilde")


def test_transform_multiplicity_one_matches_bailey():
    p, q = PARAMS.p, PARAMS.q
    rng = sampling.make_rng(131)
    u = sampling.sample_balanced(rng, p**2 * q**2, abs(p * q) ** 0.25)
    ctx = _ctx(u=u, n=1)
    assert In_transform_residual(ctx, "tilde_n") < 1e-8
    assert In_transform_residual(ctx, "hat_n") < 1e-8


def test_transform_multiplicity_two():
    p, q = PARAMS.p, PARAMS.q
    rng = sampling.make_rng(137)
    t = sampling.sample_balanced(rng, p**2, abs(p) ** 0.25)
    ctx = _ctx(u=t, n=2, quad_points=64)
    assert In_transform_residual(ctx, "tilde_n") < 1e-6
    assert In_transform_residual(ctx, "hat_n") < 1e-6


def _terminating_family(rng, N: int, params: EllipticParams):
    """u with product q^2, q/u_0 u_1 = q^{-N}, solved last slot."""
    p, q = params.p, params.q
    u0 = 0.45 * e(rng.random())
    u1 = q ** (N + 1) / u0
    mid_mod = 0.75 if N < 2 else 0.9
    mid = [mid_mod * e(t) for t in rng.random(5)]
    prod_mid = 1.0 + 0j
    for v in mid:
        prod_mid *= v
    u7 = q ** (1 - N) / prod_mid
    return (u0, u1, *mid, u7)


@pytest.mark.parametrize("order", [0, 1, 2])
def test_terminating_series_matches_quadrature(order):
    params = EllipticParams.from_bases(0.05, 0.15)
    rng = sampling.make_rng(139 + order)
    u = _terminating_family(rng, order, params)
    p = params.p
    lhs_args = (p * u[0], *u[1:7], p * u[7])
    assert all(abs(v) < 1 for v in lhs_args)
    lhs = I(IntegrandContext(u=lhs_args, params=params))
    rhs = terminating_eval(u, params, order)
    assert _rel(lhs, rhs) < 1e-9


def test_terminating_eval_guards():
    params = EllipticParams.from_bases(0.05, 0.15)
    rng = sampling.make_rng(149)
    u = _terminating_family(rng, 1, params)
    with pytest.raises(ValueError):
        terminating_eval(u, params, 3)  # wrong order
    with pytest.raises(ValueError):
        terminating_eval((0.3,) * 8, params, 1)  # unbalanced
