"""Contour quadrature for the one- and multi-dimensional elliptic beta
integrals, with their transformation, contiguity, and terminating-series
identities as residual checks.

All integrals run over the positively oriented unit circle with uniform
trapezoidal nodes; parameters must keep the pole sets strictly inside/outside,
which is guaranteed by |u_k| < 1.
"""
from __future__ import annotations

import cmath
import dataclasses
import itertools
from dataclasses import dataclass
from math import factorial

import numpy as np

from .specialfn import EllipticParams, elliptic_gamma, qpoch, theta, triple_gamma, v12_11
from .util import AdmissibilityError, ConvergenceError, Residual

QUAD_TOL = 1e-11
_CAPS = {1: 4096, 2: 1024, 3: 256}


@dataclass(frozen=True)
class IntegrandContext:
    """Eight integral parameters plus bases and quadrature resolution."""

    u: tuple[complex, ...]
    params: EllipticParams
    n: int = 1
    quad_points: int = 256

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(complex(v) for v in self.u))
        if len(self.u) != 8:
            raise ValueError("need exactly eight parameters")
        if self.n < 0:
            raise ValueError("multiplicity must be nonnegative")

    def with_u(self, u) -> "IntegrandContext":
        return dataclasses.replace(self, u=tuple(complex(v) for v in u))

    def check_admissible(self) -> None:
        for k, uk in enumerate(self.u):
            if abs(uk) >= 1.0:
                raise AdmissibilityError(f"|u_{k}| = {abs(uk):.6f} >= 1")
        # Genericity u_k u_l not in p^-N q^-N: with every |u_k| < 1 the only
        # reachable lattice point is 1, so a pair product near 1 pinches C.
        for k, l in itertools.combinations(range(8), 2):
            if abs(self.u[k] * self.u[l] - 1.0) < 1e-12:
                raise AdmissibilityError(f"u_{k} u_{l} within 1e-12 of 1")


def integrand_H(z, ctx: IntegrandContext):
    """Integrand: product of Gamma(u_k z^{+-1}) over Gamma(z^{+-2}).

    The reciprocal of the denominator is expanded into two theta factors, so
    only the eight numerator gamma evaluations remain.
    """
    p, q, tol = ctx.params.p, ctx.params.q, ctx.params.trunc_tol
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    out = -(zz**-2) * theta(zz**2, p, tol) * theta(zz**2, q, tol)
    for uk in ctx.u:
        out = out * elliptic_gamma(uk * zz, p, q, tol) * elliptic_gamma(uk / zz, p, q, tol)
    return complex(out[0]) if np.asarray(z).ndim == 0 else out


def _prefactor(params: EllipticParams) -> complex:
    return qpoch(params.p, params.p, params.trunc_tol) * qpoch(
        params.q, params.q, params.trunc_tol
    )


def _node_integrand(ctx: IntegrandContext, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Integrand values at the N-th roots of unity, sharing gamma arrays.

    Gamma(u_k / z_m) equals Gamma(u_k z) at the reflected node index, so each
    parameter costs one vectorized gamma evaluation.
    """
    p, q, tol = ctx.params.p, ctx.params.q, ctx.params.trunc_tol
    m = np.arange(N)
    zs = np.exp(2j * np.pi * m / N)
    rev = (-m) % N
    vals = -(zs**-2) * theta(zs**2, p, tol) * theta(zs**2, q, tol)
    for uk in ctx.u:
        g = elliptic_gamma(uk * zs, p, q, tol)
        vals = vals * g * g[rev]
    return vals, zs


def _quad(ctx: IntegrandContext, N: int) -> complex:
    n = ctx.n
    if n == 0:
        return 1.0 + 0j
    pref = _prefactor(ctx.params)
    h, zs = _node_integrand(ctx, N)
    if n == 1:
        return pref / (2 * N) * complex(np.sum(h))
    # cross factor theta(z_i^{+-1} z_j^{+-1}; p): four thetas collapse to a
    # lookup over node-index sums and differences
    p, tol = ctx.params.p, ctx.params.trunc_tol
    m = np.arange(N)
    tp = theta(zs, p, tol)
    pair = tp * tp[(-m) % N]
    scale = pref**n / (2**n * factorial(n) * N**n)
    if n == 2:
        s_idx = (m[:, None] + m[None, :]) % N
        d_idx = (m[:, None] - m[None, :]) % N
        total = np.sum(h[:, None] * h[None, :] * pair[s_idx] * pair[d_idx])
        return scale * complex(total)
    if n == 3:
        s_idx = (m[:, None] + m[None, :]) % N
        d_idx = (m[:, None] - m[None, :]) % N
        grid23 = pair[s_idx] * pair[d_idx]
        total = 0.0 + 0j
        for m1 in range(N):
            f1 = pair[(m1 + m) % N] * pair[(m1 - m) % N]
            total += h[m1] * np.sum((h * f1)[:, None] * (h * f1)[None, :] * grid23)
        return scale * complex(total)
    raise ValueError("multiplicity above 3 is out of scope")


def I(ctx: IntegrandContext, quad_tol: float = QUAD_TOL, adaptive: bool = True) -> complex:
    """One-dimensional integral by adaptive trapezoid on the unit circle."""
    return I_n(dataclasses.replace(ctx, n=1), quad_tol=quad_tol, adaptive=adaptive)


def I_n(
    ctx: IntegrandContext,
    quad_tol: float = QUAD_TOL,
    adaptive: bool = True,
    slow_ok: bool = False,
) -> complex:
    """n-dimensional tensor quadrature with the 2^n n! normalization."""
    if ctx.n == 0:
        return 1.0 + 0j
    if ctx.n == 3 and not slow_ok:
        raise ValueError("three-dimensional quadrature is slow; pass slow_ok=True")
    if ctx.n not in _CAPS:
        raise ValueError("multiplicity above 3 is out of scope")
    ctx.check_admissible()
    cap = _CAPS[ctx.n]
    N = min(ctx.quad_points, cap)
    if not adaptive:
        return _quad(ctx, N)
    prev = _quad(ctx, N)
    while True:
        if 2 * N > cap:
            raise ConvergenceError(f"node cap {cap} reached", prev, prev)
        N *= 2
        cur = _quad(ctx, N)
        if abs(cur - prev) <= quad_tol * max(abs(cur), 1e-300):
            return cur
        if 2 * N > cap:
            raise ConvergenceError(f"node cap {cap} reached before stabilizing", cur, prev)
        prev = cur


def _theta_pm(a: complex, b: complex, p: complex, tol: float) -> complex:
    return theta(a * b, p, tol) * theta(a / b, p, tol)


def contiguity_residual(
    ctx: IntegrandContext,
    i: int,
    j: int,
    k: int,
    form: str = "multiplicative",
    quad_tol: float = QUAD_TOL,
) -> Residual:
    """Residual of the three-term contiguity relation in the q-shifts."""
    if len({i, j, k}) != 3:
        raise ValueError("need three distinct indices")
    u = list(ctx.u)
    p, q, tol = ctx.params.p, ctx.params.q, ctx.params.trunc_tol

    def shifted(idx: int) -> complex:
        v = list(u)
        v[idx] = q * v[idx]
        return I(ctx.with_u(v), quad_tol=quad_tol)

    Ii, Ij, Ik = shifted(i), shifted(j), shifted(k)
    if form == "multiplicative":
        terms = [
            u[k] * _theta_pm(u[j], u[k], p, tol) * Ii,
            u[i] * _theta_pm(u[k], u[i], p, tol) * Ij,
            u[j] * _theta_pm(u[i], u[j], p, tol) * Ik,
        ]
    elif form == "additive":
        # bracket coefficients written multiplicatively:
        # [x_j +- x_k] = theta(u_j u_k^{+-1}; p) / u_j
        terms = [
            _theta_pm(u[j], u[k], p, tol) / u[j] / u[i] * Ii,
            _theta_pm(u[k], u[i], p, tol) / u[k] / u[j] * Ij,
            _theta_pm(u[i], u[j], p, tol) / u[i] / u[k] * Ik,
        ]
    else:
        raise ValueError("form must be 'multiplicative' or 'additive'")
    scale = max(abs(t) for t in terms)
    if scale == 0.0:
        return Residual(0.0, degenerate=True)
    return Residual(abs(sum(terms)) / scale)


def _check_balancing(u, target: complex, what: str) -> None:
    prod = 1.0 + 0j
    for v in u:
        prod *= v
    if abs(prod - target) > 1e-12 * abs(target):
        raise ValueError(f"balancing violated: product of parameters != {what}")


def _tilde(u, s: complex):
    b1 = u[0] * u[1] * u[2] * u[3]
    b2 = u[4] * u[5] * u[6] * u[7]
    s1, s2 = cmath.sqrt(s / b1), cmath.sqrt(s / b2)
    return tuple(u[i] * (s1 if i < 4 else s2) for i in range(8))


def bailey_residual(
    ctx: IntegrandContext, which: str = "tilde", quad_tol: float = QUAD_TOL
) -> Residual:
    """Relative error of the two transformation formulas for the 1D integral."""
    u = ctx.u
    p, q, tol = ctx.params.p, ctx.params.q, ctx.params.trunc_tol
    _check_balancing(u, (p * q) ** 2, "p^2 q^2")
    lhs = I(ctx, quad_tol=quad_tol)
    if which == "tilde":
        image = _tilde(u, p * q)
        pref = 1.0 + 0j
        for a, b in itertools.chain(
            itertools.combinations(range(4), 2), itertools.combinations(range(4, 8), 2)
        ):
            pref *= elliptic_gamma(u[a] * u[b], p, q, tol)
    elif which == "hat":
        s = cmath.sqrt(p * q)
        image = tuple(s / v for v in u)
        pref = 1.0 + 0j
        for a, b in itertools.combinations(range(8), 2):
            pref *= elliptic_gamma(u[a] * u[b], p, q, tol)
    else:
        raise ValueError("which must be 'tilde' or 'hat'")
    rhs = I(ctx.with_u(image), quad_tol=quad_tol) * pref
    return Residual(abs(lhs - rhs) / abs(lhs))


def psi_value(ctx: IntegrandContext, quad_tol: float = QUAD_TOL) -> complex:
    """Triple-gamma weighted integral, invariant under both transformations."""
    r = ctx.params.r
    if r is None:
        raise ValueError("needs a third base r")
    p, q, tol = ctx.params.p, ctx.params.q, ctx.params.trunc_tol
    out = I(ctx, quad_tol=quad_tol)
    for a, b in itertools.combinations(range(8), 2):
        out *= triple_gamma(ctx.u[a] * ctx.u[b], p, q, r, tol)
    return out


def psi_n_value(ctx: IntegrandContext, quad_tol: float = QUAD_TOL, **kw) -> complex:
    """Multiplicity-n variant, weighted with the (p, q, q) triple gamma."""
    p, q, tol = ctx.params.p, ctx.params.q, ctx.params.trunc_tol
    out = I_n(ctx, quad_tol=quad_tol, **kw)
    for a, b in itertools.combinations(range(8), 2):
        out *= triple_gamma(ctx.u[a] * ctx.u[b], p, q, q, tol)
    return out


def In_transform_residual(
    ctx: IntegrandContext, which: str = "tilde_n", quad_tol: float = QUAD_TOL
) -> Residual:
    """Relative error of the multiplicity-n transformation formulas."""
    n, t = ctx.n, ctx.u
    if n > 2:
        raise ValueError("transforms are checked for multiplicity at most 2")
    p, q, tol = ctx.params.p, ctx.params.q, ctx.params.trunc_tol
    _check_balancing(t, p**2 * q ** (4 - 2 * n), "p^2 q^{4-2n}")
    s = p * q ** (2 - n)
    if which == "tilde_n":
        image = _tilde(t, s)
        pairs = list(
            itertools.chain(
                itertools.combinations(range(4), 2), itertools.combinations(range(4, 8), 2)
            )
        )
    elif which == "hat_n":
        root = cmath.sqrt(s)
        image = tuple(root / v for v in t)
        pairs = list(itertools.combinations(range(8), 2))
    else:
        raise ValueError("which must be 'tilde_n' or 'hat_n'")
    ratio = 1.0 + 0j
    for a, b in pairs:
        ratio *= triple_gamma(q**n * t[a] * t[b], p, q, q, tol) / triple_gamma(
            t[a] * t[b], p, q, q, tol
        )
    lhs = I_n(ctx, quad_tol=quad_tol)
    rhs = I_n(ctx.with_u(image), quad_tol=quad_tol) * ratio
    return Residual(abs(lhs - rhs) / abs(lhs))


def terminating_eval(
    u, params: EllipticParams, N: int, variant: str = "u0u7_pshift"
) -> complex:
    """Closed form of I(p u_0, u_1, ..., u_6, p u_7) as a terminating series.

    The parameters must multiply to q^2 and satisfy one of the termination
    conditions q/u_0 u_i = q^{-N} (i in 1..6) or q/u_0 u_7 = p q^{-N}.
    """
    if variant != "u0u7_pshift":
        raise ValueError("unknown variant")
    u = tuple(complex(v) for v in u)
    if len(u) != 8:
        raise ValueError("need exactly eight parameters")
    p, q, tol = params.p, params.q, params.trunc_tol
    _check_balancing(u, q**2, "q^2")
    ok = any(abs(q / (u[0] * u[i]) - q**-N) < 1e-9 * abs(q**-N) for i in range(1, 7))
    ok = ok or abs(q / (u[0] * u[7]) - p * q**-N) < 1e-9 * abs(p * q**-N)
    if not ok:
        raise ValueError("no parameter satisfies the termination condition")
    pref = 1.0 + 0j
    for a, b in itertools.combinations(range(1, 7), 2):
        pref *= elliptic_gamma(u[a] * u[b], p, q, tol)
    pref *= elliptic_gamma(q**2 / u[0] ** 2, p, q, tol) * elliptic_gamma(u[0] / u[7], p, q, tol)
    for k in range(1, 7):
        pref /= elliptic_gamma(q * u[k] / u[0], p, q, tol) * elliptic_gamma(
            q / (u[k] * u[7]), p, q, tol
        )
    series = v12_11(q / u[0] ** 2, [q / (u[0] * u[i]) for i in range(1, 8)], q, p, tol)
    return pref * series
