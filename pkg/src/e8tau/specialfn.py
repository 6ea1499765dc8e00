"""Theta functions, elliptic gamma functions, the additive bracket, and the
very well-poised terminating series. All products are truncated once the
remaining factors differ from 1 by less than ``trunc_tol``."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .util import PoleError, Residual, TerminationError, e

DEFAULT_TRUNC_TOL = 1e-18
POLE_EPS = 1e-12


@dataclass(frozen=True)
class EllipticParams:
    """Multiplicative bases with their additive periods.

    p = e(varpi) and q = e(delta); r is an optional third base for the
    triple-gamma weightings.
    """

    p: complex
    q: complex
    varpi: complex
    delta: complex
    r: complex | None = None
    trunc_tol: float = DEFAULT_TRUNC_TOL

    @staticmethod
    def from_bases(
        p: complex, q: complex, r: complex | None = None, trunc_tol: float = DEFAULT_TRUNC_TOL
    ) -> "EllipticParams":
        if not (0 < abs(p) < 1 and 0 < abs(q) < 1):
            raise ValueError("bases must satisfy 0 < |p|, |q| < 1")
        if r is not None and not 0 < abs(r) < 1:
            raise ValueError("third base must satisfy 0 < |r| < 1")
        two_pi_i = 2j * cmath.pi
        return EllipticParams(
            p=complex(p),
            q=complex(q),
            varpi=cmath.log(p) / two_pi_i,
            delta=cmath.log(q) / two_pi_i,
            r=None if r is None else complex(r),
            trunc_tol=trunc_tol,
        )


def _as_array(z) -> tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=complex)
    return np.atleast_1d(arr), arr.ndim == 0


def theta(z, p: complex, trunc_tol: float = DEFAULT_TRUNC_TOL):
    """Jacobi theta: product of (1 - p^i z)(1 - p^{i+1}/z) over i >= 0."""
    zz, scalar = _as_array(z)
    if np.any(zz == 0):
        raise ValueError("theta argument must be nonzero")
    ap = abs(p)
    big = max(float(np.max(np.abs(zz))), float(np.max(ap / np.abs(zz))), 1.0)
    out = np.ones_like(zz)
    pi_pow = 1.0 + 0j
    i = 0
    while True:
        out *= (1.0 - pi_pow * zz) * (1.0 - pi_pow * p / zz)
        i += 1
        pi_pow *= p
        if ap**i * big < trunc_tol:
            break
    return complex(out[0]) if scalar else out


def qpoch(z, p: complex, trunc_tol: float = DEFAULT_TRUNC_TOL):
    """(z; p)_infinity."""
    zz, scalar = _as_array(z)
    big = max(float(np.max(np.abs(zz))), 1.0)
    out = np.ones_like(zz)
    pi_pow = 1.0 + 0j
    i = 0
    while True:
        out *= 1.0 - pi_pow * zz
        i += 1
        pi_pow *= p
        if abs(p) ** i * big < trunc_tol:
            break
    return complex(out[0]) if scalar else out


def elliptic_gamma(
    z,
    p: complex,
    q: complex,
    trunc_tol: float = DEFAULT_TRUNC_TOL,
    pole_eps: float = POLE_EPS,
):
    """Ruijsenaars gamma: (pq/z; p,q)_inf / (z; p,q)_inf.

    Raises PoleError when some 1 - p^i q^j z factor is within pole_eps of 0;
    the pole lattice has modulus >= 1, so arguments inside the unit disk are
    always safe.
    """
    zz, scalar = _as_array(z)
    if np.any(zz == 0):
        raise ValueError("gamma argument must be nonzero")
    ap, aq = abs(p), abs(q)
    pq = p * q
    big = max(float(np.max(np.abs(zz))), float(np.max(abs(pq) / np.abs(zz))), 1.0)
    out = np.ones_like(zz)
    p_pow = 1.0 + 0j
    i = 0
    while ap**i * big >= trunc_tol:
        q_pow = 1.0 + 0j
        j = 0
        while ap**i * aq**j * big >= trunc_tol:
            den = 1.0 - p_pow * q_pow * zz
            small = np.abs(den) < pole_eps
            if np.any(small):
                bad = zz[small][0]
                raise PoleError(complex(bad), i, j)
            out *= (1.0 - (p_pow * p) * (q_pow * q) / zz) / den
            j += 1
            q_pow *= q
        i += 1
        p_pow *= p
    return complex(out[0]) if scalar else out


def _power_column(base: complex, big: float, trunc_tol: float) -> np.ndarray:
    """Powers base^0..base^m while |base|^m * big stays above trunc_tol."""
    count, mag = 1, abs(base)
    while mag ** count * big >= trunc_tol:
        count += 1
    out = np.empty(count, dtype=complex)
    out[0] = 1.0
    for i in range(1, count):
        out[i] = out[i - 1] * base
    return out


def triple_gamma(
    z, p: complex, q: complex, r: complex, trunc_tol: float = DEFAULT_TRUNC_TOL
):
    """Entire triple gamma: (z; p,q,r)_inf (pqr/z; p,q,r)_inf.

    The exponent simplex |p^i q^j r^k| >= trunc_tol/big is enumerated as one
    flat array so the factor products run vectorized.
    """
    zz, scalar = _as_array(z)
    if np.any(zz == 0):
        raise ValueError("gamma argument must be nonzero")
    pqr = p * q * r
    big = max(float(np.max(np.abs(zz))), float(np.max(abs(pqr) / np.abs(zz))), 1.0)
    pi = _power_column(p, big, trunc_tol)
    qj = _power_column(q, big, trunc_tol)
    rk = _power_column(r, big, trunc_tol)
    w = (pi[:, None, None] * qj[None, :, None] * rk[None, None, :]).ravel()
    w = w[np.abs(w) * big >= trunc_tol]
    out = np.ones_like(zz)
    step = max(1, 2_000_000 // zz.size)
    for s in range(0, w.size, step):
        ws = w[s : s + step]
        out = out * np.prod(
            (1.0 - ws[:, None] * zz[None, :]) * (1.0 - (ws * pqr)[:, None] / zz[None, :]),
            axis=0,
        )
    return complex(out[0]) if scalar else out


def theta_pochhammer(z, k: int, p: complex, q: complex, trunc_tol: float = DEFAULT_TRUNC_TOL):
    """theta(z; p) theta(qz; p) ... theta(q^{k-1} z; p)."""
    if k < 0:
        raise ValueError("nonnegative order required")
    out = 1.0 + 0j
    zz = complex(z)
    for _ in range(k):
        out *= theta(zz, p, trunc_tol)
        zz *= q
    return out


_MAX_PERIOD_SHIFTS = 64


def bracket(zeta: complex, params: EllipticParams) -> complex:
    """Odd quasi-periodic bracket e(-zeta/2) theta(e(zeta); p).

    The argument is first reduced modulo the period varpi into the strip
    |Im(zeta)/Im(varpi)| <= 1/2 using the quasi-periodicity multipliers, so
    that e(zeta) stays within [sqrt|p|, 1/sqrt|p|] in modulus.
    """
    varpi = params.varpi
    mult = 1.0 + 0j
    z = complex(zeta)
    for _ in range(_MAX_PERIOD_SHIFTS):
        # writing z = a + b*varpi with a, b real: b is fixed by imaginary parts
        b = z.imag / varpi.imag
        if b > 0.5 + 1e-12:
            # descend one period: [z] = -e(-z + varpi/2) [z - varpi]
            mult *= -e(-z + varpi / 2)
            z -= varpi
        elif b < -0.5 - 1e-12:
            # ascend one period: [z] = -e(z + varpi/2) [z + varpi]
            mult *= -e(z + varpi / 2)
            z += varpi
        else:
            break
    else:
        raise ValueError("period reduction did not converge")
    return mult * e(-z / 2) * theta(e(z), params.p, params.trunc_tol)


def bracket_pm(x: complex, y: complex, params: EllipticParams) -> complex:
    """[x + y][x - y], the two-factor abbreviation."""
    return bracket(x + y, params) * bracket(x - y, params)


def three_term_residual(
    z: complex,
    alpha: complex,
    beta: complex,
    gamma: complex,
    params: EllipticParams | None = None,
    fn: Callable[[complex], complex] | None = None,
) -> Residual:
    """Normalized residual of the fundamental three-term relation.

    Evaluates [b±c][z±a] + [c±a][z±b] + [a±b][z±c] with the elliptic bracket
    (or any supplied odd function fn) and divides by the largest term.
    """
    if fn is None:
        if params is None:
            raise ValueError("need params for the elliptic bracket")
        fn = lambda w: bracket(w, params)
    pm = lambda x, y: fn(x + y) * fn(x - y)
    terms = [
        pm(beta, gamma) * pm(z, alpha),
        pm(gamma, alpha) * pm(z, beta),
        pm(alpha, beta) * pm(z, gamma),
    ]
    scale = max(abs(t) for t in terms)
    if scale == 0.0:
        return Residual(0.0, degenerate=True)
    return Residual(abs(sum(terms)) / scale)


def detect_termination(
    a: Sequence[complex], q: complex, p: complex, n_max: int = 64, tol: float = 1e-9
) -> int:
    """Smallest N with a_i q^N in the p-power lattice, over all entries."""
    best: int | None = None
    for ai in a:
        val = complex(ai)
        for n in range(n_max + 1):
            target = val * q**n
            for m in range(-4, 13):
                pm_val = p**m
                if abs(target - pm_val) < tol * abs(pm_val):
                    best = n if best is None else min(best, n)
        if best == 0:
            break
    if best is None:
        raise TerminationError("no parameter lies in the terminating lattice")
    return best


def v12_11(
    a0: complex,
    a: Sequence[complex],
    q: complex,
    p: complex,
    trunc_tol: float = DEFAULT_TRUNC_TOL,
) -> complex:
    """Terminating very well-poised series in eight parameters.

    a supplies a_1..a_7; termination requires some a_i (i = 0..7) to lie in
    p^Z q^{-N}, and the sum then runs over k = 0..N.
    """
    if len(a) != 7:
        raise ValueError("need exactly seven upper parameters")
    all_a = [complex(a0), *map(complex, a)]
    n_stop = detect_termination(all_a, q, p)
    total = 0.0 + 0j
    for k in range(n_stop + 1):
        term = theta(q ** (2 * k) * a0, p, trunc_tol) / theta(a0, p, trunc_tol) * q**k
        for ai in all_a:
            num = theta_pochhammer(ai, k, p, q, trunc_tol)
            den = theta_pochhammer(q * a0 / ai, k, p, q, trunc_tol)
            if abs(den) < 1e-250:
                raise ZeroDivisionError("vanishing lower factor in series term")
            term *= num / den
        total += term
    return total
