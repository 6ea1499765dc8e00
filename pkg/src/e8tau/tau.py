"""Bilinear tau-function layer over the orthogonal-frame geometry.

Provides the normalized Hirota residual for 3-vector frames, the canonical
bracket solution, the three symmetry transforms (exponential gauge, Weyl map,
period shift), the hypergeometric chain on the levels varpi + n*delta with its
two-term Toda recursion, the Casorati determinant closed forms, the multiple
integral closed forms, the Krattenthaler-type theta determinant residual, and
the four direction/sign variants of the invariant product.

All group actions are performed on the additive coordinates x; multiplicative
parameters are re-derived as u = e(x), which keeps every half-integer shift
single-valued.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from math import comb
from typing import Callable, Sequence

import numpy as np

from . import integrals
from .integrals import QUAD_TOL, IntegrandContext
from .lattice import (
    PHI,
    Frame,
    FrameType,
    LatticeVector,
    apply_word,
    apply_word_c,
    classify_frame,
    frame_containing,
    inverse_word,
    ip,
    pairing_c,
    phi_pairing_c,
    sign_normalize,
    vec,
)
from .specialfn import (
    EllipticParams,
    bracket,
    bracket_pm,
    theta,
    theta_pochhammer,
    triple_gamma,
)
from .util import (
    AdmissibilityError,
    ConvergenceError,
    DomainError,
    Residual,
    e,
)

LEVEL_TOL = 1e-10
BRACKET_FLOOR = 1e-6

# Orthonormal norm-1 frame splitting into two coordinate blocks; the first and
# last vectors pair to 1 with the all-half vector and sum to it, the middle six
# pair to 0. Entries are 4x the true quarter-integer coordinates.
A1_VECTORS: tuple[LatticeVector, ...] = (
    vec(2, 2, 2, 2, 0, 0, 0, 0),
    vec(2, 2, -2, -2, 0, 0, 0, 0),
    vec(2, -2, 2, -2, 0, 0, 0, 0),
    vec(2, -2, -2, 2, 0, 0, 0, 0),
    vec(0, 0, 0, 0, 2, -2, -2, 2),
    vec(0, 0, 0, 0, -2, 2, -2, 2),
    vec(0, 0, 0, 0, -2, -2, 2, 2),
    vec(0, 0, 0, 0, 2, 2, 2, 2),
)
_A0_TRIPLE = (A1_VECTORS[0], A1_VECTORS[1], A1_VECTORS[2])
_A7_TRIPLE = (A1_VECTORS[7], A1_VECTORS[1], A1_VECTORS[2])


def qform(x: np.ndarray, delta: complex) -> complex:
    """Q(x) = <x,x>/(2*delta) with the complex-bilinear coordinate sum."""
    x = np.asarray(x, dtype=complex)
    return complex(np.sum(x * x) / (2.0 * delta))


@dataclass(frozen=True)
class LevelDomain:
    """Union of hyperplanes <direction, x> = base + n*step, integer n."""

    direction: LatticeVector
    base: complex
    step: complex
    n_min: int = -64
    n_max: int = 64
    tol: float = LEVEL_TOL

    def locate(self, x: np.ndarray) -> int:
        """Index n of the member hyperplane containing x, or DomainError."""
        val = pairing_c(self.direction, np.asarray(x, dtype=complex))
        n = int(round(((val - self.base) / self.step).real))
        if abs(val - self.base - n * self.step) > self.tol:
            raise DomainError(f"point off the hyperplane family (nearest index {n})")
        if not self.n_min <= n <= self.n_max:
            raise DomainError(f"hyperplane index {n} outside [{self.n_min}, {self.n_max}]")
        return n


@dataclass(frozen=True)
class TauEvaluator:
    """A tau function: the evaluation map, its parameters, and its domain.

    domain is None for functions defined on all of V; otherwise evaluation
    first locates x inside the hyperplane family and rejects stray points.
    """

    fn: Callable[[np.ndarray], complex]
    params: EllipticParams
    domain: LevelDomain | None = None

    def eval(self, x: np.ndarray) -> complex:
        x = np.asarray(x, dtype=complex)
        if self.domain is not None:
            self.domain.locate(x)
        return self.fn(x)

    def __call__(self, x: np.ndarray) -> complex:
        return self.eval(x)


def canonical_tau(c: complex, params: EllipticParams) -> TauEvaluator:
    """The everywhere-defined solution [Q(x) + c] of all frame identities."""

    def fn(x: np.ndarray) -> complex:
        return bracket(qform(x, params.delta) + c, params)

    return TauEvaluator(fn, params)


def oriented_triple(
    frame: Frame | Sequence[LatticeVector],
) -> tuple[LatticeVector, LatticeVector, LatticeVector]:
    """Order and sign the axes of a 3-vector frame by their phi-pairing.

    Axes with nonzero pairing are signed positive and come first; ties are
    broken by descending coordinates, so the standard triples keep their
    conventional (a_0, a_1, a_2) order. Zero-pairing axes keep the stored
    sign normalization (the identities are even in them).
    """
    vs = frame.vectors if isinstance(frame, Frame) else tuple(frame)
    if len(vs) != 3:
        raise ValueError("need exactly three frame vectors")
    fixed = []
    for a in vs:
        pa = ip(PHI, a)
        fixed.append(-a if pa < 0 else (a if pa > 0 else sign_normalize(a)))
    fixed.sort(key=lambda a: (-ip(PHI, a), tuple(-c for c in a.coords4)))
    return fixed[0], fixed[1], fixed[2]


def hirota_residual(
    tau: TauEvaluator | Callable[[np.ndarray], complex],
    frame: Frame | Sequence[LatticeVector],
    x: np.ndarray,
    params: EllipticParams,
) -> Residual:
    """Normalized residual of the three-term bilinear identity at x.

    The sum of [<b+-c, x>] tau(x + a*delta) tau(x - a*delta) over cyclic
    rotations of the oriented triple, divided by the largest term magnitude.
    All six shifted points must lie in tau's domain.
    """
    a, b, c = oriented_triple(frame)
    x = np.asarray(x, dtype=complex)
    d = params.delta
    fn = tau.eval if isinstance(tau, TauEvaluator) else tau
    terms = []
    for s, t, w in ((a, b, c), (b, c, a), (c, a, b)):
        br = bracket_pm(pairing_c(t, x), pairing_c(w, x), params)
        sh = np.asarray(s.true_coords(), dtype=complex) * d
        terms.append(br * fn(x + sh) * fn(x - sh))
    m = max(abs(t) for t in terms)
    if m == 0.0:
        return Residual(0.0, degenerate=True)
    return Residual(abs(sum(terms)) / m)


@dataclass(frozen=True)
class ExpGauge:
    """tau'(x) = e(k<x,x> + <v,x> + c) tau(eps*x), eps in {1, -1}."""

    k: complex = 0.0
    v: tuple[complex, ...] = (0.0,) * 8
    c: complex = 0.0
    eps: int = 1


@dataclass(frozen=True)
class WeylMap:
    """tau'(x) = tau(w^{-1}.x) for a word w in the simple reflections."""

    word: tuple[int, ...]


@dataclass(frozen=True)
class PeriodShift:
    """tau'(x) = e(S(x)) tau(x - v*omega) for lattice v, period omega.

    omega = omega[0] + omega[1]*varpi; the multiplier constant is
    S(x) = (eta/2 delta^2) <v,x> <x, x - v*omega> with eta = -omega[1].
    """

    v: LatticeVector
    omega: tuple[int, int]


def transform(
    tau: TauEvaluator, spec: ExpGauge | WeylMap | PeriodShift
) -> TauEvaluator:
    """New evaluator obtained from tau by one of the three symmetry maps."""
    params = tau.params

    if isinstance(spec, ExpGauge):
        if spec.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        vv = np.asarray(spec.v, dtype=complex)

        def fn_g(x: np.ndarray) -> complex:
            x = np.asarray(x, dtype=complex)
            pre = e(spec.k * complex(np.sum(x * x)) + complex(np.dot(vv, x)) + spec.c)
            return pre * tau.eval(spec.eps * x)

        dom = None
        if tau.domain is not None:
            dom = replace(
                tau.domain, base=spec.eps * tau.domain.base, step=spec.eps * tau.domain.step
            )
        return TauEvaluator(fn_g, params, dom)

    if isinstance(spec, WeylMap):
        inv = inverse_word(spec.word)

        def fn_w(x: np.ndarray) -> complex:
            return tau.eval(apply_word_c(inv, np.asarray(x, dtype=complex)))

        dom = None
        if tau.domain is not None:
            dom = replace(
                tau.domain, direction=apply_word(spec.word, tau.domain.direction)
            )
        return TauEvaluator(fn_w, params, dom)

    if isinstance(spec, PeriodShift):
        m, l = spec.omega
        omega = m + l * params.varpi
        eta = -l
        shift = np.asarray(spec.v.true_coords(), dtype=complex) * omega
        coef = eta / (2.0 * params.delta**2)

        def fn_p(x: np.ndarray) -> complex:
            x = np.asarray(x, dtype=complex)
            y = x - shift
            s = coef * pairing_c(spec.v, x) * complex(np.sum(x * y))
            return e(s) * tau.eval(y)

        dom = None
        if tau.domain is not None:
            pv = ip(tau.domain.direction, spec.v) / 16.0
            dom = replace(tau.domain, base=tau.domain.base + pv * omega)
        return TauEvaluator(fn_p, params, dom)

    raise TypeError(f"unknown transform spec {spec!r}")


def _require_level(x: np.ndarray, params: EllipticParams, n: float) -> None:
    got = phi_pairing_c(np.asarray(x, dtype=complex))
    want = params.varpi + n * params.delta
    if abs(got - want) > LEVEL_TOL:
        raise DomainError(f"point off level varpi + {n}*delta (pairing {got})")


def _pair_gamma(u: np.ndarray, params: EllipticParams, scale: complex) -> complex:
    """Product over pairs i<j of triple_gamma(scale * u_i u_j; p, q, q)."""
    p, q, tol = params.p, params.q, params.trunc_tol
    out = complex(1.0)
    for i in range(8):
        for j in range(i + 1, 8):
            out *= triple_gamma(scale * u[i] * u[j], p, q, q, tol)
    return out


def _mixed_gamma(u: np.ndarray, params: EllipticParams, n: int) -> complex:
    """Same-block pairs at scale q, cross-block pairs at scale q^(1-n)."""
    p, q, tol = params.p, params.q, params.trunc_tol
    cross = q ** (1 - n)
    out = complex(1.0)
    for i in range(8):
        for j in range(i + 1, 8):
            scale = q if (i < 4) == (j < 4) else cross
            out *= triple_gamma(scale * u[i] * u[j], p, q, q, tol)
    return out


def pairwise_triple_gamma(x: np.ndarray, params: EllipticParams, shift: int = 0) -> complex:
    """Entire pairwise product prod_{i<j} Gamma(q^shift u_i u_j; p, q, q)."""
    u = np.exp(2j * np.pi * np.asarray(x, dtype=complex))
    return _pair_gamma(u, params, params.q**shift)


def hg_tau0(x: np.ndarray, params: EllipticParams) -> complex:
    """Level-0 chain component: the pairwise product at unit q-shift."""
    x = np.asarray(x, dtype=complex)
    _require_level(x, params, 0)
    return pairwise_triple_gamma(x, params, shift=1)


def hg_tau1(
    x: np.ndarray, params: EllipticParams, quad_tol: float = QUAD_TOL
) -> complex:
    """Level-1 chain component: gauged contour integral times the product."""
    x = np.asarray(x, dtype=complex)
    _require_level(x, params, 1)
    u = np.exp(2j * np.pi * x)
    val = integrals.I(IntegrandContext(tuple(u), params), quad_tol=quad_tol)
    return e(-qform(x, params.delta)) * val * _pair_gamma(u, params, complex(1.0))


def ordered_c8_ii(frame: Frame) -> tuple[LatticeVector, ...]:
    """Index an 8-vector paired-type frame as (pair, pair', z_2 .. z_7).

    The distinguished pair is signed to pairing +1 (the two sum to the
    all-half vector); the six zero-pairing axes keep the stored sign
    normalization. Both groups are sorted by descending coordinates.
    """
    if classify_frame(frame) is not FrameType.C8_II:
        raise ValueError("need an 8-vector frame of the paired type")
    pair, zero = [], []
    for a in frame.vectors:
        pa = ip(PHI, a)
        if pa == 0:
            zero.append(sign_normalize(a))
        else:
            pair.append(-a if pa < 0 else a)
    pair.sort(key=lambda v: v.coords4, reverse=True)
    zero.sort(key=lambda v: v.coords4, reverse=True)
    return (*pair, *zero)


class BracketZeroError(ValueError):
    """A recursion denominator bracket fell under the genericity floor."""

    def __init__(self, label: str, magnitude: float):
        super().__init__(
            f"bracket {label} has magnitude {magnitude:.3e} < {BRACKET_FLOOR}"
        )
        self.label = label
        self.magnitude = magnitude


def toda_step(
    tau_prev: TauEvaluator | Callable[[np.ndarray], complex],
    tau_cur: TauEvaluator | Callable[[np.ndarray], complex],
    frame: Frame | Sequence[LatticeVector],
    i: int,
    j: int,
    x: np.ndarray,
    params: EllipticParams,
    a0_index: int = 0,
) -> complex:
    """Next chain value at x from the two previous components.

    frame is an 8-vector paired-type frame (or its pre-ordered axis tuple);
    i, j pick two distinct zero-pairing axes in positions 2..7, and the
    result is independent of that choice. a0_index selects which member of
    the distinguished pair serves as the level direction.
    """
    if not (2 <= i <= 7 and 2 <= j <= 7 and i != j):
        raise ValueError("need two distinct zero-pairing indices in 2..7")
    if a0_index not in (0, 1):
        raise ValueError("a0_index must be 0 or 1")
    ordered = ordered_c8_ii(frame) if isinstance(frame, Frame) else tuple(frame)
    a0, ai, aj = ordered[a0_index], ordered[i], ordered[j]
    x = np.asarray(x, dtype=complex)
    d = params.delta
    prev = tau_prev.eval if isinstance(tau_prev, TauEvaluator) else tau_prev
    cur = tau_cur.eval if isinstance(tau_cur, TauEvaluator) else tau_cur

    den_plus = bracket(pairing_c(ai + aj, x), params)
    den_minus = bracket(pairing_c(ai - aj, x), params)
    for sign, val in (("+", den_plus), ("-", den_minus)):
        if abs(val) < BRACKET_FLOOR:
            raise BracketZeroError(f"[<a{i} {sign} a{j}, x>]", abs(val))

    def shifted_pm(b: LatticeVector) -> complex:
        return bracket(pairing_c(a0 + b, x) - d, params) * bracket(
            pairing_c(a0 - b, x) - d, params
        )

    def cur_pair(b: LatticeVector) -> complex:
        sp = np.asarray((a0 + b).true_coords(), dtype=complex) * d
        sm = np.asarray((a0 - b).true_coords(), dtype=complex) * d
        return cur(x - sp) * cur(x - sm)

    num = shifted_pm(aj) * cur_pair(ai) - shifted_pm(ai) * cur_pair(aj)
    back = x - 2.0 * np.asarray(a0.true_coords(), dtype=complex) * d
    return num / (den_plus * den_minus * prev(back))


@dataclass(eq=False)
class TauChain:
    """Chain of components on the levels varpi + n*delta, 0 <= n <= n_max.

    components[n] evaluates level n only; evaluator dispatches across all
    levels (identically 0 below level 0). gauge and casorati_kernel are set
    when the recursion frame is one of the two standard coordinate-block
    triples, and None otherwise.
    """

    components: list[TauEvaluator]
    frame: Frame
    params: EllipticParams
    n_max: int
    evaluator: TauEvaluator
    case: str | None = None
    gauge: list[Callable[[np.ndarray], complex]] | None = None
    casorati_kernel: Callable[[np.ndarray], complex] | None = None

    def value(self, n: int, x: np.ndarray) -> complex:
        """Component value without the per-level domain re-check."""
        return self._tau_at(n, np.asarray(x, dtype=complex))

    _tau_at: Callable[[int, np.ndarray], complex] = None  # set by build_chain


def build_chain(
    n_max: int,
    recursion_frame: Frame | None = None,
    params: EllipticParams | None = None,
    quad_tol: float = QUAD_TOL,
) -> TauChain:
    """Hypergeometric chain: levels 0 and 1 from the closed forms, higher
    levels by the two-term recursion with memoized evaluations.

    The recursion pair and pivot adapt per point: configurations whose
    contour arguments leave the unit disk (or hit a vanishing denominator)
    fall through to the next candidate, which changes nothing but the
    route since the step is pair-independent.
    """
    if params is None:
        raise ValueError("params is required")
    if not 0 <= n_max <= 3:
        raise ValueError("chain depth capped at 3")
    frame = recursion_frame if recursion_frame is not None else Frame.from_vectors(_A0_TRIPLE)
    if classify_frame(frame) is not FrameType.C3_II1:
        raise ValueError("recursion frame must have exactly one unit-pairing axis")

    a0_req, a1_req, a2_req = oriented_triple(frame)
    c8 = frame_containing(a0_req)
    ordered = ordered_c8_ii(c8)

    def zero_index(a: LatticeVector) -> int:
        target = sign_normalize(a).coords4
        for k in range(2, 8):
            if ordered[k].coords4 == target:
                return k
        raise AssertionError("zero axis missing from the completed frame")

    i_req, j_req = zero_index(a1_req), zero_index(a2_req)
    a0_first = 0 if ordered[0].coords4 == a0_req.coords4 else 1

    # Pair preference: the requested pair first, then pairs whose supports
    # avoid the pivot's block (their shifts move every modulus the least).
    support0 = {k for k in range(8) if a0_req.coords4[k] != 0}

    def overlap(k: int) -> int:
        return sum(1 for m in support0 if ordered[k].coords4[m] != 0)

    all_pairs = sorted(
        ((i, j) for i in range(2, 8) for j in range(i + 1, 8)),
        key=lambda ij: (overlap(ij[0]) + overlap(ij[1]), ij),
    )
    req = (min(i_req, j_req), max(i_req, j_req))
    candidates: list[tuple[int, int, int]] = []
    for pair in [req] + [ij for ij in all_pairs if ij != req]:
        candidates.append((a0_first, *pair))
        candidates.append((1 - a0_first, *pair))

    memo: dict[tuple[int, bytes], complex] = {}

    def tau_at(n: int, x: np.ndarray) -> complex:
        if n < 0:
            return complex(0.0)
        if n == 0:
            return hg_tau0(x, params)
        if n == 1:
            return hg_tau1(x, params, quad_tol=quad_tol)
        key = (n, np.round(x, 12).tobytes())
        if key not in memo:
            memo[key] = step(n, x)
        return memo[key]

    def step(n: int, x: np.ndarray) -> complex:
        last: Exception | None = None
        for a0i, i, j in candidates:
            try:
                return toda_step(
                    lambda y: tau_at(n - 2, y),
                    lambda y: tau_at(n - 1, y),
                    ordered,
                    i,
                    j,
                    x,
                    params,
                    a0_index=a0i,
                )
            except (BracketZeroError, AdmissibilityError, ConvergenceError) as err:
                last = err
        raise last

    base = params.varpi
    full_dom = LevelDomain(PHI, base, params.delta, n_min=-8, n_max=n_max)
    evaluator = TauEvaluator(
        lambda x: tau_at(full_dom.locate(np.asarray(x, dtype=complex)), np.asarray(x, dtype=complex)),
        params,
        full_dom,
    )
    components = [
        TauEvaluator(
            lambda x, _n=n: tau_at(_n, np.asarray(x, dtype=complex)),
            params,
            LevelDomain(PHI, base, params.delta, n_min=n, n_max=n),
        )
        for n in range(n_max + 1)
    ]

    key = frame.key()
    if key == Frame.from_vectors(_A0_TRIPLE).key():
        case = "frame_a0"
    elif key == Frame.from_vectors(_A7_TRIPLE).key():
        case = "frame_a7"
    else:
        case = None
    gauge = None
    kernel = None
    if case is not None:
        gauge = [
            (lambda x, _n=n, _c=case: gauge_g(_n, x, _c, params))
            for n in range(n_max + 1)
        ]
        kernel = casorati_kernel_fn(case, params, quad_tol=quad_tol)

    chain = TauChain(
        components=components,
        frame=frame,
        params=params,
        n_max=n_max,
        evaluator=evaluator,
        case=case,
        gauge=gauge,
        casorati_kernel=kernel,
    )
    chain._tau_at = tau_at
    return chain


def casorati_K(
    n: int,
    x: np.ndarray,
    kernel: Callable[[np.ndarray], complex],
    frame: Frame | Sequence[LatticeVector],
    params: EllipticParams,
) -> complex:
    """Determinant of the kernel over the 2-directional shift grid.

    Row i, column j evaluates the kernel at
    x + delta*((1-n) a_0 + (n+1-i-j) a_1 + (j-i) a_2); n = 0 gives 1.
    """
    if n < 0:
        raise ValueError("negative determinant order")
    if n == 0:
        return complex(1.0)
    a0, a1, a2 = oriented_triple(frame)
    x = np.asarray(x, dtype=complex)
    d = params.delta
    e0 = np.asarray(a0.true_coords(), dtype=complex)
    e1 = np.asarray(a1.true_coords(), dtype=complex)
    e2 = np.asarray(a2.true_coords(), dtype=complex)
    mat = np.empty((n, n), dtype=complex)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            y = x + d * ((1 - n) * e0 + (n + 1 - i - j) * e1 + (j - i) * e2)
            mat[i - 1, j - 1] = kernel(y)
    return complex(np.linalg.det(mat))


def casorati_kernel_fn(
    case: str, params: EllipticParams, quad_tol: float = QUAD_TOL
) -> Callable[[np.ndarray], complex]:
    """Determinant kernel psi(y): the contour integral at u = e(y), with the
    arguments block-rescaled to balance for the frame_a0 case."""
    if case not in ("frame_a0", "frame_a7"):
        raise ValueError("case must be 'frame_a0' or 'frame_a7'")

    def psi(y: np.ndarray) -> complex:
        u = np.exp(2j * np.pi * np.asarray(y, dtype=complex))
        args = (
            integrals._tilde(tuple(u), params.p * params.q)
            if case == "frame_a0"
            else tuple(u)
        )
        return integrals.I(IntegrandContext(args, params), quad_tol=quad_tol)

    return psi


def _t_coords(u: np.ndarray, case: str, n: int, params: EllipticParams) -> tuple[complex, ...]:
    if case == "frame_a0":
        return integrals._tilde(tuple(u), params.p * params.q)
    if case == "frame_a7":
        s = params.q ** (0.5 * (1 - n))
        return tuple(s * v for v in u)
    raise ValueError("case must be 'frame_a0' or 'frame_a7'")


def dfactor_d(n: int, x: np.ndarray, case: str, params: EllipticParams) -> complex:
    """Scalar divisor extracted from the kernel determinant; 1 at n <= 1.

    Written in the block-rescaled coordinates t the two cases share one
    formula: a monomial prefactor times four theta-factorial products over
    the first block's pairings with the second block's complements.
    """
    x = np.asarray(x, dtype=complex)
    _require_level(x, params, n)
    p, q, tol = params.p, params.q, params.trunc_tol
    t = _t_coords(np.exp(2j * np.pi * x), case, n, params)
    out = q ** (2 * comb(n, 3)) * (t[2] * t[3]) ** comb(n, 2)
    for k in range(1, n + 1):
        out *= theta_pochhammer(q ** (k - 1) * t[0] * t[3], n - k, p, q, tol)
        out *= theta_pochhammer(q ** (1 - k) * t[0] / t[3], n - k, p, q, tol)
        out *= theta_pochhammer(q ** (k - 1) * t[1] * t[2], n - k, p, q, tol)
        out *= theta_pochhammer(q ** (1 - k) * t[1] / t[2], n - k, p, q, tol)
    return out


def gauge_g(n: int, x: np.ndarray, case: str, params: EllipticParams) -> complex:
    """Scalar gauge relating the chain component to the kernel determinant."""
    x = np.asarray(x, dtype=complex)
    _require_level(x, params, n)
    u = np.exp(2j * np.pi * x)
    pre = params.p ** comb(n, 2) * e(-n * qform(x, params.delta))
    if case == "frame_a0":
        gam = _mixed_gamma(u, params, n)
    elif case == "frame_a7":
        gam = _pair_gamma(u, params, params.q ** (1 - n))
    else:
        raise ValueError("case must be 'frame_a0' or 'frame_a7'")
    return pre * gam / dfactor_d(n, x, case, params)


def tau_n_det(
    n: int,
    x: np.ndarray,
    case: str,
    params: EllipticParams,
    quad_tol: float = QUAD_TOL,
) -> complex:
    """Chain component via gauge times kernel determinant."""
    triple = {"frame_a0": _A0_TRIPLE, "frame_a7": _A7_TRIPLE}.get(case)
    if triple is None:
        raise ValueError("case must be 'frame_a0' or 'frame_a7'")
    kernel = casorati_kernel_fn(case, params, quad_tol=quad_tol)
    x = np.asarray(x, dtype=complex)
    return gauge_g(n, x, case, params) * casorati_K(n, x, kernel, triple, params)


def tau_n_int(
    n: int,
    x: np.ndarray,
    route: str,
    params: EllipticParams,
    quad_tol: float = QUAD_TOL,
) -> complex:
    """Chain component via the n-fold contour integral.

    route 'direct' rescales every coordinate by q^((1-n)/2); route 'tilde'
    block-rescales and keeps same-block product factors at unit q-shift.
    Capped at n = 2 (tensor quadrature cost).
    """
    if not 0 <= n <= 2:
        raise ValueError("integral route is capped at multiplicity 2")
    x = np.asarray(x, dtype=complex)
    _require_level(x, params, n)
    u = np.exp(2j * np.pi * x)
    q = params.q
    if route == "direct":
        t = tuple(q ** (0.5 * (1 - n)) * v for v in u)
        gam = _pair_gamma(u, params, q ** (1 - n))
    elif route == "tilde":
        t = integrals._tilde(tuple(u), params.p * q)
        gam = _mixed_gamma(u, params, n)
    else:
        raise ValueError("route must be 'direct' or 'tilde'")
    pre = params.p ** comb(n, 2) * e(-n * qform(x, params.delta))
    val = integrals.I_n(IntegrandContext(t, params, n=n), quad_tol=quad_tol)
    return pre * val * gam


def warnaar_det_residual(
    a: complex,
    b: complex,
    zs: Sequence[complex],
    n: int,
    params: EllipticParams,
) -> Residual:
    """Relative residual of the theta-factorial determinant evaluation."""
    if n < 1 or len(zs) != n:
        raise ValueError("need n >= 1 points z_1..z_n")
    p, q, tol = params.p, params.q, params.trunc_tol

    def poch_pair(c: complex, z: complex, m: int) -> complex:
        return theta_pochhammer(c * z, m, p, q, tol) * theta_pochhammer(
            c / z, m, p, q, tol
        )

    mat = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            mat[i, j] = poch_pair(a, zs[i], j) * poch_pair(b, zs[i], n - 1 - j)
    lhs = complex(np.linalg.det(mat))

    rhs = q ** comb(n, 3) * a ** comb(n, 2)
    for k in range(1, n + 1):
        rhs *= poch_pair(b, q ** (k - 1) * a, n - k)
    for i in range(n):
        for j in range(i + 1, n):
            rhs *= theta(zs[i] * zs[j], p, tol) * theta(zs[i] / zs[j], p, tol) / zs[i]

    m = max(abs(lhs), abs(rhs))
    if m == 0.0:
        return Residual(0.0, degenerate=True)
    return Residual(abs(lhs - rhs) / m)


# (direction sign, level sign): the hyperplane family is
# <phi, x> = dir_sign * (level_sign * varpi + n * delta).
_VARIANT_SIGNS = {"pp": (1, 1), "pm": (1, -1), "mp": (-1, 1), "mm": (-1, -1)}


def psi_variant(
    n: int,
    x: np.ndarray,
    variant: str,
    params: EllipticParams,
    route: str = "direct",
    quad_tol: float = QUAD_TOL,
    slow_ok: bool = False,
) -> complex:
    """Invariant-product value for the four direction/level sign choices.

    Each variant admits two displayed argument routes ('direct' in u,
    'inverse' in 1/u) that must agree; both are exposed for cross-checks.
    """
    if variant not in _VARIANT_SIGNS:
        raise ValueError("variant must be one of pp, pm, mp, mm")
    if route not in ("direct", "inverse"):
        raise ValueError("route must be 'direct' or 'inverse'")
    if n < 0:
        raise ValueError("level index must be >= 0")
    dir_sign, lev_sign = _VARIANT_SIGNS[variant]
    x = np.asarray(x, dtype=complex)
    target = dir_sign * (lev_sign * params.varpi + n * params.delta)
    got = phi_pairing_c(x)
    if abs(got - target) > LEVEL_TOL:
        raise DomainError(f"point off the {variant} level family (pairing {got})")

    p, q = params.p, params.q
    rp, rq = cmath.sqrt(p), cmath.sqrt(q)
    qn = q ** (0.5 * (1 - n))
    u = np.exp(2j * np.pi * x)
    direct = route == "direct"
    gauged = variant in ("pp", "mp")
    if variant == "pp":
        t = tuple((qn * v) if direct else (rp * rq / v) for v in u)
    elif variant == "pm":
        t = tuple((rp * qn * v) if direct else (rq / v) for v in u)
    elif variant == "mp":
        t = tuple((rp * rq * v) if direct else (qn / v) for v in u)
    else:
        t = tuple((rq * v) if direct else (rp * qn / v) for v in u)
    pre = params.p ** comb(n, 2) * e(-n * qform(x, params.delta)) if gauged else complex(1.0)
    ctx = IntegrandContext(t, params, n=n)
    return pre * integrals.psi_n_value(ctx, quad_tol=quad_tol, slow_ok=slow_ok)


def variant_evaluator(
    variant: str,
    params: EllipticParams,
    n_max: int = 3,
    quad_tol: float = 1e-10,
) -> TauEvaluator:
    """Whole-family evaluator for one column of the closed-form table.

    The function lives on the level family ``dir * (lev * varpi + n * delta)``
    of the chosen variant, evaluates the order-``n`` closed form there, and is
    identically zero on the levels below the base one.  Values are memoized per
    point because bilinear residuals revisit the same shifted arguments.
    """
    if variant not in _VARIANT_SIGNS:
        raise ValueError("variant must be one of pp, pm, mp, mm")
    dir_sign, lev_sign = _VARIANT_SIGNS[variant]
    domain = LevelDomain(
        PHI,
        dir_sign * lev_sign * params.varpi,
        dir_sign * params.delta,
        n_min=-8,
        n_max=n_max,
    )
    cache: dict[bytes, complex] = {}

    def fn(x: np.ndarray) -> complex:
        key = np.asarray(x, dtype=complex).tobytes()
        if key not in cache:
            n = domain.locate(x)
            if n < 0:
                cache[key] = 0j
            else:
                cache[key] = psi_variant(n, x, variant, params, quad_tol=quad_tol)
        return cache[key]

    return TauEvaluator(fn, params, domain)
