"""Rank-10 hyperbolic lattice and the lattice-indexed tau families on it.

Vectors carry exact rational coefficients over the basis (e0; e1, ..., e9)
with Gram matrix diag(-1, 1, ..., 1).  The isotropic vector
c = 3 e0 - e1 - ... - e9 spans the null direction: translations are taken
along its orthogonal complement, level charts are graded by the pairing
with c, and the orthogonal projection to the root sublattice recovers the
eight additive coordinates used everywhere else in this package.  Floating
point enters only through the coordinate charts and tau evaluation; all
lattice arithmetic is exact.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import lattice
from .specialfn import bracket, bracket_pm
from .util import DomainError, Residual

_GRAM = (-1,) + (1,) * 9


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, numbers.Integral):
        return Fraction(int(v))
    raise TypeError("coefficients must be integers or Fractions")


@dataclass(frozen=True)
class PicardVector:
    """Exact lattice element; coeffs are coefficients, not pairings."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != 10:
            raise ValueError("expected 10 coefficients")

    def __add__(self, other: "PicardVector") -> "PicardVector":
        return PicardVector(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "PicardVector") -> "PicardVector":
        return PicardVector(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "PicardVector":
        return PicardVector(tuple(-a for a in self.coeffs))

    def __rmul__(self, s) -> "PicardVector":
        f = _frac(s)
        return PicardVector(tuple(f * a for a in self.coeffs))

    __mul__ = __rmul__

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coeffs)


def pic(*coeffs) -> PicardVector:
    return PicardVector(tuple(_frac(v) for v in coeffs))


def picard_ip(a: PicardVector, b: PicardVector) -> Fraction:
    """Bilinear pairing of signature (1, 9)."""
    return sum((g * x * y for g, x, y in zip(_GRAM, a.coeffs, b.coeffs)), Fraction(0))


E = tuple(pic(*(1 if i == j else 0 for i in range(10))) for j in range(10))
C = pic(3, *([-1] * 9))
D = -E[9] - Fraction(1, 2) * C

# Simple reflection directions: a triple node plus the chain e_j - e_{j+1}.
AFFINE_ROOTS = (E[0] - E[1] - E[2] - E[3],) + tuple(E[j] - E[j + 1] for j in range(1, 9))

_V8 = E[8] - Fraction(1, 2) * (E[0] - E[9]) + Fraction(1, 2) * C
V_BASIS = (-_V8,) + tuple(
    E[j] - Fraction(1, 2) * (E[0] - E[9]) + Fraction(1, 2) * C for j in range(1, 8)
)
PHI_PIC = C - AFFINE_ROOTS[8]


def reflect(alpha: PicardVector, v: PicardVector) -> PicardVector:
    nrm = picard_ip(alpha, alpha)
    if nrm == 0:
        raise ValueError("cannot reflect in an isotropic direction")
    return v - (2 * picard_ip(alpha, v) / nrm) * alpha


def apply_word(word: Sequence[int], v: PicardVector) -> PicardVector:
    """Apply s_{w0} s_{w1} ... (rightmost generator acts first); indices 0..8."""
    for i in reversed(word):
        v = reflect(AFFINE_ROOTS[i], v)
    return v


def kac_translate(alpha: PicardVector, h: PicardVector) -> PicardVector:
    """Translation along alpha, defined only for directions orthogonal to c.

    Linear on the whole lattice, an exact isometry, and additive in alpha;
    on the level-zero slice it degenerates to h - <alpha, h> c.
    """
    if picard_ip(C, alpha) != 0:
        raise ValueError("translation direction must pair to zero with c")
    lev = picard_ip(C, h)
    coef = Fraction(1, 2) * picard_ip(alpha, alpha) * lev + picard_ip(alpha, h)
    return h + lev * alpha - coef * C


def in_orbit_M(lam: PicardVector) -> PicardVector | None:
    """Classical part of a norm-one, level-minus-one lattice vector.

    Returns the unique alpha in the root sublattice with
    lam = e9 + alpha + (1/2)<alpha, alpha> c, or None when lam is not in
    that orbit.
    """
    if not lam.is_integral():
        return None
    if picard_ip(lam, lam) != 1 or picard_ip(C, lam) != -1:
        return None
    beta = lam - E[9]
    return beta + picard_ip(E[9], beta) * C


def project_classical(v: PicardVector) -> tuple[Fraction, ...]:
    """Coordinates of the orthogonal projection onto the root sublattice.

    The eight values are the pairings with the orthonormal coordinate
    vectors, so <w, v> = sum_j w_j * project_classical(v)_j for any w in
    their span.
    """
    return tuple(picard_ip(b, v) for b in V_BASIS)


def _eps_of(v: PicardVector) -> np.ndarray:
    """Canonical coordinates (pairings with e0..e9) of an exact vector."""
    return np.array([float(g * a) for g, a in zip(_GRAM, v.coeffs)])


def pair_eps(v: PicardVector, eps: np.ndarray) -> complex:
    """Pairing of an exact vector with a point given in canonical coordinates."""
    return complex(sum(float(a) * w for a, w in zip(v.coeffs, eps)))


def translate_eps(alpha: PicardVector, eps: np.ndarray) -> np.ndarray:
    """kac_translate acting on a complex point in canonical coordinates."""
    if picard_ip(C, alpha) != 0:
        raise ValueError("translation direction must pair to zero with c")
    eps = np.asarray(eps, dtype=complex)
    lev = pair_eps(C, eps)
    coef = 0.5 * float(picard_ip(alpha, alpha)) * lev + pair_eps(alpha, eps)
    return eps + lev * _eps_of(alpha) - coef * _eps_of(C)


def reflect_eps(alpha: PicardVector, eps: np.ndarray) -> np.ndarray:
    """Reflection acting on a complex point in canonical coordinates."""
    nrm = float(picard_ip(alpha, alpha))
    if nrm == 0:
        raise ValueError("cannot reflect in an isotropic direction")
    eps = np.asarray(eps, dtype=complex)
    return eps - (2.0 * pair_eps(alpha, eps) / nrm) * _eps_of(alpha)


def coords_forward(x: np.ndarray, mu: complex, kappa: complex) -> np.ndarray:
    """Canonical coordinates of the graph point over x on the level-kappa chart.

    The chart sends x to x - (Q(x)/kappa + mu) c + kappa d, with
    Q(x) = <x, x> / 2; the ten pairings with e0..e9 come out as below.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (8,):
        raise ValueError("expected 8 additive coordinates")
    if kappa == 0:
        raise ValueError("chart level kappa must be nonzero")
    s = 0.5 * np.sum(x)
    a = np.sum(x * x) / (2.0 * kappa) + mu + kappa / 2.0
    eps = np.empty(10, dtype=complex)
    eps[0] = 2.0 * x[0] - 2.0 * s + 3.0 * a
    eps[1:8] = x[1:8] + x[0] - s + a
    eps[8] = -s + a
    eps[9] = a - kappa
    return eps


def coords_back(eps: np.ndarray) -> tuple[np.ndarray, complex, complex]:
    """Invert coords_forward: recover (x, mu, kappa) from canonical coordinates.

    kappa is the pairing with c; points on the null level have no chart
    and are rejected.
    """
    eps = np.asarray(eps, dtype=complex)
    if eps.shape != (10,):
        raise ValueError("expected 10 canonical coordinates")
    kappa = 3.0 * eps[0] - np.sum(eps[1:])
    if abs(kappa) < 1e-13:
        raise DomainError("point lies on the null level; no chart there")
    shear = 0.5 * (eps[0] - eps[9]) - kappa / 2.0
    x_tail = eps[1:9] - shear
    x = np.concatenate([[-x_tail[7]], x_tail[:7]])
    mu = -(-eps[0] ** 2 + np.sum(eps[1:] ** 2)) / (2.0 * kappa)
    return x, complex(mu), complex(kappa)


_BLOWUP_IN_E = (
    E[0] - E[2],
    E[0] - E[1],
    E[0] - E[1] - E[2],
) + tuple(E[j] for j in range(3, 10))
_E_IN_BLOWUP = (
    pic(1, 1, -1, 0, 0, 0, 0, 0, 0, 0),
    pic(1, 0, -1, 0, 0, 0, 0, 0, 0, 0),
    pic(0, 1, -1, 0, 0, 0, 0, 0, 0, 0),
) + tuple(E[j] for j in range(3, 10))


def basis_change_p1p1(v: PicardVector, direction: str) -> PicardVector:
    """Exact change of basis to or from the quadric-surface presentation.

    The target basis is (h1, h2, f1, ..., f8) with h1 = e0 - e2,
    h2 = e0 - e1, f1 = e0 - e1 - e2 and fj = e_{j+1} for j >= 2.  The
    result is a plain coefficient tuple over the requested basis; the
    pairing on the blow-up side is hyperbolic on (h1, h2) and identity on
    the f's.
    """
    if direction == "to_p1p1":
        images = _E_IN_BLOWUP
    elif direction == "from_p1p1":
        images = _BLOWUP_IN_E
    else:
        raise ValueError("direction must be 'to_p1p1' or 'from_p1p1'")
    out = pic(*([0] * 10))
    for a, img in zip(v.coeffs, images):
        out = out + a * img
    return out


def lattice_tau_eval(lam: PicardVector, tau, w: Sequence[int], eps: np.ndarray) -> complex:
    """Evaluate the tau function indexed by lam on the w-translated chart.

    lam must lie in the norm-one, level-minus-one orbit; its classical part
    alpha produces the value tau(w^{-1} . (x + kappa * alpha)) where
    (x, mu, kappa) are the chart coordinates of eps.  The chart level must
    match the step of tau's level grading, and the shifted point must fall
    in tau's domain.
    """
    alpha = in_orbit_M(lam)
    if alpha is None:
        raise ValueError("index vector is not in the norm-one, level-minus-one orbit")
    x, _, kappa = coords_back(eps)
    if abs(kappa - tau.params.delta) > 1e-9:
        raise DomainError("chart level does not match the tau level step")
    shift = np.array([float(f) for f in project_classical(alpha)], dtype=complex)
    y = lattice.apply_word_c(lattice.inverse_word(tuple(w)), x + kappa * shift)
    return tau.eval(y)


def quadruple_hirota_residual(
    tau, w: Sequence[int], eps: np.ndarray, quad: tuple[int, int, int, int]
) -> Residual:
    """Bilinear residual for one index quadruple of lattice tau functions.

    For distinct i, j, k, l in 1..9 the three products
    tau_{e_a} tau_{e0 - e_a - e_l} (a cycling through i, j, k) combine with
    bracket coefficients in the canonical coordinates to a vanishing sum.
    Normalized by the largest term modulus.
    """
    i, j, k, l = quad
    if len({i, j, k, l}) != 4 or not all(1 <= m <= 9 for m in quad):
        raise ValueError("need four distinct indices in 1..9")
    params = tau.params
    eps = np.asarray(eps, dtype=complex)
    terms = []
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        sig = bracket(eps[b] - eps[c], params) * bracket(
            eps[0] - eps[b] - eps[c] - eps[l], params
        )
        t_a = lattice_tau_eval(E[a], tau, w, eps)
        t_al = lattice_tau_eval(E[0] - E[a] - E[l], tau, w, eps)
        terms.append(sig * t_a * t_al)
    scale = max(abs(t) for t in terms)
    if scale == 0.0:
        return Residual(0.0, degenerate=True)
    return Residual(abs(sum(terms)) / scale, degenerate=False)


def translation_hirota_residual(
    tau, axes: Sequence[lattice.LatticeVector], x: np.ndarray
) -> Residual:
    """Bilinear residual written through the translation action on tau.

    Each term translates tau forward and backward along one frame axis
    (tau(x -+ kappa a)) and weights the pair with the brackets of the other
    two axes.  Algebraically identical to the frame residual in the tau
    module; kept as an independent code path.
    """
    params = tau.params
    kap = params.delta
    x = np.asarray(x, dtype=complex)
    a0, a1, a2 = axes
    terms = []
    for s, t, u in ((a0, a1, a2), (a1, a2, a0), (a2, a0, a1)):
        sig = bracket_pm(lattice.pairing_c(t, x), lattice.pairing_c(u, x), params)
        shift = kap * np.asarray(s.true_coords(), dtype=complex)
        terms.append(sig * tau.eval(x - shift) * tau.eval(x + shift))
    scale = max(abs(t) for t in terms)
    if scale == 0.0:
        return Residual(0.0, degenerate=True)
    return Residual(abs(sum(terms)) / scale, degenerate=False)
