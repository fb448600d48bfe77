"""Closed-form spectra on the rational level curves of the eigenvalue
ratio inside the band region, via Chebyshev polynomials.

For the family ``(a, -1; 1, d)`` with both eigenvalues ``b+ > b- > 0``,
the curves ``d = d_pm(a)`` on which ``sqrt(b+/b-) = alpha`` foliate the
region; when ``alpha = p/q`` is rational the secular function becomes,
after ``z = x / (q sqrt(b+))``,

    k1 [1 - cos(p z) cos(q z)] - k2 sin(p z) sin(q z)
        = k1 + (k2 - k1)/2 T_{p+q}(cos z) - (k2 + k1)/2 T_{p-q}(cos z)

so its zero set is generated by the roots of a degree p+q polynomial
G(w) through ``w = cos z``.  The two real constants come from evaluating
the generic secular form on the explicit eigenvectors ``(1, a - b+-)``:

    k1 = 2 (a - b+)(a - b-) = 2        (since b+ b- = ad + 1)
    k2 = (a - b-)^2 sqrt(b+/b-) + (a - b+)^2 sqrt(b-/b+)

(see docs/chebyshev_reduction.md for the full derivation and the sampled
identity test that pins it against the direct secular evaluation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .canonical import Family, RegionTag, classify_region, family_matrix
from .errors import DegreeTooHigh, OutOfDomain
from .mat2 import CMatrix2
from .rootfind import Spectrum, cluster_roots, polyroots

DEGREE_CAP_DEFAULT = 20   # polynomial rooting is unstable past this


@dataclass(frozen=True)
class ChebPoint:
    """A point of a rational level curve of the eigenvalue ratio."""

    a: float
    p: int
    q: int
    sign: int
    d: float
    b_plus: float
    b_minus: float

    @property
    def alpha(self) -> float:
        return self.p / self.q

    def matrix(self) -> CMatrix2:
        return family_matrix(Family.A4, self.a, self.d)


def level_curve_d(alpha: float, sign: int, a: float) -> float:
    """The two solutions d_pm(a) of sqrt(b+/b-) = alpha:
    ``[a (alpha^4 + 1) +- sqrt((alpha^4 - 1)^2 a^2 + 4 alpha^2 (alpha^2 + 1)^2)]
    / (2 alpha^2)``."""
    a4 = alpha ** 4
    disc = (a4 - 1.0) ** 2 * a * a + 4.0 * alpha ** 2 * (alpha ** 2 + 1.0) ** 2
    return (a * (a4 + 1.0) + sign * math.sqrt(disc)) / (2.0 * alpha ** 2)


def lambda_curve(p: int, q: int, sign: int, a: float) -> ChebPoint:
    """Construct the curve point for alpha = p/q (> 1, coprime after
    reduction), sign selecting the upper (+) or lower (-) branch.

    Domain: ``a > -1`` for the upper branch and ``a > 1`` for the lower
    one; outside, the point leaves the band region.
    """
    p, q = int(p), int(q)
    if p <= 0 or q <= 0:
        raise OutOfDomain("p and q must be positive integers")
    g = math.gcd(p, q)
    p, q = p // g, q // g
    if p <= q:
        raise OutOfDomain(f"ratio p/q = {p}/{q} must exceed 1")
    if sign not in (+1, -1):
        raise OutOfDomain("sign must be +1 or -1")
    if sign > 0 and not a > -1.0:
        raise OutOfDomain(f"upper branch needs a > -1, got a = {a}")
    if sign < 0 and not a > 1.0:
        raise OutOfDomain(f"lower branch needs a > 1, got a = {a}")
    alpha = p / q
    d = level_curve_d(alpha, sign, a)
    # on the curve the ratio is alpha exactly, so the trace fixes both
    # eigenvalues: b- = (a+d)/(alpha^2+1), b+ = alpha^2 b-.  The quadratic
    # formula cancels catastrophically near the singular corner.
    trace = a + d
    if trace <= 0.0:
        raise OutOfDomain(f"eigenvalues not split positive at (a, d) = ({a}, {d})")
    bm = trace / (alpha * alpha + 1.0)
    bp = alpha * alpha * bm
    if abs(bp * bm - (a * d + 1.0)) > 1e-9 * (1.0 + a * a + d * d):
        raise OutOfDomain(f"curve eigenvalue identity failed at (a, d) = ({a}, {d})")
    if abs(math.sqrt(bp / bm) - alpha) > 1e-10 * (1 + alpha):
        raise OutOfDomain("curve identity sqrt(b+/b-) = p/q failed")
    region = classify_region(a, d)
    if region.tag is not RegionTag.R3:
        raise OutOfDomain(f"curve point left the band region: {region.tag.value}")
    return ChebPoint(a=float(a), p=p, q=q, sign=sign, d=float(d),
                     b_plus=float(bp), b_minus=float(bm))


def chebyshev_t(m: int, max_degree: int = 64) -> np.ndarray:
    """Monomial coefficients (highest degree first) of the degree-m
    Chebyshev polynomial of the first kind, by the three-term recurrence."""
    if m < 0:
        raise ValueError("degree must be nonnegative")
    if m > max_degree:
        raise DegreeTooHigh(f"Chebyshev degree {m} > {max_degree}")
    if m == 0:
        return np.array([1.0])
    prev = np.array([1.0])          # T_0
    cur = np.array([1.0, 0.0])      # T_1
    for _ in range(m - 1):
        nxt = 2.0 * np.append(cur, 0.0)
        nxt[2:] -= prev
        prev, cur = cur, nxt
    return cur


@dataclass(frozen=True)
class GPoly:
    """Degree p+q polynomial whose roots generate the whole spectrum."""

    coeffs: np.ndarray      # monomial basis, highest degree first
    k1: float
    k2: float
    point: ChebPoint
    scale: complex          # gauge: secular(x) = scale * G(cos(x / (q sqrt(b+))))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, w):
        return np.polyval(self.coeffs, w)


def build_g(pt: ChebPoint) -> GPoly:
    """Assemble G(w) = k1 + (k2-k1)/2 T_{p+q}(w) - (k2+k1)/2 T_{p-q}(w)."""
    a, bp, bm = pt.a, pt.b_plus, pt.b_minus
    alpha = pt.alpha
    k1 = 2.0 * (a - bp) * (a - bm)   # identically 2: (a-b+)(a-b-) = a^2-a(a+d)+ad+1
    k2 = (a - bm) ** 2 * alpha + (a - bp) ** 2 / alpha
    n = pt.p + pt.q
    coeffs = np.zeros(n + 1)
    coeffs[-1] = k1
    coeffs[-(n + 1):] += 0.5 * (k2 - k1) * chebyshev_t(n)
    tlow = chebyshev_t(pt.p - pt.q)
    coeffs[-tlow.size:] -= 0.5 * (k2 + k1) * tlow
    scale = _gauge_vs_secular(pt, k1)
    return GPoly(coeffs=coeffs, k1=float(k1), k2=float(k2), point=pt, scale=scale)


def _gauge_vs_secular(pt: ChebPoint, k1: float) -> complex:
    """Constant relating the normalised secular function to the k-form."""
    from .secular import build
    S = build(pt.matrix())
    V_ref = np.array([[1.0, 1.0],
                      [pt.a - pt.b_plus, pt.a - pt.b_minus]], dtype=complex)
    return S.gauge_to(V_ref)


def _polish_root(coeffs: np.ndarray, w0: complex, mult: int) -> complex:
    """Multiplicity-aware Newton polish of a root cluster centre, followed
    by snapping to the structural roots +-1 and to the real axis.

    Simultaneous iteration resolves an m-fold root only to O(eps^(1/m));
    Newton with the known multiplicity restores full precision.
    """
    w = complex(w0)
    dcoeffs = np.polyder(coeffs)
    for _ in range(60):
        p = complex(np.polyval(coeffs, w))
        dp = complex(np.polyval(dcoeffs, w))
        if dp == 0:
            break
        delta = mult * p / dp
        w -= delta
        if abs(delta) <= 1e-15 * (1.0 + abs(w)):
            break
    scale = float(np.linalg.norm(coeffs))
    for target in (1.0, -1.0):
        if abs(w - target) <= 1e-6 and abs(np.polyval(coeffs, target)) <= 1e-10 * scale:
            return complex(target)
    if abs(w.imag) <= 1e-10 * (1.0 + abs(w)):
        return complex(w.real, 0.0)
    return w


def cheb_spectrum(pt: ChebPoint, n_max: int, degree_cap: int = DEGREE_CAP_DEFAULT,
                  lambda2_max: Optional[float] = None) -> Spectrum:
    """Exact spectrum on a rational curve point: every zero of the secular
    function is ``(+-arccos(w0) + 2 n pi) q sqrt(b+)`` for a root w0 of G.

    Eigenvalue multiplicity is the root multiplicity of G (root clusters
    of the simultaneous iteration are merged); at ``w0 = +-1`` the two
    arccos branches coincide and the secular zero order doubles, which is
    recorded in the notes rather than in the multiplicity.
    """
    if pt.p + pt.q > degree_cap:
        raise DegreeTooHigh(
            f"p+q = {pt.p + pt.q} exceeds the stability cap {degree_cap}; "
            "pass a larger degree_cap to override")
    if n_max < 0 or n_max > 10_000:
        raise ValueError("n_max out of range")
    g = build_g(pt)
    roots = cluster_roots(polyroots(g.coeffs), rel_tol=1e-5)
    roots = [(_polish_root(g.coeffs, w0, m), m) for w0, m in roots]
    step = pt.q * math.sqrt(pt.b_plus)
    raw = []
    for w0, mult in roots:
        z0 = complex(np.arccos(w0 + 0j))
        n = np.arange(-n_max, n_max + 1)
        for lam in ((z0 + 2.0 * np.pi * n) * step, (-z0 + 2.0 * np.pi * n) * step):
            vals = lam * lam
            raw.extend((complex(v), mult) for v in vals)
    # sorted merge: equal eigenvalues land adjacently in (modulus, angle) order
    raw.sort(key=lambda pm: (abs(pm[0]), np.angle(pm[0])))
    merged = []
    for v, m in raw:
        if lambda2_max is not None and abs(v) > lambda2_max:
            continue
        for i in range(len(merged) - 1, max(len(merged) - 6, -1), -1):
            u, k = merged[i]
            if abs(v - u) <= 1e-8 * (1.0 + abs(v)):
                merged[i] = (u, max(k, m))
                break
        else:
            merged.append((v, m))
    order0 = 2 * max([m for v, m in merged if abs(v) <= 1e-9], default=1)
    eigs = [(v, m) for v, m in merged if abs(v) > 1e-9]
    eigs.append((0.0 + 0.0j, 1))
    eigs.sort(key=lambda pm: (abs(pm[0]), np.angle(pm[0])))
    notes = ("multiplicity = G-root multiplicity; the secular zero order "
             "doubles at w0 = +-1",)
    return Spectrum(eigenvalues=tuple(eigs), method="chebyshev",
                    search_region=None, matrix=pt.matrix(),
                    analytic_order_at_zero=order0, notes=notes)
