"""Zeros of entire functions in rectangles by argument-principle counting,
adaptive quadtree subdivision and Newton refinement; eigenvalue assembly
(zeros are square roots of eigenvalues); Aberth-Ehrlich polynomial roots.

The winding machinery consumes a *log-derivative protocol*: any object
with vectorised ``logderiv(z)`` and ``logabs(z)`` methods.  The secular
functions implement it natively (overflow-free); plain callables are
adapted on the fly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BoundaryZero, DegreeTooHigh, NonConvergent
from .mat2 import CMatrix2
from .secular import build

_EDGE_START = 64
_EDGE_CAP = 2 ** 18    # 4 edges -> 2**20 total sample cap
_WINDING_TOL = 1e-3


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in the lambda plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max),
                       0.5 * (self.im_min + self.im_max))

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.re_max - self.re_min, self.im_max - self.im_min))

    def corners(self) -> np.ndarray:
        return np.array([complex(self.re_min, self.im_min),
                         complex(self.re_max, self.im_min),
                         complex(self.re_max, self.im_max),
                         complex(self.re_min, self.im_max)])

    def dilated(self, factor: float) -> "Rect":
        c = self.center
        hw = 0.5 * (self.re_max - self.re_min) * factor
        hh = 0.5 * (self.im_max - self.im_min) * factor
        return Rect(c.real - hw, c.real + hw, c.imag - hh, c.imag + hh)

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return (self.re_min - slack <= z.real <= self.re_max + slack
                and self.im_min - slack <= z.imag <= self.im_max + slack)

    def split(self, fx: float = 0.5, fy: float = 0.5):
        xm = self.re_min + fx * (self.re_max - self.re_min)
        ym = self.im_min + fy * (self.im_max - self.im_min)
        return (Rect(self.re_min, xm, self.im_min, ym),
                Rect(xm, self.re_max, self.im_min, ym),
                Rect(self.re_min, xm, ym, self.im_max),
                Rect(xm, self.re_max, ym, self.im_max))


class _CallableAdapter:
    """Wrap (f, fprime) callables into the log-derivative protocol."""

    def __init__(self, f: Callable, fprime: Callable):
        self.f = f
        self.fprime = fprime

    def logderiv(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.fprime(z) / self.f(z)

    def logabs(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.f(z)))

    def value(self, z):
        return self.f(z)


def _as_protocol(f, fprime=None):
    if hasattr(f, "logderiv") and hasattr(f, "logabs"):
        return f
    if fprime is None:
        raise TypeError("plain callables need an explicit derivative")
    return _CallableAdapter(f, fprime)


class _OriginDeflated:
    """View of f(z) / z^m: removes a known structural zero at the origin
    exactly in log-derivative space, so the search never has to resolve it
    numerically (high-order origin zeros sit below the cancellation noise
    floor of the closed forms)."""

    def __init__(self, fun, order: int):
        self.base = fun
        self.order = order

    def logderiv(self, z):
        z = np.asarray(z, dtype=complex)
        return self.base.logderiv(z) - self.order / z

    def logabs(self, z):
        z = np.asarray(z, dtype=complex)
        return self.base.logabs(z) - self.order * np.log(np.abs(z))


def _integrate_polyline(fun, vertices, cap: int = _EDGE_CAP) -> float:
    """(1/2 pi i) * contour integral of f'/f over the closed polyline.

    Trapezoid rule per edge, doubling the sample count until two successive
    refinements agree to 1e-3 and the total is that close to an integer.
    Raises BoundaryZero when a zero sits within 1e-9 * diameter of the
    contour (distance estimated from the log-derivative spike; the caller
    may dilate and retry) and NonConvergent at the sample cap.
    """
    edges = [(vertices[k], vertices[(k + 1) % len(vertices)])
             for k in range(len(vertices))]
    diam = max(abs(b - a) for a, b in edges)
    za = np.array([a for a, _ in edges])
    dz = np.array([b - a for a, b in edges])
    prev = None
    m = _EDGE_START
    while m <= cap:
        t = np.linspace(0.0, 1.0, m + 1)
        z = za[:, None] + t[None, :] * dz[:, None]   # all edges in one batch
        g = fun.logderiv(z.ravel()).reshape(z.shape)
        if np.any(~np.isfinite(g)):
            raise BoundaryZero("zero (numerically) on the contour")
        spike = np.max(np.abs(g))
        resolved = True
        if spike > 0:
            dist_est = 1.0 / spike
            if dist_est < 1e-9 * diam:
                raise BoundaryZero("zero within 1e-9*diameter of the contour")
            if dist_est < 4.0 * diam / cap:
                # a zero close enough to the contour that the trapezoid can
                # never resolve it within the sample cap: bail out early so
                # the caller can dilate or re-split
                raise BoundaryZero("zero unresolvably close to the contour")
            # two coarse levels can agree on a wrong integer before the
            # nearest zero is even resolved by the sampling
            resolved = diam / m <= dist_est / 3.0
        total = np.sum(np.trapezoid(g * dz[:, None], dx=1.0 / m, axis=1))
        w = float((total / (2j * np.pi)).real)
        if resolved and prev is not None and abs(w - prev) <= _WINDING_TOL \
                and abs(w - round(w)) <= _WINDING_TOL:
            return w
        prev = w if resolved else None
        m *= 2
    raise NonConvergent("winding integral did not stabilise below the sample cap")


def winding_count(f, rect: Rect, fprime=None, rng=None, dilate: bool = True) -> int:
    """Number of zeros of ``f`` inside ``rect``, counted with multiplicity.

    If a zero sits (numerically) on the boundary the rectangle is dilated
    by a random factor in (1, 1.001] and the count retried, up to five
    times.
    """
    fun = _as_protocol(f, fprime)
    rng = np.random.default_rng(0) if rng is None else rng
    n, _ = _winding_with_rect(fun, rect, rng, dilate)
    return n


def _winding_with_rect(fun, rect: Rect, rng, dilate: bool, cap: int = _EDGE_CAP):
    """Winding count plus the (possibly dilated) rectangle actually used."""
    r = rect
    for attempt in range(6):
        try:
            w = _integrate_polyline(fun, list(r.corners()), cap=cap)
            n = int(round(w))
            if n < 0:
                raise NonConvergent(f"negative winding {w}; derivative inconsistent?")
            return n, r
        except (BoundaryZero, NonConvergent):
            # either failure mode signals structure too close to the contour
            if not dilate or attempt == 5:
                raise
            r = r.dilated(1.0 + 1e-3 * float(rng.uniform(0.1, 1.0)))
    raise BoundaryZero("persistent boundary zero after 5 dilations")


def _winding_circle(fun, center: complex, radius: float) -> int:
    """Winding of f'/f on a circle (periodic trapezoid, adaptive)."""
    m = _EDGE_START
    prev = None
    while m <= _EDGE_CAP:
        t = np.arange(m) * (2 * np.pi / m)
        z = center + radius * np.exp(1j * t)
        g0 = fun.logderiv(z)
        if np.any(~np.isfinite(g0)):
            raise BoundaryZero("zero on probe circle")
        g = g0 * 1j * radius * np.exp(1j * t)
        w = float((np.mean(g) * 2 * np.pi / (2j * np.pi)).real)
        if prev is not None and abs(w - prev) <= _WINDING_TOL \
                and abs(w - round(w)) <= _WINDING_TOL:
            return int(round(w))
        prev = w
        m *= 2
    raise NonConvergent("circle winding did not stabilise")


def _newton(fun, z0: complex, mult: int, tol: float, max_iter: int = 80):
    """Multiplicity-aware Newton: z <- z - mult / logderiv(z).

    Converges quadratically at an exact m-fold zero but only down to the
    noise floor of the evaluated function; stagnation there counts as
    convergence (the probe circles judge the result).
    """
    z = complex(z0)
    prev_step = np.inf
    grew = 0
    for _ in range(max_iter):
        ld = complex(fun.logderiv(np.array([z]))[0])
        if not (np.isfinite(ld.real) and np.isfinite(ld.imag)):
            return z, True  # log-derivative blew up: we are sitting on the zero
        if ld == 0:
            return z, False
        step = mult / ld
        z -= step
        if abs(step) <= 1e-3 * tol * (1.0 + abs(z)):
            return z, True
        # stagnation at the noise floor of a multiple zero
        grew = grew + 1 if abs(step) >= 0.5 * prev_step else 0
        if grew >= 3:
            return z, abs(step) <= 1e-5 * (1.0 + abs(z))
        prev_step = abs(step)
    return z, abs(step) <= 1e-5 * (1.0 + abs(z))


def isolate_zeros(f, rect: Rect, tol: float = 1e-10, fprime=None, rng=None):
    """All zeros of ``f`` in ``rect`` as (location, multiplicity) pairs.

    Quadtree subdivision (with jittered split lines when a zero falls on
    one) until each cell holds a single zero counting multiplicity;
    clusters are resolved by a two-radius circle probe and multiple zeros
    kept only when both probe radii agree.  The multiplicity sum always
    equals the top-level winding count.
    """
    fun = _as_protocol(f, fprime)
    rng = np.random.default_rng(0) if rng is None else rng
    total, rect = _winding_with_rect(fun, rect, rng, dilate=True)
    if total == 0:
        return []
    results = []
    stack = [(rect, total)]
    while stack:
        cell, cnt = stack.pop()
        c = cell.center
        probe_diam = 1e-4 * (1.0 + abs(c))
        if cnt == 1:
            z, ok = _newton(fun, c, cnt, tol)
            # strict containment: the counted zero is interior to the cell,
            # so a result outside it is a different zero reached by a basin
            # jump (accepting it would duplicate one zero and drop another)
            if ok and cell.contains(z, slack=1e-7 * (1 + abs(z))):
                results.append((z, 1))
                continue
            if cell.diameter <= 1e-11 * (1.0 + abs(c)):
                raise NonConvergent(f"cannot locate the zero near {c}")
            stack.extend(_split_cell(fun, cell, cnt, rng))
            continue
        if cell.diameter <= probe_diam:
            hit = _try_cluster(fun, cell, cnt, tol)
            if hit is not None:
                results.append(hit)
                continue
            if cell.diameter <= 1e-11 * (1.0 + abs(c)):
                raise NonConvergent(
                    f"cannot resolve {cnt} zeros near {c}: cell exhausted")
        try:
            children = _split_cell(fun, cell, cnt, rng)
        except NonConvergent:
            # high-order zeros sink below the cancellation noise floor of
            # the function long before the cell is small; probe the whole
            # cell as one cluster before giving up
            hit = _try_cluster(fun, cell, cnt, tol)
            if hit is None:
                raise
            results.append(hit)
            continue
        stack.extend(children)
    assert sum(m for _, m in results) == total
    return sorted(results, key=lambda zm: (abs(zm[0]), np.angle(zm[0])))


def _cluster_centroid(fun, cell: Rect, cnt: int):
    """First moment of the zeros in a cell: (1/2 pi i cnt) contour integral
    of z f'(z)/f(z), adaptive trapezoid on the boundary.

    Only needs to land well inside the cell (it seeds the circle probes),
    so the agreement criterion is relative to the cell size.
    """
    edges = [(v, w) for v, w in zip(cell.corners(),
                                    np.roll(cell.corners(), -1))]
    prev = None
    m = _EDGE_START
    tol = max(0.02 * cell.diameter, 1e-9 * (1.0 + abs(cell.center)))
    while m <= 2 ** 14:
        total = 0.0 + 0.0j
        for za, zb in edges:
            t = np.linspace(0.0, 1.0, m + 1)
            z = za + t * (zb - za)
            g = fun.logderiv(z)
            if np.any(~np.isfinite(g)):
                return None
            total += np.trapezoid(z * g * (zb - za), dx=1.0 / m)
        mu = total / (2j * np.pi * cnt)
        if prev is not None and abs(mu - prev) <= tol:
            return complex(mu)
        prev = mu
        m *= 2
    return complex(prev)


def _try_cluster(fun, cell: Rect, cnt: int, tol: float):
    """Accept a cell as one multiple zero (or an unresolvable cluster).

    The centre comes from the boundary moment integral (Newton cannot
    navigate the cancellation noise ball of a high-order zero), optionally
    Newton-polished; windings on two shrinking circles must then both
    reproduce the count.  Circle radii are floored by the cell size: an
    order-m zero is numerically invisible below radius ~ eps^(1/m).
    The reported location of an order-m zero is accurate to O(eps^(1/m)).
    """
    z = _cluster_centroid(fun, cell, cnt)
    if z is None or not cell.contains(z, slack=0.1 * cell.diameter):
        return None
    base = getattr(fun, "base", fun)
    move_cap = 0.05 * cell.diameter + 1e-6 * (1.0 + abs(z))
    if hasattr(base, "polish_multiple"):
        # a true m-fold zero is a simple zero of the (m-1)-th derivative:
        # recovers machine accuracy instead of the eps^(1/m) noise radius
        zp = base.polish_multiple(z, cnt)
        if abs(zp - z) <= move_cap:
            z = zp
    else:
        zn, ok = _newton(fun, z, cnt, tol, max_iter=30)
        if ok and abs(zn - z) <= move_cap:
            z = zn
    r1 = max(1e-4 * (1.0 + abs(z)), 1.4 * cell.diameter)
    r2 = max(1e-5 * (1.0 + abs(z)), 0.42 * cell.diameter)
    try:
        if _winding_circle(fun, z, r1) == cnt and _winding_circle(fun, z, r2) == cnt:
            return (z, cnt)
    except (BoundaryZero, NonConvergent):
        pass
    return None


def _split_cell(fun, cell: Rect, cnt: int, rng):
    """Split a cell into 4 children whose counts add up to the parent's.

    Split fractions are deliberately off-centre: the secular functions are
    even, so symmetric lines pass straight through axis zeros, where the
    principal-value winding is silently integer for even-order zeros.
    """
    for attempt in range(9):
        if attempt == 0:
            fx, fy = 0.513137, 0.4870113
        else:
            fx = 0.5 + float(rng.uniform(-0.12, 0.12))
            fy = 0.5 + float(rng.uniform(-0.12, 0.12))
        # escalate the sample budget: zeros near an inherited parent edge
        # need more samples than a fresh jittered line would
        cap = (2 ** 12, 2 ** 15, 2 ** 18)[min(attempt // 3, 2)]
        children = cell.split(fx, fy)
        counts = []
        try:
            for ch in children[:3]:
                counts.append(_winding_with_rect(fun, ch, rng, dilate=False,
                                                 cap=cap)[0])
        except (BoundaryZero, NonConvergent):
            continue
        rest = cnt - sum(counts)
        if rest < 0:
            continue
        if rest > 0:
            # the inferred fourth count is validated before being trusted
            try:
                w4 = _winding_with_rect(fun, children[3], rng, dilate=False,
                                        cap=cap)[0]
            except (BoundaryZero, NonConvergent):
                continue
            if w4 != rest:
                continue
        counts.append(rest)
        return [(ch, k) for ch, k in zip(children, counts) if k > 0]
    raise NonConvergent(f"could not split cell {cell} conservatively")


# -- spectra -------------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    """Finite list of eigenvalues with multiplicities and provenance.

    ``eigenvalues`` holds ``(value, multiplicity)`` sorted by modulus then
    argument.  Multiplicity is the analytic order of the corresponding
    secular zero (the algebraic count; geometric multiplicity is at most
    2).  The always-present eigenvalue 0 is reported once, with the full
    order of the secular zero at the origin in ``analytic_order_at_zero``.
    """

    eigenvalues: tuple
    method: str
    search_region: Optional[Rect]
    matrix: Optional[CMatrix2]
    analytic_order_at_zero: Optional[int] = None
    residuals: tuple = ()
    notes: tuple = ()

    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.eigenvalues], dtype=complex)

    def with_multiplicity(self) -> np.ndarray:
        out = []
        for v, m in self.eigenvalues:
            out.extend([v] * m)
        return np.array(out, dtype=complex)


def _canonical_zeros(zeros, axis_tol_rel: float = 1e-7):
    """Map +-symmetric zeros to right-half-plane representatives: drop
    mirrors with negative real part, snap imaginary-axis zeros and keep
    only their upper-half representative."""
    kept = []
    for z, m in zeros:
        ax = axis_tol_rel * (1.0 + abs(z))
        if z.real < -ax:
            continue
        if abs(z.real) <= ax:
            if z.imag < 0:
                continue
            kept.append((complex(0.0, z.imag), m))
        else:
            kept.append((z, m))
    return kept


def _merge_values(pairs, rel_tol: float = 1e-8):
    merged = []
    for v, m in sorted(pairs, key=lambda p: (abs(p[0]), np.angle(p[0]))):
        for i, (u, k) in enumerate(merged):
            if abs(v - u) <= rel_tol * (1.0 + abs(v)):
                merged[i] = ((u * k + v * m) / (k + m), k + m)
                break
        else:
            merged.append((v, m))
    return merged


def spectrum(A: CMatrix2, lambda_rect: Optional[Rect] = None, tol: float = 1e-10,
             count: Optional[int] = None, rng=None) -> Spectrum:
    """Eigenvalues ``lambda^2`` from the secular zeros in a rectangle.

    When no rectangle is given one is grown until it encloses at least
    ``count`` eigenvalues (default 12).  The rectangle always gets a small
    margin past the imaginary axis so that axis zeros (the origin, and
    the square roots of negative eigenvalues) are interior points;
    mirror images are removed afterwards.
    """
    A.require_nonsingular()
    rng = np.random.default_rng(0) if rng is None else rng
    S = build(A)
    order0 = S.order_at_origin()
    # the origin zero is structural; search for the others with it divided out
    fun = _OriginDeflated(S, order0)
    scale = max(np.sqrt(A.norm()), 1e-2)
    # deliberately asymmetric margins: symmetric boxes put contour edges and
    # split lines straight onto the axis zeros of the (even) secular function
    margin = 0.37193 * scale

    if lambda_rect is not None:
        re_lo = lambda_rect.re_min
        im_lo = lambda_rect.im_min
        if re_lo <= margin:
            re_lo = min(re_lo, 0.0) - margin
            im_lo = min(im_lo, -0.9173 * margin)
        box = Rect(re_lo, lambda_rect.re_max, im_lo, lambda_rect.im_max)
        kept = _canonical_zeros(isolate_zeros(fun, box, tol=tol, rng=rng))
        sel = []
        for z, m in kept:
            ax = 1e-7 * (1.0 + abs(z))
            on_axis = (abs(z.real) <= ax
                       and lambda_rect.im_min - 1e-9 <= z.imag <= lambda_rect.im_max + 1e-9)
            if lambda_rect.contains(z, slack=1e-9) or on_axis:
                sel.append((z, m))
        kept = sel
    else:
        want = 12 if count is None else int(count)
        L, H = 4.0 * scale, 3.0 * scale
        # cheap pre-pass: grow by winding count alone before isolating
        for _ in range(14):
            box = Rect(-margin, L, -1.031731 * H, 0.968413 * H)
            if winding_count(fun, box, rng=rng) >= want + 1:
                break
            L *= 1.45
            H *= 1.2
        kept = []
        ok = False
        last_n, stall = -1, 0
        for _ in range(16):
            box = Rect(-margin, L, -1.031731 * H, 0.968413 * H)
            try:
                kept = _canonical_zeros(isolate_zeros(fun, box, tol=tol, rng=rng))
                ok = True
            except (BoundaryZero, NonConvergent):
                # a box edge landed too close to spectral structure: nudge
                ok = False
                L *= 1.0489
                H *= 1.0171
                continue
            merged = sorted(_merge_values([(z * z, m) for z, m in kept]),
                            key=lambda p: abs(p[0]))
            n_eigs = 1 + len(merged)
            if n_eigs > want:
                # completeness: the smallest `want` eigenvalues must come
                # from the disc the box fully covers, else an off-axis
                # direction may still hide smaller ones
                coverage = 0.95 * min(L, 0.968413 * H)
                need = float(np.sqrt(abs(merged[want - 1][0])))
                if need <= coverage:
                    break
                # jump straight to the required coverage radius
                L = max(L * 1.02, need / 0.92)
                H = max(H * 1.02, need / 0.90)
                continue
            # sparse spectra (down to the defective singleton {0}) stop
            # producing new eigenvalues no matter how far the box grows
            stall = stall + 1 if n_eigs == last_n else 0
            if stall >= 2 and L > 40.0 * scale and H > 40.0 * scale:
                break
            last_n = n_eigs
            L *= 1.4
            H *= 1.3
        if not ok:
            raise NonConvergent(
                f"could not isolate eigenvalues; last box {box}")
        lambda_rect = box

    eigs = _merge_values([(z * z, m) for z, m in kept])
    eigs = [(complex(0.0), 1)] + eigs
    eigs.sort(key=lambda p: (abs(p[0]), np.angle(p[0])))
    if count is not None:
        eigs = eigs[:count]

    ref = np.max(S.logabs(lambda_rect.corners()))
    res = []
    for v, _ in eigs:
        lam = np.sqrt(complex(v))
        la = float(S.logabs(np.array([lam]))[0]) if v != 0 else -np.inf
        res.append(float(np.exp(la - ref)) if np.isfinite(la) else 0.0)

    return Spectrum(eigenvalues=tuple(eigs), method="secular-roots",
                    search_region=lambda_rect, matrix=A,
                    analytic_order_at_zero=order0,
                    residuals=tuple(res))


# -- polynomial roots ----------------------------------------------------


def polyroots(coeffs, max_degree: int = 64) -> np.ndarray:
    """All roots of a complex polynomial (coefficients highest degree
    first), by Aberth-Ehrlich simultaneous iteration with a companion
    matrix fallback.  Residuals are verified against
    ``|p(w)| <= 1e-10 * ||p|| * max(1, |w|)^deg``.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size < 2:
        raise ValueError("need at least a degree-1 polynomial")
    if abs(c[0]) == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    deg = c.size - 1
    if deg > max_degree:
        raise DegreeTooHigh(
            f"degree {deg} > {max_degree}: simultaneous root iteration is "
            "unstable at high degree")
    c = c / c[0]
    roots = _aberth(c)
    if roots is None or not _residuals_ok(c, roots):
        roots = np.roots(c)
        if not _residuals_ok(c, roots):
            raise NonConvergent("polynomial roots failed the residual check")
    return roots[np.argsort(np.abs(roots))]


def _poly_val_der(c, z):
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for ck in c:
        dp = dp * z + p
        p = p * z + ck
    return p, dp


def _aberth(c, max_iter: int = 200):
    deg = c.size - 1
    centroid = -c[1] / deg
    radius = 1.0 + float(np.max(np.abs(c[1:]) ** (1.0 / np.arange(1, deg + 1))))
    k = np.arange(deg)
    z = centroid + 0.5 * radius * np.exp(2j * np.pi * (k + 0.35) / deg)
    for _ in range(max_iter):
        p, dp = _poly_val_der(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dp != 0, p / dp, 0.0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            sums = np.sum(1.0 / diff, axis=1)
            step = newton / (1.0 - newton * sums)
        step = np.where(np.isfinite(step), step, newton)
        z = z - step
        if np.all(np.abs(step) <= 1e-14 * (1.0 + np.abs(z))):
            return z
    return None


def _residuals_ok(c, roots, rtol: float = 1e-10) -> bool:
    deg = c.size - 1
    p, _ = _poly_val_der(c, roots)
    bound = rtol * np.linalg.norm(c) * np.maximum(1.0, np.abs(roots)) ** deg
    return bool(np.all(np.abs(p) <= bound))


def cluster_roots(roots, rel_tol: float = 1e-5):
    """Group nearly equal roots into (center, multiplicity) pairs."""
    remaining = list(np.asarray(roots, dtype=complex))
    clusters = []
    while remaining:
        w = remaining.pop(0)
        group = [w]
        keep = []
        for u in remaining:
            if abs(u - w) <= rel_tol * (1.0 + abs(w)):
                group.append(u)
            else:
                keep.append(u)
        remaining = keep
        clusters.append((complex(np.mean(group)), len(group)))
    return clusters
