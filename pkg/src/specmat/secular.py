"""The entire secular function whose zeros are the square roots of the
operator eigenvalues, plus the 4x4 fundamental matrix used as an
independent cross-check.

For a nonsingular coefficient matrix ``A = V C V^{-1}`` the eigenvalue
problem ``-A f'' = lambda^2 f`` with Dirichlet conditions on the first
component and Neumann on the second reduces to a 4x4 linear system for
the fundamental-solution coefficients; its determinant is an entire
function of lambda:

* diagonalizable ``C = diag(a+, a-)``::

      EV(x) = K1 * [1 - cos(x/sqrt(a+)) cos(x/sqrt(a-))]
              - K2 * sin(x/sqrt(a+)) sin(x/sqrt(a-))

  with ``K1 = 2 v1 v2 v3 v4`` and
  ``K2 = v1^2 v4^2 sqrt(a+/a-) + v2^2 v3^2 sqrt(a-/a+)``;

* defective ``C = [[a+, 0], [1, a+]]``::

      EV(x) = (v2^2 v4^2 / (4 a+^3)) x^2
              - (det V + v2 v4 / (2 a+))^2 sin^2(x/sqrt(a+))

where ``v1..v4`` are the entries of ``V`` row-major.  ``EV(0) = 0`` by
construction, ``EV`` is even, and rescaling eigenvectors only rescales
``EV`` by a nonzero constant (the gauge), so the zero set is intrinsic.

All square roots are principal.  ``EV`` is actually invariant under
flipping the branch of either ``sqrt(a+-)`` because every branch-affected
factor appears an even number of times; the test suite asserts this.

Trigonometric factors of complex argument are evaluated through scaled
exponentials with the dominant real exponent factored out, so that the
log-derivative (what contour integration consumes) never overflows even
hundreds of units away from the real axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, SingularJordan
from .mat2 import DEFECTIVE_GAP_TOL, CMatrix2, Eigen2, EigKind, eig2

_LOG_MAX = 709.0  # np.exp overflows just above this


def _scaled_trig(w):
    """Return (cos_m, sin_m, e) with cos w = cos_m * exp(e), sin w = sin_m * exp(e).

    ``e = |Im w| >= 0`` and the mantissas are O(1), so products of several
    factors can be combined without intermediate overflow.
    """
    w = np.asarray(w, dtype=complex)
    e = np.abs(w.imag)
    up = np.exp(1j * w.real - (w.imag + e))    # e^{iw} * e^{-e}
    dn = np.exp(-1j * w.real + (w.imag - e))   # e^{-iw} * e^{-e}
    cos_m = 0.5 * (up + dn)
    sin_m = (up - dn) / 2j
    return cos_m, sin_m, e


def _recombine(mantissa, logscale):
    """mantissa * exp(logscale), letting genuinely huge values overflow to inf."""
    with np.errstate(over="ignore"):
        first = np.exp(np.minimum(logscale, _LOG_MAX))
        rest = np.exp(np.maximum(logscale - _LOG_MAX, 0.0))
        return mantissa * first * rest


@dataclass(frozen=True)
class SecularFn:
    """Evaluatable secular function of one matrix, immutable and reentrant.

    ``kind`` mirrors the Jordan structure.  The function is kept in the
    gauge fixed by the normalised eigenvectors of :func:`specmat.mat2.eig2`;
    :meth:`gauge_to` returns the constant relating it to any other valid
    eigenvector convention.

    Internally the function is stored in the cosine-sum form::

        EV(x) = q x^2 + c0 + c1 cos(f1 x) + c2 cos(f2 x)

    (``q = 0`` for diagonalizable structure, ``c1 = 0`` for defective)
    with ``f1 = 1/sqrt(a+) + 1/sqrt(a-)``, ``f2 = 1/sqrt(a+) - 1/sqrt(a-)``
    and ``c1 = (t1 - t2)^2 / 2``, ``c2 = -(t1 + t2)^2 / 2`` for
    ``t1 = v1 v4 (a+/a-)^{1/4}``, ``t2 = v2 v3 (a-/a+)^{1/4}``.  This is
    algebraically identical to the product form but free of its
    catastrophic cancellation: coefficient degeneracies (the real-spectrum
    curve, the worked example, the defective singleton) are resolved once,
    at build time, instead of resurging exponentially at evaluation time.
    """

    kind: EigKind
    matrix: CMatrix2
    eigen: Eigen2
    # cosine-sum data
    q: complex = 0.0
    c0: complex = 0.0
    c1: complex = 0.0
    c2: complex = 0.0
    f1: complex = 0.0
    f2: complex = 0.0
    # conventional coefficients, kept for gauge work and the polynomial path
    sqrt_a_plus: complex = 0.0
    sqrt_a_minus: complex = 0.0
    coeff_prod: complex = 0.0   # K1 = 2 v1 v2 v3 v4
    coeff_cross: complex = 0.0  # K2, coefficient of the sin*sin term
    coeff_x2: complex = 0.0     # defective: v2^2 v4^2 / (4 a+^3)
    coeff_sin2: complex = 0.0   # defective: (det V + v2 v4 / (2 a+))^2

    # -- evaluation -----------------------------------------------------

    def _terms_scaled(self, x, order: int):
        """(mantissa, logscale) of the order-th derivative of the cosine-sum
        form.  The shared exponent only ranges over terms with nonzero
        coefficient: dropped (cancelled) terms must not deflate the rest.
        """
        x = np.asarray(x, dtype=complex)
        zero = np.zeros_like(x)
        parts = []   # (coefficient, mantissa array, exponent array)
        if order == 0:
            parts.append((1.0, self.q * x * x + self.c0, zero.real))
        elif order == 1:
            parts.append((1.0, 2.0 * self.q * x, zero.real))
        elif order == 2:
            parts.append((1.0, 2.0 * self.q + zero, zero.real))
        for c, f in ((self.c1, self.f1), (self.c2, self.f2)):
            if c == 0:
                continue
            cm, sm, e = _scaled_trig(f * x)
            cyc = order % 4
            tm = (cm, -sm, -cm, sm)[cyc]
            parts.append((c * f ** order, tm, e))
        if not parts:
            return zero, zero.real
        e = parts[0][2]
        for _, _, ei in parts[1:]:
            e = np.maximum(e, ei)
        mant = np.zeros_like(x)
        for coef, tm, ei in parts:
            mant = mant + coef * tm * np.exp(ei - e)
        if order <= 1:
            # the function is even with a structural zero at the origin:
            # the value and slope there are exactly zero
            mant = np.where(x == 0, 0.0, mant)
        return mant, e

    def eval_scaled(self, x):
        """Return (mantissa, logscale) with EV(x) = mantissa * exp(logscale)."""
        return self._terms_scaled(x, 0)

    def deriv_scaled(self, x):
        """Return (mantissa, logscale) for EV'(x)."""
        return self._terms_scaled(x, 1)

    def value(self, x):
        """EV(x); overflows to inf only when the value itself exceeds the
        double range (use :meth:`eval_scaled` there)."""
        m, e = self.eval_scaled(x)
        return _recombine(m, e)

    def deriv(self, x):
        """EV'(x), analytic derivative of the closed form."""
        m, e = self.deriv_scaled(x)
        return _recombine(m, e)

    def logderiv(self, x):
        """EV'(x)/EV(x), single pass over the shared trig factors."""
        x = np.asarray(x, dtype=complex)
        parts = []
        for c, f in ((self.c1, self.f1), (self.c2, self.f2)):
            if c != 0:
                cm, sm, e = _scaled_trig(f * x)
                parts.append((c, f, cm, sm, e))
        e = np.zeros_like(x, dtype=float)
        for _, _, _, _, ei in parts:
            e = np.maximum(e, ei)
        poly = np.exp(-e)
        val = (self.q * x * x + self.c0) * poly
        der = 2.0 * self.q * x * poly
        for c, f, cm, sm, ei in parts:
            w = np.exp(ei - e)
            val = val + c * cm * w
            der = der - c * f * sm * w
        with np.errstate(divide="ignore", invalid="ignore"):
            return der / val

    def polish_multiple(self, z0: complex, mult: int, max_iter: int = 60) -> complex:
        """Machine-precision location of an m-fold zero near z0: simple
        Newton on the (m-1)-th derivative, which has a simple zero there.
        Falls back to z0 when the iteration leaves its small basin.
        """
        k = mult - 1
        z = complex(z0)
        for _ in range(max_iter):
            num, en = self._terms_scaled(np.array([z]), k)
            den, ed = self._terms_scaled(np.array([z]), k + 1)
            if den[0] == 0 or not np.isfinite(den[0]):
                return complex(z0)
            step = complex((num[0] / den[0]) * np.exp(en[0] - ed[0]))
            z -= step
            if abs(z - z0) > 0.1 * (1.0 + abs(z0)):
                return complex(z0)
            if abs(step) <= 1e-15 * (1.0 + abs(z)):
                return z
        return z

    def logabs(self, x):
        """log|EV(x)|, overflow-free."""
        m, e = self.eval_scaled(x)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(m)) + e

    __call__ = value

    def order_at_origin(self, rel_tol: float = 1e-10) -> int:
        """Analytic order of the structural zero at 0 (always even, >= 2),
        decided from the Taylor coefficients of the cosine-sum form.
        Robust where direct evaluation is pure cancellation noise.
        """
        # EV = q x^2 + c0 + sum ci cos(fi x); the constant part vanishes
        # identically, so the series starts at x^2
        taylor2 = self.q - (self.c1 * self.f1 ** 2 + self.c2 * self.f2 ** 2) / 2.0
        scale2 = (abs(self.q) + abs(self.c1 * self.f1 ** 2)
                  + abs(self.c2 * self.f2 ** 2)) / 2.0
        if abs(taylor2) > rel_tol * max(scale2, 1e-300):
            return 2
        taylor4 = (self.c1 * self.f1 ** 4 + self.c2 * self.f2 ** 4) / 24.0
        scale4 = (abs(self.c1 * self.f1 ** 4) + abs(self.c2 * self.f2 ** 4)) / 24.0
        if abs(taylor4) > rel_tol * max(scale4, 1e-300):
            return 4
        taylor6 = -(self.c1 * self.f1 ** 6 + self.c2 * self.f2 ** 6) / 720.0
        scale6 = (abs(self.c1 * self.f1 ** 6) + abs(self.c2 * self.f2 ** 6)) / 720.0
        if abs(taylor6) > rel_tol * max(scale6, 1e-300):
            return 6
        raise IllConditioned("origin zero of order > 6; not supported")

    # -- gauge ----------------------------------------------------------

    def gauge_to(self, V_ref) -> complex:
        """Constant g such that this function equals g times the secular
        function written with eigenvector matrix ``V_ref`` (columns
        proportional to this one's).
        """
        V_ref = np.asarray(V_ref, dtype=complex)
        V = self.eigen.V
        if self.kind is EigKind.DEFECTIVE:
            # only the eigenvector column (second) carries gauge freedom
            j = int(np.argmax(np.abs(V_ref[:, 1])))
            beta = V[j, 1] / V_ref[j, 1]
            return beta ** 4
        ratios = []
        for col in (0, 1):
            j = int(np.argmax(np.abs(V_ref[:, col])))
            ratios.append(V[j, col] / V_ref[j, col])
        return (ratios[0] * ratios[1]) ** 2


def _snap_cancel(value: complex, magnitude: float, rel: float = 5e-14) -> complex:
    """Zero out a sum that cancelled to rounding level: structural
    degeneracies (exact curve points, the worked examples) produce exact
    zeros that must not resurge under exponential growth."""
    return 0.0 if abs(value) <= rel * magnitude else value


def _build_diagonalizable(A: CMatrix2, e: Eigen2) -> SecularFn:
    v1, v2 = e.V[0, 0], e.V[0, 1]
    v3, v4 = e.V[1, 0], e.V[1, 1]
    sp = np.sqrt(complex(e.a_plus))
    sm = np.sqrt(complex(e.a_minus))
    k1 = 2.0 * v1 * v2 * v3 * v4
    k2 = v1 ** 2 * v4 ** 2 * (sp / sm) + v2 ** 2 * v3 ** 2 * (sm / sp)
    rho = np.sqrt(sp / sm)
    t1 = v1 * v4 * rho
    t2 = v2 * v3 / rho
    mag = abs(t1) + abs(t2)
    diff = _snap_cancel(t1 - t2, mag)
    tot = _snap_cancel(t1 + t2, mag)
    c1 = 0.5 * diff ** 2
    c2 = -0.5 * tot ** 2
    # c0 equals K1 = 2 t1 t2 analytically; the float-exact negative sum
    # keeps the structural zero at the origin exact
    return SecularFn(kind=EigKind.DISTINCT if e.kind is not EigKind.SCALAR else EigKind.SCALAR,
                     matrix=A, eigen=e,
                     q=0.0, c0=-(c1 + c2), c1=c1, c2=c2,
                     f1=1.0 / sp + 1.0 / sm, f2=1.0 / sp - 1.0 / sm,
                     sqrt_a_plus=sp, sqrt_a_minus=sm,
                     coeff_prod=k1, coeff_cross=k2)


def _build_defective(A: CMatrix2, e: Eigen2) -> SecularFn:
    v2, v4 = e.V[0, 1], e.V[1, 1]
    ap = complex(e.a_plus)
    sp = np.sqrt(ap)
    det_v = e.V[0, 0] * e.V[1, 1] - e.V[0, 1] * e.V[1, 0]
    s = _snap_cancel(det_v + v2 * v4 / (2.0 * ap),
                     abs(det_v) + abs(v2 * v4 / (2.0 * ap)))
    big_r = s ** 2
    # EV = q x^2 - R sin^2(x/sqrt(a+)) = q x^2 - R/2 + (R/2) cos(2x/sqrt(a+))
    return SecularFn(kind=EigKind.DEFECTIVE, matrix=A, eigen=e,
                     q=v2 ** 2 * v4 ** 2 / (4.0 * ap ** 3),
                     c0=-0.5 * big_r, c1=0.0, c2=0.5 * big_r,
                     f1=0.0, f2=2.0 / sp,
                     sqrt_a_plus=sp,
                     coeff_x2=v2 ** 2 * v4 ** 2 / (4.0 * ap ** 3),
                     coeff_sin2=big_r)


def build(A: CMatrix2, check_margin: bool = True) -> SecularFn:
    """Construct the secular function of ``A`` (nonsingular required).

    In the near-defective margin (eigenvalue gap within 10x of the
    defective classification threshold) both closed forms are evaluated
    and their zero counts compared on a reference rectangle; disagreement
    raises :class:`IllConditioned` instead of silently returning a
    cancelling formula.
    """
    A.require_nonsingular()
    e = eig2(A)
    if e.kind is EigKind.DEFECTIVE:
        fn = _build_defective(A, e)
    else:
        fn = _build_diagonalizable(A, e)

    if check_margin and e.kind is not EigKind.SCALAR:
        margin = 10.0 * DEFECTIVE_GAP_TOL * (1.0 + A.norm())
        if 0.0 < e.gap <= margin:
            _assert_margin_consistency(A, e, fn)
    return fn


def _assert_margin_consistency(A: CMatrix2, e: Eigen2, fn: SecularFn) -> None:
    """Compare zero counts of the two formulas on a reference box."""
    from .rootfind import Rect, winding_count

    alt = _build_defective(A, _defective_surrogate(A)) if fn.kind is not EigKind.DEFECTIVE \
        else _build_diagonalizable(A, _diagonalizable_surrogate(A))
    scale = abs(np.sqrt(complex(0.5 * A.trace)))
    box = Rect(-0.45 * scale, 9.3 * scale, -2.1 * scale, 2.3 * scale)
    rng = np.random.default_rng(20260810)
    n1 = winding_count(fn, box, rng=rng)
    n2 = winding_count(alt, box, rng=rng)
    if n1 != n2:
        raise IllConditioned(
            f"near-defective matrix: the two secular representations count "
            f"{n1} vs {n2} zeros on the reference box")


def _defective_surrogate(A: CMatrix2) -> Eigen2:
    """Jordan data of the nearest defective matrix (eigenvalues collapsed)."""
    M = A.as_array()
    mu = 0.5 * A.trace
    B = M - mu * np.eye(2)
    # eigenvector: right singular vector of the small singular value
    _, s, Vh = np.linalg.svd(B)
    w = Vh.conj().T[:, 1]
    u = np.linalg.pinv(B, rcond=1e-8) @ w
    V = np.column_stack([u, w])
    C = np.array([[mu, 0], [1, mu]], dtype=complex)
    return Eigen2(mu, mu, w, w, EigKind.DEFECTIVE, V, C, gap=0.0)


def _diagonalizable_surrogate(A: CMatrix2) -> Eigen2:
    """Forcibly diagonalised data for a matrix classified defective."""
    M = A.as_array()
    vals, vecs = np.linalg.eig(M)
    order = np.argsort(-vals.real - 1e-9 * vals.imag)
    vals, vecs = vals[order], vecs[:, order]
    return Eigen2(vals[0], vals[1], vecs[:, 0], vecs[:, 1], EigKind.DISTINCT,
                  vecs, np.diag(vals), gap=abs(vals[0] - vals[1]))


# -- fundamental matrix ------------------------------------------------


@dataclass(frozen=True)
class FundamentalMatrix:
    """Value of the 4x4 propagator exp(B_lambda * x) for the first-order
    system Phi' = B_lambda Phi, B_lambda = [[0, I], [-lambda^2 C^{-1}, 0]]."""

    value: np.ndarray
    jordan: np.ndarray
    lam: complex
    x: float


def _mat_cos_sin(W: np.ndarray):
    """cos(W) and sin(W) for a 2x2 W that is either diagonal or
    lower-triangular with equal diagonal entries."""
    if abs(W[1, 0]) == 0.0 and abs(W[0, 1]) == 0.0:
        return np.diag(np.cos(np.diag(W))), np.diag(np.sin(np.diag(W)))
    if abs(W[0, 1]) == 0.0 and abs(W[0, 0] - W[1, 1]) < 1e-13 * (1 + abs(W[0, 0])):
        m, eps = W[0, 0], W[1, 0]
        cos = np.array([[np.cos(m), 0], [-eps * np.sin(m), np.cos(m)]], dtype=complex)
        sin = np.array([[np.sin(m), 0], [eps * np.cos(m), np.sin(m)]], dtype=complex)
        return cos, sin
    raise ValueError("unsupported matrix shape for trig evaluation")


def _jordan_inv_sqrt(C: np.ndarray):
    """C^{1/2} and C^{-1/2} for diagonal or defective-Jordan C."""
    if abs(C[1, 0]) == 0.0:
        rp, rm = np.sqrt(complex(C[0, 0])), np.sqrt(complex(C[1, 1]))
        return np.diag([rp, rm]), np.diag([1 / rp, 1 / rm])
    ap = complex(C[0, 0])
    r = np.sqrt(ap)
    half = np.array([[r, 0], [1 / (2 * r), r]], dtype=complex)
    half_inv = np.array([[1 / r, 0], [-1 / (2 * ap * r), 1 / r]], dtype=complex)
    return half, half_inv


def fundamental_matrix(C: np.ndarray, lam: complex, x: float) -> FundamentalMatrix:
    """Propagator of the reduced first-order system at position x.

    Block formula: ``[[cos(lam C^{-1/2} x), lam^{-1} C^{1/2} sin(lam C^{-1/2} x)],
    [-lam C^{-1/2} sin(lam C^{-1/2} x), cos(lam C^{-1/2} x)]]`` with the
    nilpotent limit ``[[I, xI], [0, I]]`` at lam = 0.
    """
    C = np.asarray(C, dtype=complex)
    if abs(np.linalg.det(C)) <= 1e-14 * max(np.linalg.norm(C), 1e-300) ** 2:
        raise SingularJordan("Jordan factor is singular")
    out = np.zeros((4, 4), dtype=complex)
    if lam == 0:
        out[:2, :2] = np.eye(2)
        out[2:, 2:] = np.eye(2)
        out[:2, 2:] = x * np.eye(2)
        return FundamentalMatrix(out, C, complex(lam), float(x))
    half, half_inv = _jordan_inv_sqrt(C)
    cos, sin = _mat_cos_sin(lam * x * half_inv)
    out[:2, :2] = cos
    out[:2, 2:] = (half @ sin) / lam
    out[2:, :2] = -lam * (half_inv @ sin)
    out[2:, 2:] = cos
    return FundamentalMatrix(out, C, complex(lam), float(x))


def boundary_determinant(S: SecularFn, lam: complex) -> complex:
    """Determinant of the 4x4 boundary-condition system assembled from the
    fundamental matrix at x = 1; vanishes exactly at the zeros of the
    secular function (and agrees with it up to one constant gauge factor).
    """
    V = S.eigen.V
    # boundary rows: first component of Vg at x, second component of Vg' at x
    psi = np.array([[V[0, 0], V[0, 1], 0, 0],
                    [0, 0, V[1, 0], V[1, 1]]], dtype=complex)
    rows0 = psi @ np.eye(4)
    rows1 = psi @ fundamental_matrix(S.eigen.C, lam, 1.0).value
    return complex(np.linalg.det(np.vstack([rows0, rows1])))
