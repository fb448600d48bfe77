"""Exact and numerically robust 2x2 complex linear algebra.

Everything downstream is driven by the eigenstructure computed here:
eigenvalues with a fixed ordering convention, gauge-normalised
eigenvectors, an explicit Jordan factorisation ``A = V C V^{-1}`` (with
the defective block written lower-triangular with unit subdiagonal),
the oblique boundary projection of the adjoint operator, and the
numerical-range ellipse.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularMatrix

# Classification thresholds.  The secular function changes formula across
# the defective split, so the cutoffs are part of the module contract.
DEFECTIVE_GAP_TOL = 1e-8
DEFECTIVE_COND_TOL = 1e8
SCALAR_TOL = 1e-12
SINGULAR_TOL = 1e-14


class EigKind(enum.Enum):
    DISTINCT = "distinct"
    SCALAR = "scalar"
    DEFECTIVE = "defective"


@dataclass(frozen=True)
class CMatrix2:
    """A 2x2 complex matrix, row-major entries ``(a, b; c, d)``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            v = complex(getattr(self, name))
            if not (np.isfinite(v.real) and np.isfinite(v.imag)):
                raise ValueError(f"entry {name} is not finite: {v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def from_array(cls, M) -> "CMatrix2":
        M = np.asarray(M)
        if M.shape != (2, 2):
            raise ValueError(f"expected a 2x2 array, got shape {M.shape}")
        return cls(complex(M[0, 0]), complex(M[0, 1]), complex(M[1, 0]), complex(M[1, 1]))

    @classmethod
    def real(cls, a: float, b: float, c: float, d: float) -> "CMatrix2":
        return cls(complex(a), complex(b), complex(c), complex(d))

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self.as_array()))

    @property
    def is_real(self) -> bool:
        return all(abs(v.imag) == 0.0 for v in (self.a, self.b, self.c, self.d))

    @property
    def is_singular(self) -> bool:
        """Singularity at working precision: below this the operator is not
        closed and downstream modules must refuse."""
        return abs(self.det) <= SINGULAR_TOL * max(self.norm(), 1e-300) ** 2

    def require_nonsingular(self) -> None:
        if self.is_singular:
            raise SingularMatrix(
                f"matrix {self.as_array().tolist()} is singular at working "
                "precision; the operator is not closed and its spectrum is C"
            )

    def scaled(self, s: complex) -> "CMatrix2":
        return CMatrix2(s * self.a, s * self.b, s * self.c, s * self.d)

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


@dataclass(frozen=True)
class Eigen2:
    """Eigenstructure of a 2x2 matrix.

    ``V`` has the (generalised) eigenvectors as columns and ``C`` is the
    Jordan factor, diagonal for the non-defective kinds and
    ``[[a+, 0], [1, a+]]`` for the defective one, so that
    ``A = V C V^{-1}`` always holds.
    """

    a_plus: complex
    a_minus: complex
    v_plus: np.ndarray
    v_minus: np.ndarray
    kind: EigKind
    V: np.ndarray
    C: np.ndarray
    gap: float = field(default=0.0)  # |a_plus - a_minus|, for margin checks

    def reconstruct(self) -> np.ndarray:
        return self.V @ self.C @ np.linalg.inv(self.V)


@dataclass(frozen=True)
class Ellipse:
    """Numerical-range ellipse of a 2x2 matrix (possibly degenerate)."""

    focus1: complex
    focus2: complex
    major_axis_length: float
    minor_axis_length: float
    contains_origin: bool

    @property
    def center(self) -> complex:
        return 0.5 * (self.focus1 + self.focus2)

    def boundary(self, n: int = 512) -> np.ndarray:
        """Sampled boundary points (a segment or point when degenerate)."""
        c = self.center
        df = self.focus2 - self.focus1
        half_major = 0.5 * self.major_axis_length
        half_minor = 0.5 * self.minor_axis_length
        rot = np.exp(1j * np.angle(df)) if abs(df) > 0 else 1.0
        t = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
        return c + rot * (half_major * np.cos(t) + 1j * half_minor * np.sin(t))


def _gauge_normalize(v: np.ndarray) -> np.ndarray:
    """Unit Euclidean norm, first nonzero component rotated real positive."""
    v = np.asarray(v, dtype=complex)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ValueError("zero eigenvector")
    v = v / nv
    lead = v[0] if abs(v[0]) > 1e-12 else v[1]
    return v * (abs(lead) / lead)


def _eigvec_for(M: np.ndarray, mu: complex) -> np.ndarray:
    """Null vector of the rank-one matrix M - mu by cross-product rows."""
    B = M - mu * np.eye(2)
    # candidates orthogonal to each row of B (without conjugation: B v = 0)
    c1 = np.array([B[0, 1], -B[0, 0]])
    c2 = np.array([B[1, 1], -B[1, 0]])
    v = c1 if np.linalg.norm(c1) >= np.linalg.norm(c2) else c2
    if np.linalg.norm(v) <= 1e-14 * max(1.0, np.linalg.norm(M)):
        # B is (numerically) zero: any vector works
        v = np.array([1.0, 0.0], dtype=complex)
    return v


def eig2(A: CMatrix2) -> Eigen2:
    """Eigen decomposition with explicit Jordan structure.

    The larger-real-part convention follows the principal square root of
    the discriminant: ``a_plus = (tr + sqrt(tr^2 - 4 det))/2``, so real
    distinct eigenvalues satisfy ``a_minus < a_plus``.
    """
    M = A.as_array()
    nrm = max(A.norm(), 1e-300)
    tr = A.trace
    disc = (A.a - A.d) ** 2 + 4.0 * A.b * A.c
    sq = np.sqrt(complex(disc))
    ap = 0.5 * (tr + sq)
    am = 0.5 * (tr - sq)
    gap = abs(ap - am)

    if abs(A.b) <= SCALAR_TOL * (1 + nrm) and abs(A.c) <= SCALAR_TOL * (1 + nrm) \
            and gap <= SCALAR_TOL * (1 + nrm):
        mu = 0.5 * tr
        V = np.eye(2, dtype=complex)
        C = np.diag([mu, mu]).astype(complex)
        return Eigen2(mu, mu, V[:, 0], V[:, 1], EigKind.SCALAR, V, C, gap=gap)

    vp = _eigvec_for(M, ap)
    vm = _eigvec_for(M, am)
    Vcand = np.column_stack([vp / np.linalg.norm(vp), vm / np.linalg.norm(vm)])
    cond = np.linalg.cond(Vcand)

    if gap <= DEFECTIVE_GAP_TOL * (1 + nrm) and cond > DEFECTIVE_COND_TOL:
        mu = 0.5 * tr  # the repeated eigenvalue, symmetrised
        w = _gauge_normalize(_eigvec_for(M, mu))
        # generalised vector: (A - mu) u = w, minimal-norm solution
        u = np.linalg.pinv(M - mu * np.eye(2), rcond=1e-10) @ w
        V = np.column_stack([u, w])
        C = np.array([[mu, 0.0], [1.0, mu]], dtype=complex)
        return Eigen2(mu, mu, w, w, EigKind.DEFECTIVE, V, C, gap=gap)

    vp = _gauge_normalize(vp)
    vm = _gauge_normalize(vm)
    V = np.column_stack([vp, vm])
    C = np.diag([ap, am]).astype(complex)
    return Eigen2(ap, am, vp, vm, EigKind.DISTINCT, V, C, gap=gap)


def adjoint_projection(A: CMatrix2) -> np.ndarray:
    """Oblique rank-one projection defining the adjoint boundary conditions.

    Returns P-hat with range(P-hat) = range(A(I-P))^perp and
    range(I - P-hat) = range(AP)^perp, where P = diag(1, 0).  Only defined
    for nonsingular A; for singular A the operator is not closed and there
    is no adjoint data.
    """
    A.require_nonsingular()
    # range(A(I-P)) = span{(b, d)};  its orthocomplement is span{p}
    p = np.array([np.conj(A.d), -np.conj(A.b)], dtype=complex)
    # range(AP) = span{(a, c)}; kernel of P-hat must be its orthocomplement,
    # i.e. P-hat x = p * <x, eta> / <p, eta> with eta = (a, c)
    eta = np.array([A.a, A.c], dtype=complex)
    denom = p @ np.conj(eta)
    return np.outer(p, np.conj(eta)) / denom


def numerical_range(A: CMatrix2) -> Ellipse:
    """Numerical-range ellipse: foci at the eigenvalues, minor axis
    ``sqrt(tr(A*A) - |a+|^2 - |a-|^2)`` (elliptical range theorem)."""
    e = eig2(A)
    M = A.as_array()
    tr_gram = float(np.real(np.trace(M.conj().T @ M)))
    minor_sq = tr_gram - abs(e.a_plus) ** 2 - abs(e.a_minus) ** 2
    minor = float(np.sqrt(max(minor_sq, 0.0)))
    dist_foci = abs(e.a_plus - e.a_minus)
    major = float(np.hypot(minor, dist_foci))
    # origin lies inside iff |0-f1| + |0-f2| <= major axis length
    inside = abs(e.a_plus) + abs(e.a_minus) <= major + 1e-14 * (1 + major)
    return Ellipse(e.a_plus, e.a_minus, major, minor, bool(inside))


def enclosing_sector(ell: Ellipse, tol: float = 1e-12):
    """Minimal sector {alpha <= arg z <= beta} containing the ellipse.

    Returns ``(alpha, beta)`` with ``beta - alpha < pi``, or None when no
    such sector exists (the origin lies in the ellipse, or the angular
    span is too wide).
    """
    if ell.contains_origin:
        return None
    pts = ell.boundary(2048)
    if np.any(np.abs(pts) <= tol):
        return None
    ref = np.angle(ell.center if abs(ell.center) > tol else pts[0])
    # unwrap all boundary angles about the reference direction
    rel = np.angle(pts * np.exp(-1j * ref))
    if np.max(rel) - np.min(rel) >= np.pi:
        return None
    return float(ref + np.min(rel)), float(ref + np.max(rel))
