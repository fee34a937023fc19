"""Szego cocycle matrices, renormalized transfer products, and related identities.

The one-step cocycle at coefficient alpha and spectral parameter z is the
determinant-one matrix

    M = (1/rho) [[sqrt(z), -conj(alpha)/sqrt(z)], [-alpha sqrt(z), 1/sqrt(z)]].

n-step products are accumulated in factored form (unit-spectral-norm matrix
plus a running log of the norms), which keeps arbitrarily long products inside
floating-point range.  The square root uses the principal branch
exp(i theta / 2) with theta in [0, 2 pi); all identities that depend on the
branch are stated up to a global sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cmv import scheme_submatrix
from .model import VerblunskyScheme, verblunsky_orbit_batch

__all__ = [
    "ConjugationError",
    "CocycleError",
    "FactoredProduct",
    "ScalingFactor",
    "circle_sqrt",
    "szego_matrix",
    "transfer_product",
    "product_batch",
    "sl2r_conjugate",
    "scaling_factor",
    "transfer_via_determinants",
    "spectral_norms_2x2",
]

# unitary conjugator taking the cocycle matrices into SL(2, R)
SL2R_CONJUGATOR = -(1.0 / (1.0 + 1.0j)) * np.array([[1.0, -1.0j], [1.0, 1.0j]], dtype=complex)


class CocycleError(ValueError):
    """Raised for invalid cocycle inputs (|alpha| >= 1, z = 0)."""


class ConjugationError(RuntimeError):
    """Raised when the SL(2,R) conjugation leaves a non-negligible imaginary part."""


def circle_sqrt(z: complex, branch: int = 1):
    """sqrt(z) on the branch exp(i theta / 2), theta = arg(z) mod 2 pi; branch=-1 negates."""
    z = complex(z)
    if z == 0:
        raise CocycleError("z must be nonzero")
    theta = np.angle(z) % (2.0 * np.pi)
    return branch * np.sqrt(abs(z)) * np.exp(0.5j * theta)


def szego_matrix(alpha: complex, z: complex, branch: int = 1) -> np.ndarray:
    """One-step determinant-one cocycle matrix at coefficient alpha and parameter z."""
    alpha = complex(alpha)
    if abs(alpha) >= 1.0:
        raise CocycleError(f"|alpha| = {abs(alpha):.6f} >= 1")
    rho = np.sqrt(1.0 - abs(alpha) ** 2)
    sz = circle_sqrt(z, branch)
    return np.array(
        [[sz, -np.conj(alpha) / sz], [-alpha * sz, 1.0 / sz]], dtype=complex
    ) / rho


def spectral_norms_2x2(B: np.ndarray) -> np.ndarray:
    """Spectral norms of a batch of 2x2 matrices, shape (..., 2, 2) -> (...).

    Largest eigenvalue of the Hermitian Gram matrix B* B in closed form.  The
    discriminant is a sum of squares, so near-unitary matrices do not suffer
    the sqrt(eps) cancellation of the Frobenius/determinant formula.
    """
    B = np.asarray(B)
    b00, b01 = B[..., 0, 0], B[..., 0, 1]
    b10, b11 = B[..., 1, 0], B[..., 1, 1]
    h00 = np.abs(b00) ** 2 + np.abs(b10) ** 2
    h11 = np.abs(b01) ** 2 + np.abs(b11) ** 2
    h01 = np.conj(b00) * b01 + np.conj(b10) * b11
    half_gap = 0.5 * (h00 - h11)
    disc = np.sqrt(half_gap**2 + np.abs(h01) ** 2)
    return np.sqrt(0.5 * (h00 + h11) + disc)


@dataclass(frozen=True)
class FactoredProduct:
    """A 2x2 product stored as exp(log_scale) * matrix with ||matrix||_2 = 1.

    det_log is the complex log of the determinant of the represented product,
    accumulated factor by factor.  For products of determinant-one matrices it
    stays near 0 up to roundoff; evaluating det(matrix) directly instead would
    cancel catastrophically once the product is strongly hyperbolic.
    """

    matrix: np.ndarray
    log_scale: float
    det_log: complex = 0.0

    @property
    def norm_log(self) -> float:
        """log of the spectral norm of the represented product."""
        return self.log_scale

    def det(self) -> complex:
        """Determinant of the represented product (from the accumulated log)."""
        return complex(np.exp(self.det_log))

    def value(self) -> np.ndarray:
        """The represented matrix; may overflow for log_scale beyond ~709."""
        return np.exp(self.log_scale) * self.matrix

    def compose(self, first: "FactoredProduct") -> "FactoredProduct":
        """The product (self o first), i.e. self applied after first."""
        prod = self.matrix @ first.matrix
        s = float(spectral_norms_2x2(prod))
        return FactoredProduct(
            prod / s,
            self.log_scale + first.log_scale + np.log(s),
            self.det_log + first.det_log,
        )

    def distance(self, other: "FactoredProduct") -> float:
        """Relative distance: ||exp(dls) A - B||_2 with dls = self.ls - other.ls."""
        dls = self.log_scale - other.log_scale
        return float(spectral_norms_2x2(np.exp(dls) * self.matrix - other.matrix))


def product_batch(alphas: np.ndarray, z: complex, branch: int = 1):
    """Renormalized transfer products over a batch of coefficient columns.

    `alphas` has shape (n, S): column s holds the coefficients alpha_0..alpha_{n-1}
    of one orbit.  Returns (log_scales, B, det_logs) of shapes (S,), (S, 2, 2),
    (S,); the true product for column s is exp(log_scales[s]) * B[s] with the
    j = n-1 factor leftmost, and det_logs accumulates the complex log of its
    determinant.  The norm is refactored after every multiplication.
    """
    alphas = np.atleast_2d(np.asarray(alphas, dtype=complex))
    n, S = alphas.shape
    sz = circle_sqrt(z, branch)
    inv_sz = 1.0 / sz
    B = np.zeros((S, 2, 2), dtype=complex)
    B[:, 0, 0] = 1.0
    B[:, 1, 1] = 1.0
    ls = np.zeros(S)
    det_log = np.zeros(S, dtype=complex)
    for j in range(n):
        a = alphas[j]
        rho = np.sqrt(1.0 - np.abs(a) ** 2)
        m00 = sz / rho
        m01 = -np.conj(a) * inv_sz / rho
        m10 = -a * sz / rho
        m11 = inv_sz / rho
        det_log += np.log(m00 * m11 - m01 * m10)
        b00, b01, b10, b11 = B[:, 0, 0], B[:, 0, 1], B[:, 1, 0], B[:, 1, 1]
        n00 = m00 * b00 + m01 * b10
        n01 = m00 * b01 + m01 * b11
        n10 = m10 * b00 + m11 * b10
        n11 = m10 * b01 + m11 * b11
        B = np.stack(
            [np.stack([n00, n01], axis=-1), np.stack([n10, n11], axis=-1)], axis=-2
        )
        s = spectral_norms_2x2(B)
        B /= s[:, None, None]
        ls += np.log(s)
    return ls, B, det_log


def transfer_product(
    s: VerblunskyScheme, n: int, z: complex, branch: int = 1, base: np.ndarray | None = None
) -> FactoredProduct:
    """The n-step product M(T^{n-1}) ... M(T^0) in factored form.

    `base` optionally overrides the scheme's base phase as an (x, y) pair.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if base is None:
        base = np.array([s.base.x, s.base.y])
    alphas = verblunsky_orbit_batch(s, n, np.asarray(base, dtype=float).reshape(1, 2))
    ls, B, dl = product_batch(alphas, z, branch)
    return FactoredProduct(B[0], float(ls[0]), complex(dl[0]))


def sl2r_conjugate(m: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Conjugate a cocycle matrix into SL(2, R) by the fixed unitary Q: A = Q* m Q.

    The result is returned with the imaginary part stripped; a residual
    imaginary part >= tol signals a matrix outside the expected family
    (wrong branch or |z| != 1) and raises ConjugationError.
    """
    Q = SL2R_CONJUGATOR
    A = Q.conj().T @ np.asarray(m, dtype=complex) @ Q
    resid = float(np.max(np.abs(A.imag)))
    if resid >= tol:
        raise ConjugationError(f"conjugation residual {resid:.3e} >= {tol:.0e}")
    return A.real.copy()


@dataclass(frozen=True)
class ScalingFactor:
    """Uniform a-priori bound: (1/n) log ||M_n|| <= value for all n.

    value = max(1, log(sup_inv_rho + c_alpha + coupling_term + abs_z)) with
    sup_inv_rho = (1 - coupling^2 sup|alpha|^2)^{-1/2} from the construction-time
    grid supremum, c_alpha the coefficient bound on the analytic strip, and
    coupling_term = (1 - coupling^2)^{-1}.
    """

    value: float
    sup_inv_rho: float
    c_alpha: float
    coupling_term: float
    abs_z: float


def scaling_factor(s: VerblunskyScheme, z: complex, h1: float = 0.5, h2: float = 0.5) -> ScalingFactor:
    """Scaling factor used to normalize deviation thresholds and norm bounds.

    The strip widths h1, h2 of the coefficient bound are configuration, not
    derived; the defaults are deliberately conservative.
    """
    lam = s.coupling
    sup_inv_rho = float((1.0 - lam**2 * s.grid_sup**2) ** -0.5)
    c_alpha = s.sampler.strip_bound(h1, h2)
    coupling_term = float((1.0 - lam**2) ** -1)
    raw = np.log(sup_inv_rho + c_alpha + coupling_term + abs(complex(z)))
    return ScalingFactor(
        value=float(max(1.0, raw)),
        sup_inv_rho=sup_inv_rho,
        c_alpha=c_alpha,
        coupling_term=coupling_term,
        abs_z=abs(complex(z)),
    )


def transfer_via_determinants(s: VerblunskyScheme, n: int, z: complex) -> np.ndarray:
    """Independent determinant route to the n-step transfer matrix, z on the circle.

    Entries are built from characteristic polynomials of the raw windows
    [1, n-1] and [0, n-1], the latter with the half-line value alpha_{-1} = -1:

        M_n = (sqrt z)^{-n} (prod_{j<n} 1/rho_j) [[z p1, q], [z q*, p1*]]

    with p1 = det(z - E_[1,n-1]), q = p0 - z p1, p0 = det(z - E_[0,n-1]), and
    f* the reversed-conjugate polynomial evaluated on the circle as
    z^deg conj(f(z)).  Both q and p1 have degree n-1 (the leading terms of q
    cancel).  Agrees with transfer_product up to a global sign fixed by the
    branch of sqrt(z).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    z = complex(z)
    if abs(abs(z) - 1.0) > 1e-9:
        raise CocycleError("determinant route requires |z| = 1")
    E1 = scheme_submatrix(s, 1, n - 1)
    E0 = scheme_submatrix(s, 0, n - 1, substitutions={-1: -1.0})
    p1 = complex(np.linalg.det(z * np.eye(n - 1) - E1))
    p0 = complex(np.linalg.det(z * np.eye(n) - E0))
    q = (z * p1 - p0) / (-1.0)  # alpha_{-1} = -1
    p1_star = z ** (n - 1) * np.conj(p1)
    q_star = z ** (n - 1) * np.conj(q)
    alphas = verblunsky_orbit_batch(s, n, np.array([[s.base.x, s.base.y]]))[:, 0]
    rhos = np.sqrt(1.0 - np.abs(alphas) ** 2)
    prefactor = circle_sqrt(z) ** (-n) / np.prod(rhos)
    return prefactor * np.array([[z * p1, q], [z * q_star, p1_star]], dtype=complex)
