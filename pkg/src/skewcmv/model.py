"""Skew-shift torus dynamics, sampling functions, and Verblunsky coefficient schemes.

The coefficient sequences studied here are generated by sampling a fixed
trigonometric polynomial along orbits of the skew-shift (x, y) -> (x + y, y + w)
on the two-torus, scaled by a coupling constant in [0, 1).  Everything in this
module is a pure function of its inputs and safe to call concurrently.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SchemeError",
    "Phase",
    "Frequency",
    "TrigPolynomial",
    "VerblunskyScheme",
    "DiophantineCertificate",
    "skew_shift_step",
    "skew_shift_orbit",
    "orbit_point",
    "orbit_points",
    "verblunsky_at",
    "verblunsky_range",
    "verblunsky_orbit_batch",
    "diophantine_margin",
    "scheme_to_json",
    "scheme_from_json",
    "scheme_hash",
]


class SchemeError(ValueError):
    """Raised when a coefficient scheme violates the coupling bound sup|lambda*alpha| < 1."""


def _mod1(t):
    """Reduce into [0, 1) with floor, elementwise; negative inputs wrap symmetrically."""
    return t - np.floor(t)


@dataclass(frozen=True)
class Phase:
    """A point (x, y) on the two-torus, stored reduced into [0,1) x [0,1)."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(_mod1(self.x)))
        object.__setattr__(self, "y", float(_mod1(self.y)))


@dataclass(frozen=True)
class Frequency:
    """A rotation number on the torus, reduced into [0, 1)."""

    omega: float

    def __post_init__(self):
        object.__setattr__(self, "omega", float(_mod1(self.omega)))


@dataclass(frozen=True, init=False)
class TrigPolynomial:
    """Finite trigonometric polynomial sum_{k,l} c_{k,l} e^{2 pi i (k x + l y)}.

    Coefficients are stored canonically sorted by (k, l), which makes equality,
    hashing and serialization reproducible.
    """

    terms: tuple  # ((k, l, complex), ...) sorted by (k, l)

    def __init__(self, coefficients):
        if isinstance(coefficients, TrigPolynomial):
            terms = coefficients.terms
        elif isinstance(coefficients, dict):
            terms = tuple(
                (int(k), int(l), complex(c))
                for (k, l), c in sorted(coefficients.items())
                if c != 0
            )
        else:
            terms = tuple(sorted((int(k), int(l), complex(c)) for k, l, c in coefficients if c != 0))
        object.__setattr__(self, "terms", terms)

    @property
    def coefficients(self) -> dict:
        return {(k, l): c for k, l, c in self.terms}

    @property
    def degrees(self) -> tuple:
        """Degree bounds (K, L) = max |k|, max |l| over nonzero terms."""
        if not self.terms:
            return (0, 0)
        return (max(abs(k) for k, _, _ in self.terms), max(abs(l) for _, l, _ in self.terms))

    def is_constant(self) -> bool:
        return all(k == 0 and l == 0 for k, l, _ in self.terms)

    def __call__(self, x, y):
        """Evaluate at torus points; broadcasts over array inputs."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for k, l, c in self.terms:
            out += c * np.exp(2j * np.pi * (k * x + l * y))
        if out.ndim == 0:
            return complex(out)
        return out

    def ell1(self) -> float:
        """Coefficient-sum bound sum |c_{k,l}| >= sup |alpha| on the torus."""
        return float(sum(abs(c) for _, _, c in self.terms))

    def strip_bound(self, h1: float, h2: float) -> float:
        """Bound sum |c_{k,l}| e^{2 pi (|k| h1 + |l| h2)} for the analytic extension to a strip."""
        return float(
            sum(abs(c) * math.exp(2 * math.pi * (abs(k) * h1 + abs(l) * h2)) for k, l, c in self.terms)
        )

    def grid_max(self, side: int = 256) -> float:
        """Max of |alpha| over a side x side uniform grid."""
        t = (np.arange(side) + 0.5) / side
        x, y = np.meshgrid(t, t, indexing="ij")
        return float(np.max(np.abs(self(x, y))))


# grid used by the construction-time sup-norm certificate
_SUP_GRID_SIDE = 256


@dataclass(frozen=True)
class VerblunskyScheme:
    """Coefficient generator alpha_n = coupling * sampler(T^n(base)) along a skew-shift orbit.

    Raises SchemeError at construction when the coupling bound
    sup |coupling * sampler| < 1 fails on a 256x256 grid.  The grid supremum and
    the l1 coefficient bound are cached for the scaling-factor computation.
    """

    sampler: TrigPolynomial
    coupling: float
    frequency: Frequency
    base: Phase
    grid_sup: float = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not 0.0 <= self.coupling < 1.0:
            raise SchemeError(f"coupling must lie in [0, 1), got {self.coupling}")
        # practical certificate: grid sup must clear the bound; the l1 bound
        # sampler.ell1() >= sup|alpha| is available to callers wanting a proof
        sup = self.sampler.grid_max(_SUP_GRID_SIDE)
        object.__setattr__(self, "grid_sup", float(sup))
        if self.coupling * sup >= 1.0:
            raise SchemeError(
                f"coupling bound violated: coupling * sup_grid|alpha| = {self.coupling * sup:.6f} >= 1"
            )

    def alpha_at(self, n: int) -> complex:
        return verblunsky_at(self, n)


def skew_shift_step(p: Phase, w: Frequency) -> Phase:
    """One application of the skew-shift: (x, y) -> (x + y, y + w) mod 1."""
    return Phase(p.x + p.y, p.y + w.omega)


def orbit_point(p: Phase, w: Frequency, j: int) -> Phase:
    """Closed form of the j-th orbit point, valid for any integer j (negative included).

    x_j = x + j y + j(j-1)/2 w,  y_j = y + j w   (mod 1).

    Evaluated in extended precision so large |j| do not drift.
    """
    jl = np.longdouble(j)
    tri = np.longdouble(j * (j - 1) // 2)
    xj = _mod1(np.longdouble(p.x) + jl * np.longdouble(p.y) + tri * np.longdouble(w.omega))
    yj = _mod1(np.longdouble(p.y) + jl * np.longdouble(w.omega))
    return Phase(float(xj), float(yj))


def orbit_points(p: Phase, w: Frequency, js) -> np.ndarray:
    """Vectorized closed-form orbit; returns an array of shape (len(js), 2)."""
    js = np.asarray(js, dtype=np.int64)
    jl = js.astype(np.longdouble)
    tri = (js * (js - 1) // 2).astype(np.longdouble)
    x = _mod1(np.longdouble(p.x) + jl * np.longdouble(p.y) + tri * np.longdouble(w.omega))
    y = _mod1(np.longdouble(p.y) + jl * np.longdouble(w.omega))
    return np.stack([x.astype(float), y.astype(float)], axis=-1)


def skew_shift_orbit(p: Phase, w: Frequency, n: int) -> list:
    """Orbit positions 0..n as a list of Phase (length n + 1)."""
    if n < 0:
        raise ValueError("orbit length must be nonnegative")
    pts = orbit_points(p, w, np.arange(n + 1))
    return [Phase(float(x), float(y)) for x, y in pts]


def verblunsky_at(s: VerblunskyScheme, n: int) -> complex:
    """alpha_n = coupling * sampler(T^n(base)); |result| < 1 by the construction bound."""
    q = orbit_point(s.base, s.frequency, n)
    return s.coupling * s.sampler(q.x, q.y)


def verblunsky_range(s: VerblunskyScheme, lo: int, hi: int) -> np.ndarray:
    """Coefficients alpha_lo .. alpha_hi inclusive, as a complex array."""
    pts = orbit_points(s.base, s.frequency, np.arange(lo, hi + 1))
    return s.coupling * s.sampler(pts[:, 0], pts[:, 1])


def verblunsky_orbit_batch(s: VerblunskyScheme, n: int, phases: np.ndarray) -> np.ndarray:
    """Coefficients alpha_0..alpha_{n-1} along orbits started at each row of `phases`.

    `phases` has shape (S, 2); the result has shape (n, S).  This is the sampling
    kernel behind the Lyapunov estimators: the scheme's own base phase is ignored.
    """
    phases = np.atleast_2d(np.asarray(phases, dtype=float))
    js = np.arange(n, dtype=np.int64)
    jl = js.astype(np.longdouble)[:, None]
    tri = (js * (js - 1) // 2).astype(np.longdouble)[:, None]
    om = np.longdouble(s.frequency.omega)
    x = _mod1(phases[None, :, 0].astype(np.longdouble) + jl * phases[None, :, 1].astype(np.longdouble) + tri * om)
    y = _mod1(phases[None, :, 1].astype(np.longdouble) + jl * om)
    return s.coupling * s.sampler(x.astype(float), y.astype(float))


@dataclass(frozen=True)
class DiophantineCertificate:
    """Result of the brute-force scan min_{1<=n<=N} ||n w|| n (1 + log n)^2."""

    omega: Frequency
    epsilon: float
    horizon: int
    margin: float
    worst_n: int

    @property
    def passes(self) -> bool:
        return self.margin >= self.epsilon


def diophantine_margin(w: Frequency, eps: float, N: int) -> DiophantineCertificate:
    """Exact brute-force scan of ||n w|| n (1 + log n)^2 for n = 1..N.

    ||t|| denotes distance to the nearest integer.  No continued-fraction
    shortcut: N is desk-scale (up to ~1e6) and exactness beats cleverness.
    """
    if N < 1:
        raise ValueError("horizon must be >= 1")
    n = np.arange(1, N + 1, dtype=np.int64)
    frac = _mod1(n.astype(np.longdouble) * np.longdouble(w.omega)).astype(float)
    dist = np.minimum(frac, 1.0 - frac)
    vals = dist * n * (1.0 + np.log(n)) ** 2
    i = int(np.argmin(vals))
    return DiophantineCertificate(w, float(eps), int(N), float(vals[i]), int(n[i]))


# --- serialization ----------------------------------------------------------

def scheme_to_json(s: VerblunskyScheme) -> str:
    """Canonical JSON encoding; floats round-trip bit-exactly through repr."""
    doc = {
        "coefficients": [[k, l, c.real, c.imag] for k, l, c in s.sampler.terms],
        "lambda": s.coupling,
        "omega": s.frequency.omega,
        "base_x": s.base.x,
        "base_y": s.base.y,
    }
    return json.dumps(doc, sort_keys=True)


def scheme_from_json(text: str) -> VerblunskyScheme:
    doc = json.loads(text)
    sampler = TrigPolynomial([(k, l, complex(re, im)) for k, l, re, im in doc["coefficients"]])
    return VerblunskyScheme(
        sampler=sampler,
        coupling=float(doc["lambda"]),
        frequency=Frequency(float(doc["omega"])),
        base=Phase(float(doc["base_x"]), float(doc["base_y"])),
    )


def scheme_hash(s: VerblunskyScheme) -> str:
    return hashlib.sha256(scheme_to_json(s).encode()).hexdigest()[:16]
