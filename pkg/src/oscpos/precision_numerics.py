"""Extended-precision arithmetic with tracked absolute error bounds.

Everything downstream (kernel evaluation, determinant certification,
biorthogonalization) runs on the primitives in this module: a ball-style
``PrecisionValue`` wrapping an mpmath number plus a conservative absolute
error bound, special-function leaves evaluated with guard digits, panel
quadrature on the half line and the oscillatory line integral, a certified
determinant with a sign certificate, and deterministic random streams.

Error model: leaf evaluations (gamma, bessel) are computed with 15 guard
digits beyond the requested precision and claim an error several orders of
magnitude above the expected rounding level; arithmetic on PrecisionValues
propagates bounds with explicit rounding cushions. The bounds are
conservative estimates backed by guard digits, not interval arithmetic, and
are validated by the identity-based property tests.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Sequence

import numpy as np
from mpmath import mp, mpf, mpc

GUARD_DIGITS = 15
DEFAULT_PRECISION_CAP = 600

_cap_override: int | None = None


class PoleError(ValueError):
    """Evaluation requested exactly at a pole."""


class NonConvergence(RuntimeError):
    """Requested tolerance not reached; carries the best estimate."""

    def __init__(self, message: str, partial=None, err_estimate=None):
        super().__init__(message)
        self.partial = partial
        self.err_estimate = err_estimate


def set_precision_cap(digits: int | None) -> None:
    """Override the escalation cap (None restores env/default resolution)."""
    global _cap_override
    if digits is not None and digits < 15:
        raise ValueError("precision cap below 15 digits is not usable")
    _cap_override = digits


def precision_cap() -> int:
    """Maximum working precision, in decimal digits, for escalation loops.

    Resolution order: explicit override, POSITIVITY_PRECISION_CAP, default 600.
    """
    if _cap_override is not None:
        return _cap_override
    env = os.environ.get("POSITIVITY_PRECISION_CAP")
    if env:
        return int(env)
    return DEFAULT_PRECISION_CAP


class SignCertificate(Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    INDETERMINATE = "Indeterminate"

    def __str__(self) -> str:
        return self.value


def _as_mp(x):
    if isinstance(x, (mpf, mpc)):
        return x
    if isinstance(x, complex):
        return mpc(x)
    if isinstance(x, (int, float)):
        return mpf(x)
    if isinstance(x, str):
        return mpf(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a number")


def _rounding_cushion(v) -> mpf:
    # a few ulps at the current working precision
    return abs(v) * mpf(2) ** (3 - mp.prec)


@dataclass(frozen=True)
class PrecisionValue:
    """A real or complex number with a conservative absolute error bound."""

    value: object
    err: object

    def __post_init__(self):
        object.__setattr__(self, "value", _as_mp(self.value))
        e = mpf(self.err) if not isinstance(self.err, mpf) else self.err
        if not (e >= 0) or not mp.isfinite(e):
            raise ValueError(f"error bound must be finite and nonnegative, got {self.err}")
        object.__setattr__(self, "err", e)

    # -- constructors ----------------------------------------------------
    @classmethod
    def exact(cls, x) -> "PrecisionValue":
        return cls(_as_mp(x), mpf(0))

    @classmethod
    def wrap(cls, x) -> "PrecisionValue":
        return x if isinstance(x, PrecisionValue) else cls.exact(x)

    # -- structure -------------------------------------------------------
    @property
    def is_complex(self) -> bool:
        return isinstance(self.value, mpc)

    def real(self) -> "PrecisionValue":
        if not self.is_complex:
            return self
        return PrecisionValue(self.value.real, self.err)

    def imag(self) -> "PrecisionValue":
        if not self.is_complex:
            return PrecisionValue(mpf(0), self.err)
        return PrecisionValue(self.value.imag, self.err)

    def conjugate(self) -> "PrecisionValue":
        if not self.is_complex:
            return self
        return PrecisionValue(self.value.conjugate(), self.err)

    def abs_upper(self) -> mpf:
        return abs(self.value) + self.err

    def abs_lower(self) -> mpf:
        lo = abs(self.value) - self.err
        return lo if lo > 0 else mpf(0)

    def with_extra_err(self, extra) -> "PrecisionValue":
        return PrecisionValue(self.value, self.err + mpf(extra))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other) -> "PrecisionValue":
        o = PrecisionValue.wrap(other)
        v = self.value + o.value
        return PrecisionValue(v, self.err + o.err + _rounding_cushion(v))

    __radd__ = __add__

    def __neg__(self) -> "PrecisionValue":
        # plain unary minus on mpf/mpc rounds to the ambient working
        # precision, which would silently shift a high-precision center
        return PrecisionValue(mp.fneg(self.value, exact=True), self.err)

    def __sub__(self, other) -> "PrecisionValue":
        return self + (-PrecisionValue.wrap(other))

    def __rsub__(self, other) -> "PrecisionValue":
        return (-self) + other

    def __mul__(self, other) -> "PrecisionValue":
        o = PrecisionValue.wrap(other)
        v = self.value * o.value
        e = (abs(self.value) * o.err + abs(o.value) * self.err
             + self.err * o.err + _rounding_cushion(v))
        return PrecisionValue(v, e)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PrecisionValue":
        o = PrecisionValue.wrap(other)
        denom_lo = abs(o.value) - o.err
        if not (denom_lo > 0):
            raise ZeroDivisionError("divisor is not certified away from zero")
        v = self.value / o.value
        e = (self.err + abs(v) * o.err) / denom_lo + _rounding_cushion(v)
        return PrecisionValue(v, e)

    def __rtruediv__(self, other) -> "PrecisionValue":
        return PrecisionValue.wrap(other) / self

    # -- certification ---------------------------------------------------
    def sign_certificate(self) -> SignCertificate:
        """Certified sign of a real quantity.

        Complex values are certified through their real part, with the
        magnitude of the imaginary part folded into the error bound.
        """
        if self.is_complex:
            return self.real().with_extra_err(abs(self.value.imag)).sign_certificate()
        if abs(self.value) <= self.err:
            return SignCertificate.INDETERMINATE
        return SignCertificate.POSITIVE if self.value > 0 else SignCertificate.NEGATIVE

    def contains(self, x) -> bool:
        return abs(self.value - _as_mp(x)) <= self.err

    def __repr__(self) -> str:
        return f"PrecisionValue({mp.nstr(self.value, 12)} ± {mp.nstr(self.err, 3)})"


class QuadratureResult(NamedTuple):
    value: PrecisionValue
    evaluations: int
    converged: bool


class DetResult(NamedTuple):
    value: PrecisionValue
    sign: SignCertificate


# ---------------------------------------------------------------------------
# special-function leaves
# ---------------------------------------------------------------------------

def _leaf_err(v, precision: int) -> mpf:
    # guard-digit-backed claim: far above expected rounding, far below tol use
    return (abs(v) + 1) * mpf(10) ** (-(precision + 7))


def _is_nonpositive_integer(x) -> bool:
    x = _as_mp(x)
    if isinstance(x, mpc):
        if x.imag != 0:
            return False
        x = x.real
    return x <= 0 and mp.isint(x)


def ln_gamma(x, precision: int | None = None) -> PrecisionValue:
    """log of the gamma function, principal branch for complex arguments."""
    if precision is None:
        precision = mp.dps
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma pole at {x}")
    with mp.workdps(precision + GUARD_DIGITS):
        v = mp.loggamma(_as_mp(x))
        e = _leaf_err(v, precision)
    return PrecisionValue(v, e)


def gamma_value(x, precision: int | None = None) -> PrecisionValue:
    """The gamma function itself (shared leaf for series coefficients)."""
    if precision is None:
        precision = mp.dps
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma pole at {x}")
    with mp.workdps(precision + GUARD_DIGITS):
        v = mp.gamma(_as_mp(x))
        e = _leaf_err(v, precision)
    return PrecisionValue(v, e)


def recip_gamma(x, precision: int | None = None) -> PrecisionValue:
    """1/gamma, entire; exactly zero (with zero error) at nonpositive integers."""
    if precision is None:
        precision = mp.dps
    if _is_nonpositive_integer(x):
        return PrecisionValue(mpf(0), mpf(0))
    with mp.workdps(precision + GUARD_DIGITS):
        v = mp.rgamma(_as_mp(x))
        e = _leaf_err(v, precision)
    return PrecisionValue(v, e)


def bessel_j(m: int, x, precision: int | None = None) -> PrecisionValue:
    if m < 0 or int(m) != m:
        raise ValueError("order must be a nonnegative integer")
    if precision is None:
        precision = mp.dps
    x = _as_mp(x)
    if x < 0:
        raise ValueError("argument must be nonnegative")
    with mp.workdps(precision + GUARD_DIGITS):
        v = mp.besselj(m, x)
        e = _leaf_err(v, precision)
    return PrecisionValue(v, e)


# ---------------------------------------------------------------------------
# Gauss-Legendre panels (cached nodes, refined to working precision)
# ---------------------------------------------------------------------------

_gl_cache: dict[tuple[int, int], list] = {}


def legendre_nodes(n: int, dps: int) -> list:
    """Nodes and weights on [-1, 1], Newton-refined from float seeds.

    Cached per (order, precision); float seeds are accurate enough that a
    handful of Newton steps on P_n reaches the working precision.
    """
    key = (n, dps)
    if key in _gl_cache:
        return _gl_cache[key]
    with mp.workdps(dps + 10):
        seeds = np.polynomial.legendre.leggauss(n)[0]
        out = []
        for seed in seeds:
            x = mpf(float(seed))
            for _ in range(1 + (dps + 14) // 15):
                p0, p1 = mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                x = x - p1 / dp
            p0, p1 = mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            out.append((x, w))
    _gl_cache[key] = out
    return out


def gl_panel(f: Callable, a, b, order: int, dps: int):
    """Fixed-order Gauss-Legendre on [a, b] at the current working precision."""
    nodes = legendre_nodes(order, dps)
    h = (b - a) / 2
    c = (a + b) / 2
    acc = mpf(0)
    for x, w in nodes:
        acc += w * f(c + h * x)
    return h * acc


# ---------------------------------------------------------------------------
# half-line quadrature
# ---------------------------------------------------------------------------

def _count_calls(f):
    counter = {"n": 0}

    def wrapped(x):
        counter["n"] += 1
        return f(x)

    return wrapped, counter


def integrate_semiaxis(f: Callable, tol, precision: int | None = None, *,
                       points: Sequence | None = None,
                       bessel_phase: tuple | None = None) -> QuadratureResult:
    """Integrate f over (0, infinity) assuming fast (Gaussian-type) decay.

    points: optional interior panel boundaries in addition to the derived ones.
    bessel_phase: (order, amplitude, power) when f contains a factor
        J_order(amplitude * r**power); panels are then split at the Bessel
        zeros so each panel holds at most one sign change of the factor.
    """
    if precision is None:
        precision = mp.dps
    tol = mpf(tol)
    g, counter = _count_calls(f)
    with mp.workdps(precision + GUARD_DIGITS):
        # truncation radius: probe until three consecutive small samples
        R = mpf(2)
        small = 0
        fR = abs(g(R))
        while small < 3:
            R_next = R * mpf(2)
            if R_next > 2 ** 24:
                raise NonConvergence(
                    "no decay detected while searching for a truncation radius",
                    partial=None, err_estimate=None)
            fR = abs(g(R_next))
            small = small + 1 if fR < tol / 100 else 0
            R = R_next
        # geometric decay estimate for the tail bound
        fa, fb = abs(g(R / 2)), fR
        q = fb / fa if fa > 0 and fb < fa else mpf("0.5")
        tail = fb * (R / 2) * q / (1 - q) + tol / mpf(100)

        pts = {mpf(0), R}
        x = mpf(1)
        while x < R:
            pts.add(x)
            x *= 2
        if points:
            pts.update(mpf(p) for p in points if 0 < p < R)
        if bessel_phase is not None:
            m, amp, power = bessel_phase
            amp, power = mpf(amp), mpf(power)
            if amp > 0:
                n = 1
                while n < 100000:
                    z = mp.besseljzero(m, n)
                    r = (z / amp) ** (1 / power)
                    if r >= R:
                        break
                    pts.add(r)
                    n += 1
                else:
                    raise NonConvergence(
                        "oscillation too fast for zero-splitting quadrature",
                        partial=None, err_estimate=None)
        ordered = sorted(pts)
        total, est = mp.quad(g, ordered, error=True)
        err = mpf(est) * 10 + tail
    value = PrecisionValue(total, err)
    return QuadratureResult(value, counter["n"], bool(err <= tol))


# ---------------------------------------------------------------------------
# oscillatory line integral
# ---------------------------------------------------------------------------

def fourier_line(f: Callable, s, tol, *,
                 left_decay: tuple | None = None,
                 right_decay: tuple | None = None,
                 left_limit=0,
                 precision: int | None = None) -> PrecisionValue:
    """Compute the line integral of e^{i s x} f(x) over the real axis.

    No normalization prefactor is applied; callers impose their own
    convention. Decay hints are (rate, coef) pairs certifying
    |f(x) - limit| <= coef * exp(-rate * |x|) beyond the truncation points
    (limit is left_limit on the left, 0 on the right). When left_limit is
    nonzero the integrand is not absolutely integrable on the left; the
    constant's tail contribution is assigned its Abel-regularized value
    left_limit * e^{-isM} / (is), which requires s != 0.
    """
    if precision is None:
        precision = mp.dps
    tol = mpf(tol)
    s = mpf(s)
    left_limit = _as_mp(left_limit)
    if left_limit != 0 and s == 0:
        raise PoleError("left asymptote with s = 0 has no regularized value")
    g, counter = _count_calls(f)
    with mp.workdps(precision + GUARD_DIGITS):
        def truncation(side: int, decay, limit):
            # returns (cut point, tail bound) on the given side (+1 right, -1 left)
            if decay is not None:
                rate, coef = mpf(decay[0]), mpf(decay[1])
                X = max(mpf(1), mp.log(coef / (rate * (tol / 10))) / rate)
                return X, coef * mp.exp(-rate * X) / rate
            X = mpf(4)
            small = 0
            while small < 3:
                X *= 2
                if X > 2 ** 24:
                    raise NonConvergence("no decay detected on one side",
                                         partial=None, err_estimate=None)
                small = small + 1 if abs(g(side * X) - limit) < tol / 100 else 0
            return X, tol / mpf(20)

        Xr, tail_r = truncation(+1, right_decay, 0)
        Xl, tail_l = truncation(-1, left_decay, left_limit)

        pts = {-Xl, Xr, mpf(0)}
        x = mpf(1)
        while x < max(Xl, Xr):
            if x < Xr:
                pts.add(x)
            if x < Xl:
                pts.add(-x)
            x *= 2
        # cap panel length at half an oscillation period
        if s != 0:
            cap = mp.pi / abs(s)
            ordered = sorted(pts)
            refined = []
            for a, b in zip(ordered, ordered[1:]):
                refined.append(a)
                k = int(mp.floor((b - a) / cap))
                for j in range(1, k + 1):
                    refined.append(a + j * (b - a) / (k + 1))
            refined.append(ordered[-1])
        else:
            refined = sorted(pts)

        def integrand(x):
            return mp.exp(mpc(0, s * x)) * g(x)

        total = mpc(0)
        est_sum = mpf(0)
        for a, b in zip(refined, refined[1:]):
            v, e = mp.quad(integrand, [a, b], error=True)
            total += v
            est_sum += mpf(e)
        if left_limit != 0:
            total += left_limit * mp.exp(mpc(0, -s * Xl)) / (mpc(0, 1) * s)
        err = est_sum * 10 + tail_l + tail_r
    return PrecisionValue(total, err)


# ---------------------------------------------------------------------------
# certified determinant
# ---------------------------------------------------------------------------

def certified_det(M, dps: int | None = None) -> DetResult:
    """Determinant of a square matrix of PrecisionValues with a sign certificate.

    Gaussian elimination with partial pivoting on the ball centers; the
    certificate is Indeterminate exactly when |det| <= accumulated error.
    Working precision is raised so arithmetic cushions stay below the
    tightest entry error bound (override with dps).
    """
    A = [[PrecisionValue.wrap(x) for x in row] for row in M]
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix must be square")
    if n == 0:
        return DetResult(PrecisionValue.exact(1), SignCertificate.POSITIVE)
    if dps is None:
        dps = _det_working_dps(A, n)
    with mp.workdps(dps):
        return _det_core(A, n)


def _det_working_dps(A, n: int) -> int:
    finite = [x.err for row in A for x in row if x.err > 0]
    dps = max(mp.dps, 30)
    if finite:
        with mp.workdps(30):
            tight = min(finite)
            if tight < 1:
                dps = max(dps, min(int(-mp.log10(tight)) + 10, precision_cap()))
    return dps + n


def _det_core(A, n: int) -> DetResult:
    swaps = 0
    det = PrecisionValue.exact(1)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(A[r][col].value))
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            swaps += 1
        pivot = A[col][col]
        if pivot.abs_lower() == 0:
            # no pivot certified away from zero: Hadamard-bound the unfactored block
            block = mpf(1)
            for r in range(col, n):
                block *= mp.sqrt(sum(A[r][c].abs_upper() ** 2 for c in range(col, n)))
            return DetResult(PrecisionValue(mpf(0), det.abs_upper() * block),
                             SignCertificate.INDETERMINATE)
        det = det * pivot
        for r in range(col + 1, n):
            factor = A[r][col] / pivot
            for c in range(col + 1, n):
                A[r][c] = A[r][c] - factor * A[col][c]
    if swaps % 2:
        det = -det
    return DetResult(det, det.sign_certificate())


# ---------------------------------------------------------------------------
# deterministic randomness
# ---------------------------------------------------------------------------

def seeded_rng(seed: int) -> np.random.Generator:
    """A deterministic generator; identical seeds give identical streams."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
