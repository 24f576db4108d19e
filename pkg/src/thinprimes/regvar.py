"""Regularly varying functions and their inverses.

A catalogue function has the shape

    h(x) = x**c * ell(x),      ell(x) = (log x / log x0) ** a,   a >= 0,

on the domain [x0, infinity).  ell is slowly varying: it is exp of the
integral of theta(t)/t from x0 to x with theta(t) = a / log t, so a = 0 gives
the pure power and a > 0 gives log-power factors.  c = 1 is allowed only with
a > 0 (otherwise h is the identity and carries no thinning).

The inverse phi = h^{-1} is evaluated by bracketed bisection to absolute
width 1e-6 followed by a fixed Newton polish (iteration cap 200), which is
deterministic and converges unconditionally for this monotone family.
Derivatives of phi up to order 3 come from the inverse-function rules with
analytic h derivatives.

The density function psi is derived from a second catalogue function h2:

* ``derivative`` mode: psi(x) = min(phi2'(x), clip_ceiling), the hard clip
  keeping psi <= 1/2;
* ``difference`` mode: psi(x) = phi2(x+1) - phi2(x), which is < 1 by
  concavity of phi2 and recovers floor-type sets exactly;
* ``unit`` mode: psi = 1 (degenerate, for tests only).

Below the inverse's domain start h2(x0), psi falls back to its value at the
domain start (the clip usually hides this region entirely).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

_E = math.e

# Inversion policy constants.
_BISECT_WIDTH = 1e-6
_ITER_CAP = 200
_NEWTON_STEPS = 6
_INVERT_RTOL = 1e-13


class SpecError(ValueError):
    """Raised when a function spec violates catalogue preconditions."""


class DomainError(ValueError):
    """Raised when an evaluation point is outside a function's domain."""


@dataclass(frozen=True)
class SlowlyVaryingSpec:
    """Slowly varying factor ell(x) = (log x / log x0) ** log_power."""

    x0: float
    log_power: float

    def __post_init__(self):
        if self.x0 < 1.0:
            raise SpecError("x0 must be >= 1")
        if self.log_power < 0.0:
            raise SpecError("log_power must be >= 0 (ell must stay >= 1)")
        if self.log_power > 0.0 and self.x0 <= 1.0:
            raise SpecError("log factors need x0 > 1 for normalization")

    @property
    def family_tag(self) -> str:
        return "L0" if self.log_power > 0 else "L"

    def theta(self, t):
        """theta(t) = log_power / log t, the logarithmic derivative weight."""
        t = np.asarray(t, dtype=float)
        if self.log_power == 0.0:
            return np.zeros_like(t)
        return self.log_power / np.log(t)

    def theta_prime(self, t):
        t = np.asarray(t, dtype=float)
        if self.log_power == 0.0:
            return np.zeros_like(t)
        return -self.log_power / (t * np.log(t) ** 2)

    def theta_second(self, t):
        t = np.asarray(t, dtype=float)
        if self.log_power == 0.0:
            return np.zeros_like(t)
        lt = np.log(t)
        return self.log_power * (lt + 2.0) / (t ** 2 * lt ** 3)

    def ell(self, x):
        x = np.asarray(x, dtype=float)
        if self.log_power == 0.0:
            return np.ones_like(x)
        return (np.log(x) / math.log(self.x0)) ** self.log_power


@dataclass(frozen=True)
class RegularFunctionSpec:
    """h(x) = x**c * ell(x) on [x0, infinity); gamma = 1/c."""

    c: float
    ell: SlowlyVaryingSpec

    def __post_init__(self):
        if not self.c > 0.0:
            raise SpecError("index c must be positive")

    @property
    def gamma(self) -> float:
        return 1.0 / self.c

    @property
    def x0(self) -> float:
        return self.ell.x0


def make_catalogue_function(c: float, log_power: float = 0.0,
                            x0: float = _E) -> RegularFunctionSpec:
    """Build a catalogue member with full set-construction guards.

    c must lie in [1, 2); c = 1 needs log_power > 0.  Log factors need
    x0 >= e so the normalization log x / log x0 starts at 1; pure powers
    only need x0 >= 1.
    """
    if not (1.0 <= c < 2.0):
        raise SpecError(f"index c={c} outside the catalogue range [1, 2)")
    if c == 1.0 and log_power <= 0.0:
        raise SpecError("c = 1 requires log_power > 0")
    if log_power < 0.0:
        raise SpecError("log_power must be >= 0")
    if log_power > 0.0 and x0 < _E:
        raise SpecError("log factors require x0 >= e")
    if x0 < 1.0:
        raise SpecError("x0 must be >= 1")
    return RegularFunctionSpec(c=c, ell=SlowlyVaryingSpec(x0=x0, log_power=log_power))


def _check_domain(spec: RegularFunctionSpec, x: np.ndarray) -> None:
    lo = spec.x0 * (1.0 - 1e-12)
    if np.any(x < lo):
        bad = float(np.min(x))
        raise DomainError(f"x={bad} below domain start x0={spec.x0}")


def _log_h_derivs(spec: RegularFunctionSpec, x: np.ndarray):
    """First three derivatives of g(x) = log h(x)."""
    c, a = spec.c, spec.ell.log_power
    if a == 0.0:
        g1 = c / x
        g2 = -c / x ** 2
        g3 = 2.0 * c / x ** 3
        return g1, g2, g3
    L = np.log(x)
    g1 = (c + a / L) / x
    g2 = -(c + a / L + a / L ** 2) / x ** 2
    g3 = (2.0 * c + 2.0 * a / L + 3.0 * a / L ** 2 + 2.0 * a / L ** 3) / x ** 3
    return g1, g2, g3


def eval_h(spec: RegularFunctionSpec, x):
    """h(x) = x**c * ell(x); scalar in -> scalar out, array in -> array out."""
    arr = np.asarray(x, dtype=float)
    _check_domain(spec, arr)
    arr = np.maximum(arr, spec.x0)
    c, a = spec.c, spec.ell.log_power
    if a == 0.0:
        out = arr ** c
    else:
        out = np.exp(c * np.log(arr)
                     + a * (np.log(np.log(arr)) - math.log(math.log(spec.x0))))
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def h_derivatives(spec: RegularFunctionSpec, x):
    """(h(x), h'(x), h''(x), h'''(x)) from the log-derivative expansion."""
    arr = np.asarray(x, dtype=float)
    _check_domain(spec, arr)
    arr = np.maximum(arr, spec.x0)
    h = eval_h(spec, arr)
    g1, g2, g3 = _log_h_derivs(spec, arr)
    h1 = h * g1
    h2 = h * (g1 ** 2 + g2)
    h3 = h * (g1 ** 3 + 3.0 * g1 * g2 + g3)
    return h, h1, h2, h3


@lru_cache(maxsize=256)
def _range_start(spec: RegularFunctionSpec) -> float:
    return eval_h(spec, spec.x0)


def eval_phi(spec: RegularFunctionSpec, y):
    """Inverse phi(y) = h^{-1}(y) for y >= h(x0).

    Bracket: [max(x0, y**gamma / ell(y**gamma)**gamma), y**gamma], valid
    because ell is nondecreasing and >= 1.  Bisection runs to absolute width
    1e-6 (cap 200 iterations), then a fixed Newton polish; the result
    satisfies |h(phi(y)) - y| <= max(|y|, 1) * 1e-13.
    """
    scalar = np.isscalar(y) or np.ndim(y) == 0
    yy = np.atleast_1d(np.asarray(y, dtype=float))
    y_min = _range_start(spec)
    if np.any(yy < y_min * (1.0 - 1e-12)):
        bad = float(np.min(yy))
        raise DomainError(f"y={bad} below range start h(x0)={y_min}")
    yy = np.maximum(yy, y_min)

    gamma = spec.gamma
    hi = np.maximum(yy ** gamma, spec.x0)
    if spec.ell.log_power == 0.0:
        lo = hi.copy()
    else:
        lo = np.maximum(hi / spec.ell.ell(hi) ** gamma, spec.x0)

    width = float(np.max(hi - lo)) if hi.size else 0.0
    if width > _BISECT_WIDTH:
        iters = min(_ITER_CAP, int(math.ceil(math.log2(width / _BISECT_WIDTH))))
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            too_low = eval_h(spec, mid) < yy
            lo = np.where(too_low, mid, lo)
            hi = np.where(too_low, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(_NEWTON_STEPS):
        h, h1, _, _ = h_derivatives(spec, x)
        x = np.clip(x - (h - yy) / h1, spec.x0, None)
    resid = np.abs(eval_h(spec, x) - yy)
    if np.any(resid > np.maximum(np.abs(yy), 1.0) * _INVERT_RTOL):
        worst = float(np.max(resid / np.maximum(np.abs(yy), 1.0)))
        raise ArithmeticError(f"inversion residual {worst} above tolerance")
    return float(x[0]) if scalar else x


def phi_derivative(spec: RegularFunctionSpec, y, order: int):
    """d^k/dy^k of phi at y for order k in {1, 2, 3} (inverse-function rules)."""
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    scalar = np.isscalar(y) or np.ndim(y) == 0
    x = np.atleast_1d(eval_phi(spec, y))
    _, h1, h2, h3 = h_derivatives(spec, x)
    if order == 1:
        out = 1.0 / h1
    elif order == 2:
        out = -h2 / h1 ** 3
    else:
        out = (3.0 * h2 ** 2 - h1 * h3) / h1 ** 5
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# psi


@dataclass(frozen=True)
class PsiSpec:
    """Density function derived from the second catalogue function."""

    source: RegularFunctionSpec
    clip_ceiling: float = 0.5
    mode: str = "derivative"

    def __post_init__(self):
        if self.mode not in ("derivative", "difference", "unit"):
            raise SpecError(f"unknown psi mode {self.mode!r}")
        if not (0.0 < self.clip_ceiling <= 1.0):
            raise SpecError("clip_ceiling must lie in (0, 1]")


def make_psi(source: RegularFunctionSpec, mode: str = "derivative") -> PsiSpec:
    """PsiSpec with the mode's natural ceiling (1/2 for derivative mode;
    difference mode is < 1 by construction, so ceiling 1 leaves it unclipped)."""
    ceiling = 0.5 if mode == "derivative" else 1.0
    return PsiSpec(source=source, clip_ceiling=ceiling, mode=mode)


def _psi_raw(ps: PsiSpec, x: np.ndarray) -> np.ndarray:
    """Unclipped psi on x already clamped into phi's domain."""
    if ps.mode == "derivative":
        return phi_derivative(ps.source, x, 1)
    return eval_phi(ps.source, x + 1.0) - eval_phi(ps.source, x)


@lru_cache(maxsize=256)
def psi_clip_crossover(ps: PsiSpec) -> float:
    """Smallest x with unclipped psi(x) <= clip_ceiling (inf if never).

    The unclipped psi is strictly decreasing for the catalogue, so a
    doubling search plus bisection locates the crossover.
    """
    if ps.mode == "unit":
        return math.inf
    start = _range_start(ps.source)
    if float(np.atleast_1d(_psi_raw(ps, np.array([start])))[0]) <= ps.clip_ceiling:
        return start
    lo, hi = start, max(2.0 * start, 4.0)
    for _ in range(200):
        if float(np.atleast_1d(_psi_raw(ps, np.array([hi])))[0]) <= ps.clip_ceiling:
            break
        lo, hi = hi, hi * 4.0
        if hi > 1e30:
            return math.inf
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(np.atleast_1d(_psi_raw(ps, np.array([mid])))[0]) <= ps.clip_ceiling:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-9 * max(1.0, hi):
            break
    return hi


def eval_psi(ps: PsiSpec, x):
    """psi(x) for x >= 1; clipped at clip_ceiling, clamped below the domain
    start of phi2 to the domain-start value."""
    scalar = np.isscalar(x) or np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr < 1.0):
        raise DomainError("psi is defined on [1, infinity)")
    if ps.mode == "unit":
        out = np.ones_like(arr)
        return float(out[0]) if scalar else out
    start = _range_start(ps.source)
    clamped = np.maximum(arr, start)
    out = np.full_like(clamped, ps.clip_ceiling)
    crossover = psi_clip_crossover(ps)
    beyond = clamped >= crossover
    if np.any(beyond):
        out[beyond] = np.minimum(_psi_raw(ps, clamped[beyond]), ps.clip_ceiling)
    return float(out[0]) if scalar else out


def integrate_psi(ps: PsiSpec, upper: float, lower: float = 1.0) -> float:
    """Adaptive quadrature of psi over [lower, upper].

    Split at the domain start (constant clamp piece) and the clip crossover
    (constant ceiling piece); the smooth tail uses scipy's adaptive rule with
    relative tolerance 1e-9, comfortably inside the 1e-8 contract.
    """
    if not (1.0 <= lower <= upper):
        raise DomainError("need 1 <= lower <= upper")
    if upper == lower:
        return 0.0
    if ps.mode == "unit":
        return upper - lower
    start = _range_start(ps.source)
    crossover = psi_clip_crossover(ps)
    if not math.isfinite(crossover):
        # Unclipped psi never drops below the ceiling: psi is constant.
        return ps.clip_ceiling * (upper - lower)
    # psi is constant (clamp value or ceiling) left of the split point and
    # smooth to the right of it.
    split = max(start, crossover)
    total = 0.0
    if lower < split:
        total += float(eval_psi(ps, lower)) * (min(upper, split) - lower)
    smooth_lo = max(lower, split)
    if upper > smooth_lo:
        val, _ = quad(lambda t: float(eval_psi(ps, t)), smooth_lo, upper,
                      epsrel=1e-9, epsabs=0.0, limit=200)
        total += val
    return total


# ---------------------------------------------------------------------------
# Extended-precision twins (80-bit long double) for boundary tie decisions.


def _eval_h_ld(spec: RegularFunctionSpec, x):
    c = np.longdouble(spec.c)
    a = np.longdouble(spec.ell.log_power)
    x = np.longdouble(x)
    if spec.ell.log_power == 0.0:
        return np.exp(c * np.log(x))
    lx0 = np.log(np.longdouble(spec.x0))
    return np.exp(c * np.log(x) + a * (np.log(np.log(x)) - np.log(lx0)))


def _h_prime_ld(spec: RegularFunctionSpec, x):
    c = np.longdouble(spec.c)
    a = np.longdouble(spec.ell.log_power)
    x = np.longdouble(x)
    h = _eval_h_ld(spec, x)
    if spec.ell.log_power == 0.0:
        return h * c / x
    return h * (c + a / np.log(x)) / x


def eval_phi_ld(spec: RegularFunctionSpec, y) -> np.longdouble:
    """phi(y) in 80-bit precision: Newton refinement of the double result."""
    y = np.longdouble(y)
    x = np.longdouble(eval_phi(spec, float(y)))
    for _ in range(4):
        x = x - (_eval_h_ld(spec, x) - y) / _h_prime_ld(spec, x)
    return x


def eval_psi_ld(spec_psi: PsiSpec, x) -> np.longdouble:
    """psi(x) in 80-bit precision, mirroring eval_psi's clamp and clip."""
    if spec_psi.mode == "unit":
        return np.longdouble(1.0)
    start = _range_start(spec_psi.source)
    xx = np.longdouble(max(float(x), start))
    ceil_ld = np.longdouble(spec_psi.clip_ceiling)
    if spec_psi.mode == "derivative":
        raw = np.longdouble(1.0) / _h_prime_ld(spec_psi.source,
                                               eval_phi_ld(spec_psi.source, xx))
    else:
        raw = (eval_phi_ld(spec_psi.source, xx + np.longdouble(1.0))
               - eval_phi_ld(spec_psi.source, xx))
    return min(raw, ceil_ld)


# ---------------------------------------------------------------------------
# Plain-text serialization of a spec (key=value lines).


def spec_to_kv(spec: RegularFunctionSpec) -> dict[str, str]:
    return {
        "c": repr(spec.c),
        "log_power": repr(spec.ell.log_power),
        "x0": repr(spec.x0),
        "family_tag": spec.ell.family_tag,
    }


def spec_from_kv(kv: dict[str, str]) -> RegularFunctionSpec:
    c = float(kv["c"])
    log_power = float(kv.get("log_power", "0"))
    x0 = float(kv.get("x0", repr(_E)))
    return RegularFunctionSpec(c=c, ell=SlowlyVaryingSpec(x0=x0, log_power=log_power))
