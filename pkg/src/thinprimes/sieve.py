"""Thin subsets of the integers and primes cut out by fractional parts.

For a pair of regularly varying functions h1, h2 with inverses phi1, phi2
and the density function psi derived from h2, the sets are

    B_plus  = { n : {phi1(n)}  < psi(n) },
    B_minus = { n : {-phi1(n)} < psi(n) },

and the thin prime set is P_B = primes intersected with B.  Membership is
decided through the floor identity

    floor(t) - floor(t - psi(n)) = 1   iff   {t} < psi(n),   t = +-phi1(n),

valid because psi < 1.  A direct fractional-part evaluation is kept as a
cross-check path.  Within a 1e-9 guard band around {t} = psi(n) the decision
is recomputed in 80-bit precision anchored at the integer nearest t, so both
paths return the same answer on ties.

n below h1(x0) (where phi1 is undefined) are treated as non-members.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import regvar
from .arith import euler_phi
from .regvar import (PsiSpec, RegularFunctionSpec, SlowlyVaryingSpec,
                     eval_phi, eval_phi_ld, eval_psi, eval_psi_ld,
                     integrate_psi, make_psi)

_GUARD_BAND = 1e-9

# Index ranges from the underlying theorems, used as informational flags.
_ROTH_EDGE = 95.0 / 94.0
_MAJORANT_EDGE_1 = 16.0 / 15.0
_MAJORANT_EDGE_2 = 17.0 / 16.0


@dataclass(frozen=True)
class ResidueClass:
    """Arithmetic progression b mod m with 0 <= b < m and gcd(b, m) = 1."""

    b: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("modulus m must be >= 1")
        if not (0 <= self.b < self.m):
            raise ValueError("need 0 <= b < m")
        if self.m > 1 and math.gcd(self.b, self.m) != 1:
            raise ValueError(f"b={self.b} not coprime to m={self.m}")


@dataclass(frozen=True)
class ThinSetSpec:
    """A thin set B determined by (h1, h2, psi, sign)."""

    h1: RegularFunctionSpec
    h2: RegularFunctionSpec
    psi: PsiSpec
    sign: str = "plus"

    def __post_init__(self):
        if self.sign not in ("plus", "minus"):
            raise ValueError("sign must be 'plus' or 'minus'")

    @property
    def roth_range(self) -> bool:
        return self.h1.c < _ROTH_EDGE and self.h2.c < _ROTH_EDGE

    @property
    def majorant_range(self) -> bool:
        return self.h1.c < _MAJORANT_EDGE_1 and self.h2.c < _MAJORANT_EDGE_2


def build_thin_set(c1: float, c2: float, log_power1: float = 0.0,
                   log_power2: float = 0.0, x0: float = 1.0,
                   sign: str = "plus", psi_mode: str = "derivative") -> ThinSetSpec:
    """Convenience constructor from scalar knobs (shared spec when equal)."""
    h1 = RegularFunctionSpec(c=c1, ell=SlowlyVaryingSpec(x0=x0, log_power=log_power1))
    if (c2, log_power2) == (c1, log_power1):
        h2 = h1
    else:
        h2 = RegularFunctionSpec(c=c2, ell=SlowlyVaryingSpec(x0=x0, log_power=log_power2))
    return ThinSetSpec(h1=h1, h2=h2, psi=make_psi(h2, psi_mode), sign=sign)


@dataclass(frozen=True)
class WeightedPrimeSet:
    """P_B cap [1, N] in one residue class, with the standard weights."""

    N: int
    cls: ResidueClass
    primes: np.ndarray          # member primes, ascending
    log_weights: np.ndarray     # log p
    psi_inv_weights: np.ndarray # 1 / psi(p)

    def __post_init__(self):
        for a in (self.primes, self.log_weights, self.psi_inv_weights):
            a.setflags(write=False)

    def __len__(self) -> int:
        return int(self.primes.size)


# ---------------------------------------------------------------------------
# Prime sieve


def _simple_sieve(limit: int) -> np.ndarray:
    """Odd-only sieve of Eratosthenes, fine for limits up to ~10^7."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    half = np.ones(limit // 2 + 1, dtype=bool)   # index i <-> odd 2i+1
    half[0] = False
    for i in range(1, (int(math.isqrt(limit)) - 1) // 2 + 1):
        if half[i]:
            p = 2 * i + 1
            half[(p * p - 1) // 2::p] = False
    odds = 2 * np.flatnonzero(half).astype(np.int64) + 1
    odds = odds[odds <= limit]
    return np.concatenate((np.array([2], dtype=np.int64), odds))


_SEGMENT_ODDS = 1 << 21


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, ascending int64.  Segmented above ~4*10^6."""
    if limit < 0:
        raise ValueError("limit must be >= 0")
    if limit <= 4 * _SEGMENT_ODDS:
        return _simple_sieve(limit)
    odd_base = _simple_sieve(int(math.isqrt(limit)))[1:]
    seg_lo = 3
    mask_len = _SEGMENT_ODDS
    out = [np.array([2], dtype=np.int64)]
    while seg_lo <= limit:
        seg_hi = min(seg_lo + 2 * mask_len - 2, limit if limit % 2 else limit - 1)
        n_odds = (seg_hi - seg_lo) // 2 + 1
        mask = np.ones(n_odds, dtype=bool)
        for p in odd_base:
            p = int(p)
            if p * p > seg_hi:
                break
            first = max(p * p, ((seg_lo + p - 1) // p) * p)
            if first % 2 == 0:
                first += p
            if first > seg_hi:
                continue
            mask[(first - seg_lo) // 2::p] = False
        out.append(seg_lo + 2 * np.flatnonzero(mask).astype(np.int64))
        seg_lo = seg_hi + 2
    return np.concatenate(out)


# ---------------------------------------------------------------------------
# Membership


def _boundary_decide(tset: ThinSetSpec, n: int) -> bool:
    """Tie policy: direct fractional comparison in 80-bit precision."""
    t = eval_phi_ld(tset.h1, np.longdouble(n))
    if tset.sign == "minus":
        t = -t
    fr = t - np.floor(t)
    return bool(fr < eval_psi_ld(tset.psi, n))


def membership_mask(n_values, tset: ThinSetSpec, path: str = "floor") -> np.ndarray:
    """Boolean membership of each n in B (vectorized).

    ``path`` selects the floor-identity evaluation (default) or the direct
    fractional-part cross-check; inside the guard band both defer to the
    80-bit tie policy, so the two paths agree everywhere by construction
    outside float-noise cases narrower than the band.
    """
    if path not in ("floor", "fraction"):
        raise ValueError("path must be 'floor' or 'fraction'")
    n = np.atleast_1d(np.asarray(n_values, dtype=np.int64))
    if np.any(n < 1):
        raise ValueError("membership needs n >= 1")
    out = np.zeros(n.shape, dtype=bool)
    lo = math.ceil(regvar._range_start(tset.h1) - 1e-9)
    dom = n >= lo
    if not np.any(dom):
        return out if np.ndim(n_values) else bool(out[0])
    nd = n[dom].astype(float)
    t = eval_phi(tset.h1, nd)
    if tset.sign == "minus":
        t = -t
    psi = eval_psi(tset.psi, nd)
    fl = np.floor(t)
    fr = t - fl
    if path == "floor":
        member = (fl - np.floor(t - psi)) == 1.0
    else:
        member = fr < psi
    near = np.abs(fr - psi) <= _GUARD_BAND
    if np.any(near):
        idx = np.flatnonzero(near)
        nn = n[dom]
        for i in idx:
            member[i] = _boundary_decide(tset, int(nn[i]))
    out[dom] = member
    if np.ndim(n_values) == 0:
        return bool(out[0])
    return out


def in_B(n: int, tset: ThinSetSpec) -> bool:
    """Scalar membership of n in B via the floor identity."""
    return bool(membership_mask(np.array([int(n)]), tset)[0])


# ---------------------------------------------------------------------------
# Counting


def build_PB(N: int, cls: ResidueClass, tset: ThinSetSpec,
             primes: np.ndarray | None = None) -> WeightedPrimeSet:
    """Members of P_B cap [1, N] in the class b mod m, with weights.

    ``primes`` may carry a precomputed ascending prime array covering [2, N]
    to avoid re-sieving; it is filtered, never trusted for membership.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if primes is None:
        primes = sieve_primes(N)
    else:
        primes = primes[primes <= N]
    if cls.m > 1:
        primes = primes[primes % cls.m == cls.b]
    mask = membership_mask(primes, tset)
    members = primes[mask]
    logs = np.log(members.astype(float))
    psi_inv = 1.0 / eval_psi(tset.psi, members.astype(float))
    return WeightedPrimeSet(N=int(N), cls=cls, primes=members,
                            log_weights=logs, psi_inv_weights=psi_inv)


def count_pi_B(N: int, cls: ResidueClass, tset: ThinSetSpec,
               primes: np.ndarray | None = None) -> int:
    """pi_B(N; m, b) = #{p <= N prime: p = b mod m, p in B}."""
    return len(build_PB(N, cls, tset, primes=primes))


def weighted_psi_B(N: int, cls: ResidueClass, tset: ThinSetSpec,
                   primes: np.ndarray | None = None) -> float:
    """psi_B(N; m, b) = sum of log p over P_B members in the class."""
    pb = build_PB(N, cls, tset, primes=primes)
    return float(np.sum(pb.log_weights))


@dataclass(frozen=True)
class PredictedCounts:
    """Main terms of the counting asymptotics plus hypothesis flags."""

    psi_pred: float
    pi_pred: float
    psi_hypothesis_ok: bool
    pi_hypothesis_ok: bool


def predicted_counts(N: int, cls: ResidueClass, tset: ThinSetSpec,
                     D: float = 2.0) -> PredictedCounts:
    """Main terms: psi_B ~ integral(psi, 1..N)/phi(m) and
    pi_B ~ integral(psi, 1..N)/(phi(m) log N).

    The underlying theorems need m <= log N (pi) and m <= (log N)^D (psi);
    violations are flagged, not fatal.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    logN = math.log(N)
    base = integrate_psi(tset.psi, float(N)) / euler_phi(cls.m)
    return PredictedCounts(
        psi_pred=base,
        pi_pred=base / logN,
        psi_hypothesis_ok=cls.m <= logN ** D,
        pi_hypothesis_ok=cls.m <= logN,
    )
