"""Weighted exponential sums over thin sets and their comparison targets.

Phase convention: e(x) = exp(2*pi*i*x) throughout.

Two comparison reports are provided.  The prime-set report compares

    lhs = sum over p in P_B cap [N], p = b mod m of  psi(p)^(-1) log(p) e(p xi)
    rhs = sum over p in  P  cap [N], p = b mod m of            log(p) e(p xi)

whose difference is the transfer error the admissibility inequality
16(1-gamma1) + 17(1-gamma2) + 31*chi <= 1 controls.  The integer-set report
replaces primes by all integers (lhs weights psi(n)^(-1), rhs unweighted);
its rhs has an exact closed evaluation as a geometric sum, and the relevant
inequality is (1-gamma1) + 3(1-gamma2) + 6*chi < 1.

Sums are accumulated in ascending order with chunked Kahan compensation; a
reversed-order reaccumulation must agree to 1e-9 and is exercised in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .arith import mangoldt_table, mobius_table
from .numutil import TWO_PI, e, kahan_csum, nearest_int_dist
from .regvar import DomainError, eval_phi, eval_psi, _range_start
from .sieve import (ResidueClass, ThinSetSpec, build_PB, membership_mask,
                    sieve_primes)


def chi_ceiling_prime(c1: float, c2: float) -> float:
    """Largest chi with 16(1-gamma1) + 17(1-gamma2) + 31 chi <= 1."""
    g1, g2 = 1.0 / c1, 1.0 / c2
    return (1.0 - 16.0 * (1.0 - g1) - 17.0 * (1.0 - g2)) / 31.0


def chi_ceiling_integer(c1: float, c2: float) -> float:
    """Largest chi with (1-gamma1) + 3(1-gamma2) + 6 chi < 1 (sup value)."""
    g1, g2 = 1.0 / c1, 1.0 / c2
    return (1.0 - (1.0 - g1) - 3.0 * (1.0 - g2)) / 6.0


def prime_chi_admissible(c1: float, c2: float, chi: float) -> bool:
    """Arithmetic predicate 16(1-gamma1) + 17(1-gamma2) + 31 chi <= 1."""
    g1, g2 = 1.0 / c1, 1.0 / c2
    return 16.0 * (1.0 - g1) + 17.0 * (1.0 - g2) + 31.0 * chi <= 1.0


@dataclass(frozen=True)
class ExpSumReport:
    """One (N, xi, class) comparison row."""

    N: int
    xi: float
    cls: ResidueClass
    kind: str                 # "prime" or "integer"
    lhs: complex
    rhs: complex
    chi_ceiling: float        # largest admissible transfer exponent
    admissible: bool          # chi_ceiling > 0

    @property
    def discrepancy(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def normalized(self) -> float:
        return self.discrepancy / self.N


def ext2_report(N: int, xi: float, cls: ResidueClass, tset: ThinSetSpec,
                primes: np.ndarray | None = None,
                pb=None) -> ExpSumReport:
    """Prime-set comparison report at frequency xi.

    ``primes`` may pass a cached ascending prime array covering [2, N];
    ``pb`` a cached build_PB(N, cls, tset) result for panel sweeps.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if primes is None:
        primes = sieve_primes(N)
    if pb is None:
        pb = build_PB(N, cls, tset, primes=primes)
    lhs_terms = (pb.psi_inv_weights * pb.log_weights) * e(pb.primes.astype(float) * xi)
    lhs = kahan_csum(lhs_terms)
    ps = primes[primes <= N]
    if cls.m > 1:
        ps = ps[ps % cls.m == cls.b]
    rhs_terms = np.log(ps.astype(float)) * e(ps.astype(float) * xi)
    rhs = kahan_csum(rhs_terms)
    ceiling = chi_ceiling_prime(tset.h1.c, tset.h2.c)
    return ExpSumReport(N=int(N), xi=float(xi), cls=cls, kind="prime",
                        lhs=lhs, rhs=rhs, chi_ceiling=ceiling,
                        admissible=ceiling > 0.0)


def geometric_class_sum(N: int, cls: ResidueClass, xi: float) -> complex:
    """Exact closed form of sum_{1 <= n <= N, n = b mod m} e(n xi)."""
    b, m = cls.b, cls.m
    start = b if b >= 1 else m
    if start > N:
        return 0.0 + 0.0j
    count = (N - start) // m + 1
    theta = m * xi
    theta_r = theta - round(theta)
    lead = complex(np.cos(TWO_PI * start * xi), np.sin(TWO_PI * start * xi))
    if theta_r == 0.0:
        return lead * count
    ratio = math.sin(math.pi * count * theta_r) / math.sin(math.pi * theta_r)
    mid = complex(math.cos(math.pi * (count - 1) * theta_r),
                  math.sin(math.pi * (count - 1) * theta_r))
    return lead * mid * ratio


def class_members_B(N: int, cls: ResidueClass, tset: ThinSetSpec):
    """Members of B in the class up to N with their psi^(-1) weights."""
    if N < 1:
        raise ValueError("N must be >= 1")
    start = cls.b if cls.b >= 1 else cls.m
    ns = np.arange(start, N + 1, cls.m, dtype=np.int64)
    if ns.size == 0:
        return ns.astype(float), np.empty(0)
    members = ns[membership_mask(ns, tset)].astype(float)
    return members, 1.0 / eval_psi(tset.psi, members)


def ext_B_report(N: int, xi: float, cls: ResidueClass, tset: ThinSetSpec,
                 members: np.ndarray | None = None,
                 psi_inv: np.ndarray | None = None) -> ExpSumReport:
    """Integer-set comparison report: B members against the full class.

    ``members``/``psi_inv`` may pass a cached class_members_B result.
    """
    if members is None or psi_inv is None:
        members, psi_inv = class_members_B(N, cls, tset)
    lhs = kahan_csum(e(members * xi) * psi_inv) if members.size else 0.0 + 0.0j
    rhs = geometric_class_sum(N, cls, xi)
    ceiling = chi_ceiling_integer(tset.h1.c, tset.h2.c)
    return ExpSumReport(N=int(N), xi=float(xi), cls=cls, kind="integer",
                        lhs=lhs, rhs=rhs, chi_ceiling=ceiling,
                        admissible=ceiling > 0.0)


# ---------------------------------------------------------------------------
# Van der Corput model sum


def vdc_sum(X: int, l: int, j: int, alpha: float, m: int, s: float,
            tset: ThinSetSpec,
            sigma1: Callable[[float], float] | None = None):
    """Model oscillatory sum and its envelope bound.

    value = sum_{k=1}^{X} e( alpha*j*k*l + m*(phi1(kl) - s*psi(kl)) ).

    bound = |m|^(1/2) * max(1, log(lX)) * lX * (sigma1(lX) * phi1(lX))^(-1/2)
    with sigma1 = 1 when c1 > 1.  For c1 = 1 the slowly-varying correction
    sigma1 must be supplied by the caller; otherwise the bound is None and
    any bound check is skipped.
    """
    if X < 1 or l < 1:
        raise ValueError("need X >= 1 and l >= 1")
    if m == 0:
        raise ValueError("frequency multiplier m must be nonzero")
    if l < _range_start(tset.h1) - 1e-9:
        raise DomainError("smallest product k*l falls below phi1's domain")
    k = np.arange(1, int(X) + 1, dtype=float)
    n = k * l
    phase = alpha * j * n + m * (eval_phi(tset.h1, n) - s * eval_psi(tset.psi, n))
    value = kahan_csum(e(phase))
    lX = float(l) * float(X)
    if tset.h1.c > 1.0 or sigma1 is not None:
        sig = 1.0 if sigma1 is None else float(sigma1(lX))
        bound = (math.sqrt(abs(m)) * max(1.0, math.log(lX)) * lX
                 / math.sqrt(sig * eval_phi(tset.h1, lX)))
    else:
        bound = None
    return value, bound


# ---------------------------------------------------------------------------
# Vaughan decomposition


@dataclass(frozen=True)
class VaughanPieces:
    """Four-piece bilinear decomposition of the Lambda-weighted sum over
    (P, P1] with cutoff v = w = P1^(1/3); combination s1 - s21 - s22 + s3
    reproduces the direct sum."""

    P: float
    P1: float
    alpha: float
    m: int
    v: float
    s1: complex
    s21: complex
    s22: complex
    s3: complex
    direct: complex

    @property
    def combined(self) -> complex:
        return self.s1 - self.s21 - self.s22 + self.s3


def _pi_table(v: float, lam: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """Pi_v(l) = sum_{r*s = l, r <= v, s <= v} Lambda(r) mu(s), l <= v^2."""
    vi = int(v)
    size = int(v * v) + 1
    out = np.zeros(size, dtype=float)
    for r in range(1, vi + 1):
        lr = lam[r]
        if lr == 0.0:
            continue
        for s in range(1, vi + 1):
            ms = mu[s]
            if ms == 0:
                continue
            idx = r * s
            if idx < size:
                out[idx] += lr * float(ms)
    return out


def _xi_table(limit: int, v: float, mu: np.ndarray) -> np.ndarray:
    """Xi_v(l) = sum_{d | l, d > v} mu(d) for l <= limit."""
    out = np.zeros(limit + 1, dtype=float)
    for d in range(int(v) + 1, limit + 1):
        md = mu[d]
        if md != 0:
            out[d::d] += float(md)
    return out


def vaughan_decompose(P: float, P1: float, alpha: float, m: int,
                      tset: ThinSetSpec) -> VaughanPieces:
    """Vaughan pieces for sum_{P < n <= P1} Lambda(n) e(alpha n - m phi1(n)).

    Requires P < P1 <= 2P and P > P1^(1/3) so the identity is valid on the
    whole window.
    """
    if not (1.0 <= P < P1 <= 2.0 * P):
        raise ValueError("need 1 <= P < P1 <= 2P")
    v = P1 ** (1.0 / 3.0)
    if P <= v:
        raise ValueError("need P > P1^(1/3) for validity of the identity")
    limit = int(P1)
    base = int(P)
    lam = mangoldt_table(limit)
    mu = mobius_table(limit)

    # Shared phase table over (P, P1]: every product k*l lands here.
    ns = np.arange(base + 1, limit + 1, dtype=float)
    if ns.size and ns[0] < _range_start(tset.h1) - 1e-9:
        raise DomainError("window starts below phi1's domain")
    phases = e(alpha * ns - m * eval_phi(tset.h1, ns))

    def char(n_arr: np.ndarray) -> np.ndarray:
        return phases[n_arr - (base + 1)]

    def k_range(l: int, k_min: int = 1) -> np.ndarray:
        lo = max(int(P // l) + 1, k_min)
        hi = int(P1 // l)
        if lo > hi:
            return np.empty(0, dtype=np.int64)
        return np.arange(lo, hi + 1, dtype=np.int64)

    pi_v = _pi_table(v, lam, mu)
    xi_v = _xi_table(int(P1 / v), v, mu)

    s1_parts, s21_parts, s22_parts, s3_parts = [], [], [], []
    for l in range(1, int(v) + 1):
        ks = k_range(l)
        if ks.size == 0:
            continue
        ph = char(ks * l)
        if mu[l] != 0:
            s1_parts.append(float(mu[l]) * np.log(ks.astype(float)) * ph)
        if pi_v[l] != 0.0:
            s21_parts.append(pi_v[l] * ph)
    for l in range(int(v) + 1, int(v * v) + 1):
        if pi_v[l] == 0.0:
            continue
        ks = k_range(l)
        if ks.size == 0:
            continue
        s22_parts.append(pi_v[l] * char(ks * l))
    for l in range(int(v) + 1, int(P1 / v) + 1):
        if xi_v[l] == 0.0:
            continue
        ks = k_range(l, k_min=int(v) + 1)
        if ks.size == 0:
            continue
        w = lam[ks]
        nz = w != 0.0
        if not np.any(nz):
            continue
        s3_parts.append((xi_v[l] * w[nz]) * char(ks[nz] * l))

    def total(parts) -> complex:
        if not parts:
            return 0.0 + 0.0j
        return kahan_csum(np.concatenate(parts))

    direct_terms = lam[base + 1:limit + 1] * phases
    return VaughanPieces(P=float(P), P1=float(P1), alpha=float(alpha), m=int(m),
                         v=v, s1=total(s1_parts), s21=total(s21_parts),
                         s22=total(s22_parts), s3=total(s3_parts),
                         direct=kahan_csum(direct_terms))


# ---------------------------------------------------------------------------
# Sawtooth truncation


def sawtooth_phi(x) -> float | np.ndarray:
    """Phi(x) = {x} - 1/2."""
    arr = np.asarray(x, dtype=float)
    out = arr - np.floor(arr) - 0.5
    return float(out) if np.ndim(x) == 0 else out


def sawtooth_truncate(x, M: int):
    """Partial Fourier expansion of the sawtooth and its tail envelope.

    Returns (approx, g_bound) where

        approx  = sum_{0 < |k| <= M} e(-k x) / (2 pi i k)   (real part;
                  imaginary residue <= 1e-12 asserted),
        g_bound = min(1, 1 / (M ||x||)),   taken as 1 when ||x|| = 0,

    so |Phi(x) - approx| is controlled by a constant times g_bound.
    Accepts scalar or 1-d array x.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    ks = np.arange(1, int(M) + 1, dtype=float)
    approx = np.empty(xs.size, dtype=float)
    chunk = max(1, int(2_000_000 // max(M, 1)))
    for lo in range(0, xs.size, chunk):
        blk = xs[lo:lo + chunk, None] * ks[None, :]
        up = np.exp(-1j * TWO_PI * blk)
        terms = (up - np.conj(up)) / (2j * math.pi * ks[None, :])
        s = terms.sum(axis=1)
        if np.any(np.abs(s.imag) > 1e-12):
            raise ArithmeticError("imaginary residue above 1e-12 in sawtooth sum")
        approx[lo:lo + chunk] = s.real
    dist = nearest_int_dist(xs)
    with np.errstate(divide="ignore"):
        g = np.where(dist > 0.0, np.minimum(1.0, 1.0 / (M * np.maximum(dist, 1e-300))), 1.0)
    if scalar:
        return float(approx[0]), float(g[0])
    return approx, g
