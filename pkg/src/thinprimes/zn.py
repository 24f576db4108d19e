"""Finite Fourier analysis on Z_N: measures, Bohr smoothing, 3AP forms.

Transform convention (no 1/N on either side):

    F[g](xi)     = sum_k g(k) e^(-2 pi i k xi / N)
    Finv[g](xi)  = sum_k g(k) e^(+2 pi i k xi / N)

so Finv[F[g]] = N g.  The FFT-backed paths are the production ones; the
O(N^2) direct evaluators are retained as oracles.

The W-trick rescaling takes a subset A0 of the thin primes, removes small
prime moduli by passing to the residue class b mod m (m the primorial of W)
with the heaviest weighted mass, and re-embeds the class into Z_N for a
prime N in [2n/m, 4n/m].  At desk scale floor(log log n / 4) is 0, so W is
clamped up to 1; the window check W in [log log N / 8, log log N / 2] is
reported, never enforced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .arith import euler_phi, next_prime_at_least, primorial
from .numutil import kahan_csum, kahan_sum
from .regvar import eval_psi
from .sieve import ResidueClass, ThinSetSpec, membership_mask, sieve_primes


@dataclass(frozen=True)
class CyclicMeasure:
    """Length-N vector indexed by Z_N.

    Used both for nonnegative measures (lambda, rho, beta, smoothed a1)
    and for generic complex vectors (Fourier transforms).
    """

    N: int
    values: np.ndarray

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("modulus must be >= 1")
        arr = np.asarray(self.values)
        if arr.ndim != 1 or arr.shape[0] != self.N:
            raise ValueError("values must be a length-N vector")
        if not np.issubdtype(arr.dtype, np.complexfloating):
            arr = arr.astype(float)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def mass(self) -> complex:
        return kahan_csum(self.values.astype(complex))

    def assert_measure(self, tol: float = 1e-12) -> None:
        """Raise unless the vector is (numerically) real and nonnegative."""
        arr = np.asarray(self.values)
        if np.issubdtype(arr.dtype, np.complexfloating):
            if np.max(np.abs(arr.imag), initial=0.0) > tol:
                raise ValueError("measure has an imaginary component")
            arr = arr.real
        if arr.size and float(arr.min()) < -tol:
            raise ValueError("measure has a negative weight")


def dft(v: CyclicMeasure) -> CyclicMeasure:
    return CyclicMeasure(v.N, np.fft.fft(v.values))


def idft(v: CyclicMeasure) -> CyclicMeasure:
    return CyclicMeasure(v.N, np.fft.ifft(v.values) * v.N)


def dft_direct(v: CyclicMeasure) -> CyclicMeasure:
    """O(N^2) transform kept as an oracle for the FFT path."""
    k = np.arange(v.N)
    w = np.exp(-2j * math.pi * np.outer(k, k) / v.N)
    return CyclicMeasure(v.N, w @ np.asarray(v.values, dtype=complex))


def idft_direct(v: CyclicMeasure) -> CyclicMeasure:
    k = np.arange(v.N)
    w = np.exp(2j * math.pi * np.outer(k, k) / v.N)
    return CyclicMeasure(v.N, w @ np.asarray(v.values, dtype=complex))


# ---------------------------------------------------------------------------
# Prime-supported measures


def class_hypothesis_ok(cls: ResidueClass, N: int) -> bool:
    """Modulus-size hypothesis m <= log N (informational)."""
    return cls.m <= math.log(N)


def _prime_flags(limit: int, primes: np.ndarray | None) -> np.ndarray:
    if primes is None:
        primes = sieve_primes(limit)
    flags = np.zeros(limit + 1, dtype=bool)
    flags[primes[primes <= limit]] = True
    return flags


def lambda_measure(cls: ResidueClass, N: int,
                   primes: np.ndarray | None = None) -> CyclicMeasure:
    """Normalized log-weighted prime measure on Z_N.

    Support {n in [N]: mn+b prime}, weight phi(m) log(mn+b) / (mN); the
    index n = N wraps to 0.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    b, m = cls.b, cls.m
    flags = _prime_flags(m * N + b, primes)
    n = np.arange(1, N + 1, dtype=np.int64)
    p = m * n + b
    on = flags[p]
    vals = np.zeros(N, dtype=float)
    vals[n[on] % N] = euler_phi(m) * np.log(p[on].astype(float)) / (m * N)
    return CyclicMeasure(N, vals)


def rho_measure(cls: ResidueClass, N: int, tset: ThinSetSpec,
                primes: np.ndarray | None = None) -> CyclicMeasure:
    """Thin-set analogue of lambda: support restricted to mn+b in P_B and
    weight carrying the extra psi(mn+b)^(-1) factor."""
    if N < 1:
        raise ValueError("N must be >= 1")
    b, m = cls.b, cls.m
    flags = _prime_flags(m * N + b, primes)
    n = np.arange(1, N + 1, dtype=np.int64)
    p = m * n + b
    on = flags[p]
    p_on = p[on]
    thin = membership_mask(p_on, tset)
    keep = p_on[thin].astype(float)
    vals = np.zeros(N, dtype=float)
    vals[n[on][thin] % N] = (euler_phi(m) * np.log(keep)
                             / (m * N * eval_psi(tset.psi, keep)))
    return CyclicMeasure(N, vals)


def restrict(measure: CyclicMeasure, A: Iterable[int]) -> CyclicMeasure:
    """Pointwise product with the indicator of A."""
    idx = np.asarray(sorted(set(int(a) for a in A)), dtype=np.int64)
    if idx.size and (idx[0] < 0 or idx[-1] >= measure.N):
        raise IndexError("restriction index outside [0, N)")
    vals = np.zeros(measure.N, dtype=measure.values.dtype)
    vals[idx] = measure.values[idx]
    return CyclicMeasure(measure.N, vals)


def large_spectrum(a: CyclicMeasure, delta: float) -> np.ndarray:
    """All xi with |F[a](xi)| >= delta (0 included when it qualifies)."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    mags = np.abs(np.fft.fft(a.values))
    return np.flatnonzero(mags >= delta).astype(np.int64)


@dataclass(frozen=True)
class BohrSpec:
    """Frequency set and radius for a Bohr set; frequencies are nonzero
    residues, validated against the modulus at evaluation time."""

    frequencies: tuple
    epsilon: float

    def __post_init__(self):
        freqs = tuple(sorted(set(int(f) for f in self.frequencies)))
        if any(f < 1 for f in freqs):
            raise ValueError("Bohr frequencies must be nonzero residues")
        if not (0.0 < self.epsilon <= 0.5):
            raise ValueError("epsilon must lie in (0, 1/2]")
        object.__setattr__(self, "frequencies", freqs)

    @property
    def k(self) -> int:
        return len(self.frequencies)


def bohr_set(spec: BohrSpec, N: int) -> np.ndarray:
    """Exact membership scan of {x: max_i ||x xi_i / N|| <= eps}.

    Distances are computed in integer arithmetic mod N, so the scan is
    exact; 0 is always a member.  k = 0 gives all of Z_N.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if any(f >= N for f in spec.frequencies):
        raise ValueError("Bohr frequency outside [1, N-1]")
    x = np.arange(N, dtype=np.int64)
    mask = np.ones(N, dtype=bool)
    for f in spec.frequencies:
        r = (x * f) % N
        mask &= np.minimum(r, N - r) <= spec.epsilon * N
    return np.flatnonzero(mask).astype(np.int64)


def smooth(a: CyclicMeasure, B: Sequence[int]) -> CyclicMeasure:
    """Double convolution a * beta * beta with beta = 1_B / |B|.

    Mass is preserved exactly up to rounding since beta has mass 1.
    """
    idx = np.asarray(B, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("Bohr set must be nonempty")
    if idx.min() < 0 or idx.max() >= a.N:
        raise IndexError("smoothing set index outside [0, N)")
    beta = np.zeros(a.N, dtype=float)
    beta[idx] = 1.0 / idx.size
    fb = np.fft.fft(beta)
    out = np.fft.ifft(np.fft.fft(a.values) * fb * fb)
    if np.max(np.abs(out.imag), initial=0.0) > 1e-10 * max(1.0, np.max(np.abs(out.real))):
        raise ArithmeticError("smoothing produced a non-real vector")
    return CyclicMeasure(a.N, out.real)


# ---------------------------------------------------------------------------
# Trilinear 3AP form


def _check_same_modulus(f: CyclicMeasure, g: CyclicMeasure, h: CyclicMeasure) -> int:
    if not (f.N == g.N == h.N):
        raise ValueError("trilinear form needs equal moduli")
    return f.N


def trilinear_direct(f: CyclicMeasure, g: CyclicMeasure,
                     h: CyclicMeasure) -> complex:
    """sum_{x,d} f(x) g(x+d) h(x+2d), evaluated row by row in d (oracle)."""
    N = _check_same_modulus(f, g, h)
    fv = np.asarray(f.values, dtype=complex)
    gv = np.asarray(g.values, dtype=complex)
    hv = np.asarray(h.values, dtype=complex)
    rows = np.empty(N, dtype=complex)
    for d in range(N):
        rows[d] = (fv * np.roll(gv, -d) * np.roll(hv, -2 * d)).sum()
    return kahan_csum(rows)


def trilinear_fft(f: CyclicMeasure, g: CyclicMeasure,
                  h: CyclicMeasure) -> complex:
    """Spectral evaluation (1/N) sum_xi F[f](xi) F[g](-2 xi) F[h](xi).

    Restricted to odd N so the map xi -> -2 xi is a permutation.
    """
    N = _check_same_modulus(f, g, h)
    if N % 2 == 0:
        raise ValueError("spectral trilinear path requires odd N")
    Ff = np.fft.fft(f.values)
    Fg = Ff if g.values is f.values else np.fft.fft(g.values)
    Fh = Ff if h.values is f.values else np.fft.fft(h.values)
    idx = (-2 * np.arange(N)) % N
    return kahan_csum(Ff * Fg[idx] * Fh) / N


def sup_nonzero_fourier(rho: CyclicMeasure) -> float:
    """max over xi != 0 of |F[rho](xi)|."""
    if rho.N < 2:
        raise ValueError("need N >= 2 for a nonzero mode")
    mags = np.abs(np.fft.fft(rho.values))
    return float(mags[1:].max())


# ---------------------------------------------------------------------------
# 3AP scanners and constructions


def has_3ap_int(A: Iterable[int]) -> bool:
    """Nontrivial integer 3-term progression detector, O(|A|^2)."""
    s = sorted(set(int(a) for a in A))
    members = set(s)
    for i, a in enumerate(s):
        for c in s[i + 1:]:
            # midpoint is strictly between a and c, so the AP is nontrivial
            if (a + c) % 2 == 0 and (a + c) // 2 in members:
                return True
    return False


def has_3ap_zn(A: Iterable[int], N: int) -> bool:
    """Cyclic 3AP detector in Z_N (common difference d != 0)."""
    s = set(int(a) % N for a in A)
    if N % 2 == 1:
        inv2 = (N + 1) // 2
        for a in s:
            for c in s:
                if a == c:
                    continue
                d = ((c - a) * inv2) % N
                if (a + d) % N in s:
                    return True
        return False
    for d in range(1, N):
        for a in s:
            if (a + d) % N in s and (a + 2 * d) % N in s:
                return True
    return False


def greedy_3ap_free(candidates: Iterable[int]) -> np.ndarray:
    """Greedy ascending selection keeping integer 3AP-freeness.

    Processing in increasing order, a new element can only close a
    progression as its largest term, so one membership probe per kept
    element suffices.
    """
    chosen: list[int] = []
    members: set[int] = set()
    for c in sorted(set(int(x) for x in candidates)):
        if any(2 * b - c in members for b in chosen):
            continue
        chosen.append(c)
        members.add(c)
    return np.asarray(chosen, dtype=np.int64)


# ---------------------------------------------------------------------------
# W-trick rescaling


def loglog_scale(W: int) -> float:
    """Desk-scale surrogate for log log W / W, clamped so the numerator
    stays positive at the tiny W values that occur for feasible n."""
    return math.log(math.log(max(W, 3))) / W


@dataclass(frozen=True)
class WTrickParams:
    W: int
    m: int
    b: int
    n_source: int
    alpha: float

    def __post_init__(self):
        if self.m != primorial(self.W):
            raise ValueError("m must be the primorial of W")
        if self.m > 1 and math.gcd(self.b, self.m) != 1:
            raise ValueError("b must be coprime to m")

    @property
    def scale(self) -> float:
        return loglog_scale(self.W)

    def w_in_range(self, N: int) -> bool:
        """Window check W in [log log N / 8, log log N / 2]."""
        ll = math.log(math.log(N))
        return ll / 8.0 <= self.W <= ll / 2.0


def w_trick_rescale(A0: Iterable[int], n: int, tset: ThinSetSpec,
                    primes: np.ndarray | None = None):
    """Pass A0 to its heaviest residue class mod the primorial and re-embed
    into Z_N for a prime N in [2n/m, 4n/m].

    Returns (WTrickParams, A, N) with A a sorted index array inside
    {1, ..., floor(N/2)}.  The witness alpha is the rho-mass of A.
    """
    if n % 2 != 0 or n < 4:
        raise ValueError("n must be even and >= 4")
    W = max(1, int(0.25 * math.log(math.log(n))))
    m = primorial(W)

    a0 = np.asarray(sorted(set(int(x) for x in A0)), dtype=np.int64)
    a0 = a0[(a0 >= n // 2) & (a0 <= n)]
    if primes is None:
        primes = sieve_primes(max(n, 4 * (n // m) + m + 1))
    flags = np.zeros(n + 1, dtype=bool)
    flags[primes[primes <= n]] = True
    a0 = a0[flags[a0]]
    if a0.size:
        a0 = a0[membership_mask(a0, tset)]

    # pigeonhole step: argmax of the psi^(-1) log mass, smallest b on ties
    best_b, best_score = None, -1.0
    for b in range(m):
        if m > 1 and math.gcd(b, m) != 1:
            continue
        ks = a0[a0 % m == b] if a0.size else a0
        if ks.size:
            kf = ks.astype(float)
            score = kahan_sum(np.sort(np.log(kf) / eval_psi(tset.psi, kf)))
        else:
            score = 0.0
        if score > best_score + 1e-12:
            best_b, best_score = b, score
    cls = ResidueClass(best_b, m)

    N = next_prime_at_least((2 * n + m - 1) // m)
    if N > (4 * n) // m:
        raise AssertionError("no prime found in the rescaling window")

    ks = a0[a0 % m == cls.b]
    A = ((ks - cls.b) // m).astype(np.int64)
    if A.size and (A.min() < 1 or A.max() > N // 2):
        raise AssertionError("rescaled set escaped {1, ..., N//2}")

    rho = rho_measure(cls, N, tset, primes=primes)
    alpha = float(kahan_sum(np.sort(rho.values[A]))) if A.size else 0.0
    params = WTrickParams(W=W, m=m, b=cls.b, n_source=int(n), alpha=alpha)
    return params, A, N


# ---------------------------------------------------------------------------
# Envelope diagnostics and the closing feasibility arithmetic


def trilinear_upper_envelope(N: int, delta: float, epsilon: float, r: float,
                             c_const: float = 1.0) -> float:
    """Variable part of the smoothed-form upper bound:
    c (N^(-3/2) + N^(-1) (eps^2 delta^(-r) + delta^(2 - r/r')))."""
    if not (2.0 < r < 3.0):
        raise ValueError("r must lie in (2, 3)")
    r_conj = r / (r - 1.0)
    return c_const * (N ** -1.5 + (epsilon ** 2 * delta ** -r
                                   + delta ** (2.0 - r / r_conj)) / N)


def trilinear_lower_envelope(N: int, alpha: float, c2_const: float = 1.0,
                             c3_const: float = 1.0,
                             log_exponent: int = 5) -> float:
    """Variable part of the lower bound c2 N^(-1) exp(-c3 T) with
    T = alpha^(-1) log^log_exponent(1/alpha).

    The fifth-power form is the one the closing argument actually uses;
    log_exponent = 1 reproduces the weaker displayed variant.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    t = (1.0 / alpha) * math.log(1.0 / alpha) ** log_exponent
    return c2_const * math.exp(-c3_const * t) / N


@dataclass(frozen=True)
class FeasibilityReport:
    """Arithmetic check of the closing constant choices.

    With T = alpha^(-1) log^5(1/alpha), delta = exp(-C4 T) and
    eps = exp(-C5 T), the contradiction needs:

      (a) C1 exp(-(C4 (2 - r/r') - C3) T) <= C2/4,
      (b) C1 exp(-(2 C5 - r C4 - C3) T) <= C2/4,
      (c) N large: log N >= 2 (log(2 C1/C2) + C3 T),
      (d) Bohr hypothesis eps^k >= log log W / W once
          log(W / log log W) >= log C + r C4 T + log(C5 T).

    (c) and (d) hold for all large N; their thresholds are reported in
    log form, never materialized.
    """

    alpha: float
    r: float
    c4: float
    c5: float
    log_delta: float
    log_epsilon: float
    cond_a_ok: bool
    cond_b_ok: bool
    log_n_contradiction: float
    log_w_hypothesis: float

    @property
    def feasible(self) -> bool:
        return self.cond_a_ok and self.cond_b_ok


def epsilon_delta_feasible(alpha: float, r: float, c1: float = 1.0,
                           c2: float = 1.0, c3: float = 1.0,
                           c4: float | None = None, c5: float | None = None,
                           c_spec: float = 1.0) -> FeasibilityReport:
    """Check (or auto-select with 10% headroom) the closing constants."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    if not (2.0 < r < 3.0):
        raise ValueError("r must lie in (2, 3)")
    t = (1.0 / alpha) * math.log(1.0 / alpha) ** 5
    r_conj = r / (r - 1.0)
    gap = 2.0 - r / r_conj          # = 3 - r > 0 on (2, 3)
    need = math.log(4.0 * c1 / c2)  # exponent slack both conditions need
    if c4 is None:
        c4 = 1.1 * max((c3 + need / t) / gap, 1e-12)
    if c5 is None:
        c5 = 1.1 * max((r * c4 + c3 + need / t) / 2.0, 1e-12)
    cond_a = math.log(c1) - (c4 * gap - c3) * t <= math.log(c2 / 4.0)
    cond_b = math.log(c1) - (2.0 * c5 - r * c4 - c3) * t <= math.log(c2 / 4.0)
    log_n = 2.0 * (math.log(2.0 * c1 / c2) + c3 * t)
    log_w = math.log(c_spec) + r * c4 * t + math.log(c5 * t)
    return FeasibilityReport(alpha=alpha, r=r, c4=c4, c5=c5,
                             log_delta=-c4 * t, log_epsilon=-c5 * t,
                             cond_a_ok=cond_a, cond_b_ok=cond_b,
                             log_n_contradiction=log_n,
                             log_w_hypothesis=log_w)
