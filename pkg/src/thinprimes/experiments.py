"""Batch drivers behind the CLI and service: one Table list per command.

Every driver is deterministic given (config, root seed): randomness flows
through numpy SeedSequence keyed by the root seed plus a literal path, so
independent panels get independent streams and reruns are byte-identical
after formatting.  Parallelism (--threads) only maps independent cells;
results are reassembled in a fixed order before any reduction.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arith import next_prime_at_least, primorial
from .config import ExperimentConfig
from .expsums import (class_members_B, ext2_report, ext_B_report,
                      vaughan_decompose)
from .majorant import (ExpPolynomial, admissible_r, grid_values,
                       lr_norm_report, prime_exp_polynomial,
                       sample_coefficients)
from .sieve import (ResidueClass, build_PB, build_thin_set, predicted_counts,
                    sieve_primes)
from .zn import (BohrSpec, bohr_set, class_hypothesis_ok, greedy_3ap_free,
                 large_spectrum, loglog_scale, restrict, rho_measure, smooth,
                 sup_nonzero_fourier, trilinear_fft, trilinear_lower_envelope,
                 trilinear_upper_envelope, w_trick_rescale)

COMMANDS = ("density", "expsum", "vaughan", "transfer", "majorant")


@dataclass
class Table:
    """Named column/row block destined for one CSV file."""

    name: str
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)


def seed_sequence(root: int, *parts) -> np.random.SeedSequence:
    """Splittable seeding: the root seed plus a literal derivation path.

    String parts enter as their byte values, so streams for different
    panels never collide and never depend on interpreter hashing.
    """
    key = [int(root) & (2 ** 64 - 1)]
    for part in parts:
        if isinstance(part, str):
            key.append(int.from_bytes(part.encode("utf-8"), "little"))
        else:
            key.append(int(part))
    return np.random.SeedSequence(key)


def child_seed(root: int, *parts) -> int:
    """64-bit child seed for APIs that take a plain integer seed."""
    return int(seed_sequence(root, *parts).generate_state(2, np.uint64)[0])


def calibrate_constant(train_values, headroom: float = 1.5) -> float:
    """Envelope constant from training values: headroom * max."""
    vals = [float(v) for v in train_values]
    if not vals:
        raise ValueError("cannot calibrate on an empty training set")
    return headroom * max(vals)


def thin_set_from_config(cfg: ExperimentConfig):
    return build_thin_set(cfg.c1, cfg.c2, log_power1=cfg.log_power1,
                          log_power2=cfg.log_power2, x0=cfg.x0,
                          sign=cfg.sign, psi_mode=cfg.psi_mode)


def _pmap(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# density


def run_density(cfg: ExperimentConfig, seed: int = 0,
                threads: int = 1) -> list:
    if not cfg.density_horizons:
        raise ValueError("no horizons")
    tset = thin_set_from_config(cfg)
    horizons = sorted(cfg.density_horizons)
    primes = sieve_primes(max(horizons))
    cells = [(N, cls) for N in horizons for cls in cfg.density_classes]

    def cell(item):
        N, cls = item
        pb = build_PB(N, cls, tset, primes=primes)
        pred = predicted_counts(N, cls, tset, D=cfg.density_exponent_d)
        pi_b = len(pb)
        psi_b = float(np.sum(pb.log_weights))
        rel_pi = abs(pi_b - pred.pi_pred) / pred.pi_pred if pred.pi_pred > 0 else math.nan
        rel_psi = abs(psi_b - pred.psi_pred) / pred.psi_pred if pred.psi_pred > 0 else math.nan
        return [N, cls.m, cls.b, cfg.sign, pi_b, pred.pi_pred, rel_pi,
                psi_b, pred.psi_pred, rel_psi, pred.pi_hypothesis_ok,
                pred.psi_hypothesis_ok, tset.roth_range, tset.majorant_range]

    rows = _pmap(cell, cells, threads)
    columns = ["N", "m", "b", "sign", "pi_B", "pi_pred", "rel_err_pi",
               "psi_B", "psi_pred", "rel_err_psi", "pi_hypothesis_ok",
               "psi_hypothesis_ok", "roth_range", "majorant_range"]
    return [Table("density", columns, rows)]


# ---------------------------------------------------------------------------
# expsum


def run_expsum(cfg: ExperimentConfig, seed: int = 0, threads: int = 1) -> list:
    if not cfg.expsum_horizons:
        raise ValueError("no horizons")
    tset = thin_set_from_config(cfg)
    cls = cfg.expsum_class
    horizons = sorted(cfg.expsum_horizons)
    rng = np.random.default_rng(seed_sequence(seed, "expsum", "panel"))
    xis = rng.random(cfg.expsum_panel)
    primes = sieve_primes(max(horizons)) if "prime" in cfg.expsum_kinds else None

    rows = []
    for kind in cfg.expsum_kinds:
        if kind not in ("prime", "integer"):
            raise ValueError(f"unknown expsum kind {kind!r}")
        for N in horizons:
            if kind == "prime":
                pb = build_PB(N, cls, tset, primes=primes)
                reports = _pmap(
                    lambda xi: ext2_report(N, float(xi), cls, tset,
                                           primes=primes, pb=pb),
                    xis, threads)
            else:
                members, psi_inv = class_members_B(N, cls, tset)
                reports = _pmap(
                    lambda xi: ext_B_report(N, float(xi), cls, tset,
                                            members=members, psi_inv=psi_inv),
                    xis, threads)
            for rep in reports:
                rows.append([kind, rep.N, rep.xi, cls.b, cls.m,
                             rep.lhs.real, rep.lhs.imag, rep.rhs.real,
                             rep.rhs.imag, rep.discrepancy, rep.normalized,
                             rep.chi_ceiling, rep.admissible])
    columns = ["kind", "N", "xi", "b", "m", "lhs_re", "lhs_im", "rhs_re",
               "rhs_im", "discrepancy", "normalized", "chi_ceiling",
               "admissible"]
    return [Table("expsum", columns, rows)]


# ---------------------------------------------------------------------------
# vaughan


def run_vaughan(cfg: ExperimentConfig, seed: int = 0, threads: int = 1) -> list:
    if cfg.vaughan_instances < 1:
        raise ValueError("need at least one instance")
    if not (1.0 <= cfg.vaughan_p_min < cfg.vaughan_p_max):
        raise ValueError("need 1 <= p_min < p_max")
    tset = thin_set_from_config(cfg)
    rng = np.random.default_rng(seed_sequence(seed, "vaughan"))
    params = []
    for i in range(cfg.vaughan_instances):
        P = float(rng.uniform(cfg.vaughan_p_min, cfg.vaughan_p_max))
        P1 = P * float(rng.uniform(1.05, 2.0))
        alpha = float(rng.random())
        m = int(rng.integers(1, cfg.vaughan_m_max + 1))
        params.append((i, P, P1, alpha, m))

    def cell(item):
        i, P, P1, alpha, m = item
        vp = vaughan_decompose(P, P1, alpha, m, tset)
        rel = abs(vp.combined - vp.direct) / max(1.0, abs(vp.direct))
        return [i, vp.P, vp.P1, vp.alpha, vp.m, vp.v,
                vp.s1.real, vp.s1.imag, vp.s21.real, vp.s21.imag,
                vp.s22.real, vp.s22.imag, vp.s3.real, vp.s3.imag,
                vp.direct.real, vp.direct.imag,
                vp.combined.real, vp.combined.imag, rel]

    rows = _pmap(cell, params, threads)
    columns = ["instance", "P", "P1", "alpha", "m", "v", "s1_re", "s1_im",
               "s21_re", "s21_im", "s22_re", "s22_im", "s3_re", "s3_im",
               "direct_re", "direct_im", "combined_re", "combined_im",
               "rel_err"]
    return [Table("vaughan", columns, rows)]


# ---------------------------------------------------------------------------
# transfer


def _transfer_cell(n: int, cfg: ExperimentConfig, tset) -> list:
    # Heavy FFT work at N ~ 2n/m: keep one horizon in memory at a time.
    W = max(1, int(0.25 * math.log(math.log(n))))
    m = primorial(W)
    n_prime = next_prime_at_least((2 * n + m - 1) // m)
    primes = sieve_primes(max(n, m * n_prime + m))

    pb = build_PB(n, ResidueClass(0, 1), tset, primes=primes)
    a0 = pb.primes
    if cfg.transfer_a0_mode == "greedy3apfree":
        a0 = greedy_3ap_free(a0)
    params, A, N = w_trick_rescale(a0, n, tset, primes=primes)
    cls = ResidueClass(params.b, params.m)

    rho = rho_measure(cls, N, tset, primes=primes)
    del primes
    sup = sup_nonzero_fourier(rho)
    scale = loglog_scale(params.W)
    a = restrict(rho, A)
    mass_rho = float(rho.mass.real)
    alpha = params.alpha
    delta = cfg.transfer_delta_frac * alpha

    spectrum = large_spectrum(a, delta)
    modes = spectrum[spectrum != 0]
    k = int(modes.size)
    eps = min(0.5, cfg.transfer_eps_safety * scale ** (1.0 / max(k, 1)))
    eps_hyp_ok = eps ** k >= scale
    bohr = bohr_set(BohrSpec(tuple(int(f) for f in modes), eps), N)
    a1 = smooth(a, bohr)
    mass_gap = abs(float(a1.mass.real) - float(a.mass.real))
    n_sup = N * float(np.max(a1.values))
    tri = trilinear_fft(a1, a1, a1)

    try:
        threshold = admissible_r(cfg.c1, cfg.c2)
    except ValueError:
        threshold = math.inf
    if threshold < 3.0 and 0.0 < alpha < 1.0:
        r_env = 0.5 * (threshold + 3.0)
        upper = trilinear_upper_envelope(N, delta, eps, r_env)
        lower = trilinear_lower_envelope(N, alpha)
        env_defined = True
    else:
        upper = lower = math.nan
        env_defined = False

    return [n, params.W, params.m, params.b, N, int(a0.size), int(A.size),
            alpha, mass_rho, delta, k, eps, eps_hyp_ok, int(bohr.size),
            scale, sup, sup / scale, n_sup, mass_gap, tri.real, tri.imag,
            lower, upper, env_defined, params.w_in_range(N),
            class_hypothesis_ok(cls, N), tset.roth_range]


def run_transfer(cfg: ExperimentConfig, seed: int = 0, threads: int = 1) -> list:
    if not cfg.transfer_horizons:
        raise ValueError("no horizons")
    for n in cfg.transfer_horizons:
        if n % 2 != 0:
            raise ValueError("transfer horizons must be even")
    tset = thin_set_from_config(cfg)
    rows = [_transfer_cell(int(n), cfg, tset)
            for n in sorted(cfg.transfer_horizons)]
    columns = ["n", "W", "m", "b", "N", "a0_size", "A_size", "alpha",
               "mass_rho", "delta", "k", "epsilon", "eps_hyp_ok",
               "bohr_size", "scale", "sup_nonzero", "sup_ratio", "n_sup_a1",
               "mass_gap", "tri_re", "tri_im", "lower_env", "upper_env",
               "envelope_defined", "w_in_range", "class_hyp_ok", "roth_range"]
    return [Table("transfer", columns, rows)]


# ---------------------------------------------------------------------------
# majorant


def run_majorant(cfg: ExperimentConfig, seed: int = 0, threads: int = 1) -> list:
    if not cfg.majorant_horizons:
        raise ValueError("no horizons")
    if cfg.majorant_seeds < 1:
        raise ValueError("need at least one seed")
    tset = thin_set_from_config(cfg)
    try:
        threshold = admissible_r(cfg.c1, cfg.c2)
        r_main = threshold + cfg.majorant_r_offset
    except ValueError:
        # no admissible exponent for these curvatures: run at a fixed even
        # exponent and let every row carry admissible=false
        threshold = math.inf
        r_main = 6.0
    r_ctrl = cfg.majorant_control_r
    horizons = sorted(cfg.majorant_horizons)
    primes = sieve_primes(max(horizons))
    oversample = cfg.majorant_oversample

    rows, conv_rows = [], []
    for N in horizons:
        base = prime_exp_polynomial(N, tset, primes=primes)
        if len(base) == 0:
            raise ValueError(f"no thin primes up to N={N}")
        base_vals = grid_values(base, oversample)
        den = {r: float(np.mean(base_vals ** r) ** (1.0 / r))
               for r in (r_main, r_ctrl)}
        for r in (r_main, r_ctrl):
            rep = lr_norm_report(base, r, oversample)
            conv_rows.append([N, r, rep.pairs[0][0], rep.pairs[0][1],
                              rep.pairs[1][0], rep.pairs[1][1],
                              rep.converged])

        def cell(item):
            source, i = item
            child = child_seed(seed, "majorant", N, source, i)
            coefs = sample_coefficients(source, len(base), child)
            vals = grid_values(ExpPolynomial(base.frequencies, coefs),
                               oversample)
            out = []
            for r in (r_main, r_ctrl):
                ratio = float(np.mean(vals ** r) ** (1.0 / r)) / den[r]
                out.append([N, r, child, source, ratio, r > threshold,
                            r == r_ctrl])
            return out

        cells = [(source, i) for source in cfg.majorant_coeff_sources
                 for i in range(cfg.majorant_seeds)]
        for pair in _pmap(cell, cells, threads):
            rows.extend(pair)

    columns = ["N", "r", "seed", "coeff_source", "ratio", "admissible",
               "control"]
    conv_columns = ["N", "r", "oversample", "norm", "oversample_fine",
                    "norm_fine", "converged"]
    # meta values kept as strings so they survive JSON transport untouched
    meta = {"r_threshold": repr(threshold), "r_main": repr(r_main)}
    return [Table("majorant", columns, rows, meta=meta),
            Table("majorant_convergence", conv_columns, conv_rows)]


_RUNNERS = {
    "density": run_density,
    "expsum": run_expsum,
    "vaughan": run_vaughan,
    "transfer": run_transfer,
    "majorant": run_majorant,
}


def run_command(command: str, cfg: ExperimentConfig, seed: int = 0,
                threads: int = 1) -> list:
    if command not in _RUNNERS:
        raise ValueError(f"unknown command {command!r}")
    return _RUNNERS[command](cfg, seed=seed, threads=threads)
