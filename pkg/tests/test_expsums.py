"""Weighted exponential sums, bilinear decomposition, sawtooth truncation."""

import math

import numpy as np
import pytest

from conftest import column
from thinprimes import expsums
from thinprimes.expsums import (
    chi_ceiling_integer,
    chi_ceiling_prime,
    class_members_B,
    ext2_report,
    ext_B_report,
    geometric_class_sum,
    prime_chi_admissible,
    sawtooth_phi,
    sawtooth_truncate,
    vaughan_decompose,
    vdc_sum,
)
from thinprimes.experiments import calibrate_constant, seed_sequence
from thinprimes.numutil import e, kahan_csum
from thinprimes.regvar import eval_phi, eval_psi
from thinprimes.sieve import ResidueClass, build_PB, build_thin_set, sieve_primes

M1 = ResidueClass(0, 1)


# --- admissibility arithmetic -------------------------------------------------

def test_chi_ceilings_at_reference_index():
    assert chi_ceiling_prime(1.02, 1.02) == pytest.approx(
        0.011385199240986674, rel=1e-12)
    assert chi_ceiling_integer(1.02, 1.02) == pytest.approx(
        0.15359477124183005, rel=1e-12)
    # wider indices push the prime ceiling negative
    assert chi_ceiling_prime(1.07, 1.07) < 0


def test_chi_admissibility_predicate():
    assert prime_chi_admissible(1.02, 1.02, 0.01)
    assert not prime_chi_admissible(1.02, 1.02, 0.02)
    assert not prime_chi_admissible(1.07, 1.07, 0.001)


# --- prime-weighted reports ----------------------------------------------------

def test_ext2_degenerate_weights_cancel_exactly(unit_identity_tset):
    rep = ext2_report(50, 0.37, M1, unit_identity_tset)
    assert rep.lhs == rep.rhs
    assert rep.discrepancy == 0.0
    assert rep.normalized == 0.0


def test_ext2_zero_frequency_is_chebyshev_weight(acc_tset):
    rep = ext2_report(10, 0.0, M1, acc_tset)
    assert rep.rhs.imag == pytest.approx(0.0, abs=1e-12)
    assert rep.rhs.real == pytest.approx(math.log(210.0), rel=1e-12)


def test_ext2_triangle_bound(acc_tset):
    pb = build_PB(10**4, M1, acc_tset)
    weight_sum = float(np.sum(pb.psi_inv_weights * pb.log_weights))
    rng = np.random.default_rng(3)
    for xi in rng.random(10):
        rep = ext2_report(10**4, float(xi), M1, acc_tset, pb=pb)
        assert abs(rep.lhs) <= weight_sum * (1 + 1e-12)
        assert rep.discrepancy >= 0.0


def test_ext2_conjugate_symmetry(acc_tset):
    pb = build_PB(10**4, M1, acc_tset)
    for xi in (0.1, 0.37, 0.49):
        rep = ext2_report(10**4, xi, M1, acc_tset, pb=pb)
        mirror = ext2_report(10**4, 1.0 - xi, M1, acc_tset, pb=pb)
        scale = 1.0 + abs(rep.lhs)
        assert abs(mirror.lhs - np.conj(rep.lhs)) <= 1e-9 * scale
        assert abs(mirror.rhs - np.conj(rep.rhs)) <= 1e-9 * scale


def test_prime_report_decay_along_horizons(expsum_table):
    rows = [
        (int(n), float(norm))
        for kind, n, norm in zip(
            column(expsum_table, "kind"),
            column(expsum_table, "N"),
            column(expsum_table, "normalized"),
        )
        if kind == "prime"
    ]
    ns = sorted({n for n, _ in rows})
    maxes = [max(v for n, v in rows if n == horizon) for horizon in ns]
    assert len(maxes) == 3
    for prev, nxt in zip(maxes, maxes[1:]):
        assert nxt <= 1.1 * prev


# --- integer-weighted reports ---------------------------------------------------

def test_ext_b_degenerate_zero_frequency(unit_identity_tset):
    rep = ext_B_report(1000, 0.0, M1, unit_identity_tset)
    assert rep.lhs == pytest.approx(1000.0, rel=1e-12)
    assert rep.rhs == pytest.approx(1000.0, rel=1e-12)


def test_geometric_sum_full_period_cancels():
    val = geometric_class_sum(3000, M1, 1.0 / 3.0)
    assert abs(val) <= 1e-9


def test_geometric_sum_matches_direct_evaluation():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(5, 2000))
        m = int(rng.integers(1, 7))
        bs = [b for b in range(m) if math.gcd(b, m) == 1]
        cls = ResidueClass(int(rng.choice(bs)), m)
        xi = float(rng.random())
        members = np.arange(1, n + 1)
        members = members[members % m == cls.b % m] if m > 1 else members
        direct = kahan_csum(e(members * xi))
        got = geometric_class_sum(n, cls, xi)
        assert abs(got - direct) <= 1e-9 * (1.0 + abs(direct))


def test_integer_report_decay_along_horizons(expsum_table):
    rows = [
        (int(n), float(norm))
        for kind, n, norm in zip(
            column(expsum_table, "kind"),
            column(expsum_table, "N"),
            column(expsum_table, "normalized"),
        )
        if kind == "integer"
    ]
    ns = sorted({n for n, _ in rows})
    maxes = [max(v for n, v in rows if n == horizon) for horizon in ns]
    for prev, nxt in zip(maxes, maxes[1:]):
        assert nxt <= 1.1 * prev


def test_class_members_weights(acc_tset):
    members, psi_inv = class_members_B(200, M1, acc_tset)
    assert np.all(np.diff(members) > 0)
    assert np.allclose(psi_inv, 1.0 / eval_psi(acc_tset.psi, members), rtol=1e-12)


# --- oscillatory block sums ------------------------------------------------------

def test_vdc_single_point_has_unit_modulus(acc_tset):
    value, bound = vdc_sum(1, 1, 1, 0.3, 2, 0, acc_tset)
    assert abs(value) == pytest.approx(1.0, rel=1e-12)
    assert bound > 0


def test_vdc_rejects_zero_modulation(acc_tset):
    with pytest.raises(ValueError):
        vdc_sum(100, 1, 1, 0.3, 0, 0, acc_tset)


def test_vdc_reversed_order_stability(acc_tset):
    X = 10**4
    value, _ = vdc_sum(X, 1, 3, 0.0, 1, 0, acc_tset)
    k = np.arange(X, 0, -1, dtype=float)
    phase = eval_phi(acc_tset.h1, k)
    reversed_sum = kahan_csum(e(phase))
    assert abs(value - reversed_sum) <= 1e-9 * (1.0 + abs(value))


def test_vdc_envelope_calibrates_across_disjoint_grid(acc_tset):
    def draw(rng, count):
        out = []
        for _ in range(count):
            X = int(rng.integers(10, 2000))
            l = int(rng.integers(1, 20))
            j = int(rng.integers(1, 10))
            alpha = float(rng.random())
            m = int(rng.integers(1, 9)) * (1 if rng.random() < 0.5 else -1)
            s = int(rng.integers(0, 2))
            value, bound = vdc_sum(X, l, j, alpha, m, s, acc_tset)
            out.append(abs(value) / bound)
        return out

    rng = np.random.default_rng(seed_sequence(0, "vdc-study"))
    train = draw(rng, 100)
    test = draw(rng, 100)
    constant = calibrate_constant(train)
    assert all(ratio <= constant for ratio in test)
    # the raw envelope shape is never exceeded even with unit constant
    assert max(train + test) < 1.0


def test_vdc_bound_requires_sigma_for_unit_index():
    tset = build_thin_set(1.0, 1.02, log_power1=1.0, x0=math.e)
    # l = 3 keeps every product k*l inside phi1's domain (starts at e)
    value, bound = vdc_sum(500, 3, 1, 0.25, 1, 0, tset)
    assert bound is None
    value2, bound2 = vdc_sum(500, 3, 1, 0.25, 1, 0, tset, sigma1=lambda x: 1.0)
    assert value2 == value
    assert bound2 is not None and bound2 > 0


# --- four-piece decomposition -----------------------------------------------------

def test_vaughan_reference_instance(acc_tset):
    pieces = vaughan_decompose(10**3, 2 * 10**3, 0.137, 1, acc_tset)
    err = abs(pieces.combined - pieces.direct)
    assert err <= 1e-6 * (1.0 + abs(pieces.direct))
    assert pieces.v == pytest.approx((2 * 10**3) ** (1.0 / 3.0), rel=1e-12)


def test_vaughan_identity_on_acceptance_instances(vaughan_table):
    rels = [float(v) for v in column(vaughan_table, "rel_err")]
    assert len(rels) == 50
    assert max(rels) <= 1e-6


def test_vaughan_guards(acc_tset):
    with pytest.raises(ValueError):
        vaughan_decompose(0.5, 1.0, 0.1, 1, acc_tset)  # window below 1
    with pytest.raises(ValueError):
        vaughan_decompose(2000, 1000, 0.1, 1, acc_tset)  # empty block
    with pytest.raises(ValueError):
        vaughan_decompose(1000, 2001, 0.1, 1, acc_tset)  # longer than dyadic
    with pytest.raises(ValueError):
        vaughan_decompose(1, 2, 0.1, 1, acc_tset)  # cutoff at or above P
    # m = 0 is a legitimate pure e(alpha n) window, not an error
    vp = vaughan_decompose(100, 150, 0.1, 0, acc_tset)
    assert abs(vp.combined - vp.direct) <= 1e-6 * max(1.0, abs(vp.direct))


def test_convolved_mangoldt_table_bounded_by_log():
    # |sum over r*s = l, r,s <= v of mangoldt(r)*mobius(s)| <= log l
    from thinprimes.arith import mangoldt_table, mobius_table

    v = 40.0
    limit = int(v * v)
    lam = mangoldt_table(limit)
    mu = mobius_table(limit)
    table = expsums._pi_table(v, lam, mu)
    l = np.arange(2, limit + 1)
    assert np.all(np.abs(table[2:]) <= np.log(l) + 1e-9)


# --- sawtooth ---------------------------------------------------------------------

def test_sawtooth_phi_values():
    assert sawtooth_phi(0.25) == -0.25
    assert sawtooth_phi(0.75) == 0.25
    assert sawtooth_phi(3.0) == -0.5
    assert sawtooth_phi(-1.25) == 0.25


def test_sawtooth_truncate_at_integer_points():
    approx, bound = sawtooth_truncate(2.0, 100)
    assert bound == 1.0
    assert approx == pytest.approx(0.0, abs=1e-12)


def test_sawtooth_truncate_quarter_point():
    approx, bound = sawtooth_truncate(0.25, 1000)
    assert bound == pytest.approx(1.0 / 250.0)
    assert abs(approx - (-0.25)) <= bound  # comfortably inside one envelope


def test_sawtooth_sweep_constant_is_stable_across_truncation_orders():
    rng = np.random.default_rng(seed_sequence(0, "acceptance", "sawtooth"))
    xs = rng.random(10**4)
    constants = {}
    for M in (100, 1000):
        approx, bound = sawtooth_truncate(xs, M)
        err = np.abs(sawtooth_phi(xs) - approx)
        assert np.all(err <= bound)  # unit constant already suffices here
        constants[M] = float(np.max(err / bound))
    k_lo, k_hi = sorted(constants.values())
    assert k_hi / k_lo <= 1.2
    assert k_hi < 1.0


def test_sawtooth_scalar_and_array_agree():
    xs = np.array([0.1, 0.25, 0.9])
    arr, bounds = sawtooth_truncate(xs, 50)
    for i, x in enumerate(xs):
        a, b = sawtooth_truncate(float(x), 50)
        assert a == pytest.approx(arr[i], rel=1e-12)
        assert b == pytest.approx(bounds[i], rel=1e-12)
