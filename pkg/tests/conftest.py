"""Shared fixtures and independent brute-force oracles.

The experiment tables used by the acceptance suite are built once per
session at the default (acceptance) configuration and reused by the
module-level trend tests, so the expensive runs happen exactly once.
"""

from __future__ import annotations

import numpy as np
import pytest

from thinprimes.config import ExperimentConfig
from thinprimes.experiments import (
    run_density,
    run_expsum,
    run_majorant,
    run_transfer,
    run_vaughan,
    thin_set_from_config,
)
from thinprimes.regvar import (
    PsiSpec,
    RegularFunctionSpec,
    SlowlyVaryingSpec,
    make_catalogue_function,
    make_psi,
)
from thinprimes.sieve import ThinSetSpec, sieve_primes


def column(table, name):
    """Extract one named column of a Table as a list."""
    idx = table.columns.index(name)
    return [row[idx] for row in table.rows]


def trial_division_is_prime(n: int) -> bool:
    """Independent primality oracle by trial division."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def additive_quadruple_count(freqs) -> int:
    """O(|S|^4) count of ordered quadruples with p1 + p2 = p3 + p4."""
    fs = list(freqs)
    count = 0
    for p1 in fs:
        for p2 in fs:
            for p3 in fs:
                for p4 in fs:
                    if p1 + p2 == p3 + p4:
                        count += 1
    return count


@pytest.fixture(scope="session")
def acc_config():
    """The default configuration is the acceptance configuration."""
    return ExperimentConfig()


@pytest.fixture(scope="session")
def acc_tset(acc_config):
    return thin_set_from_config(acc_config)


@pytest.fixture(scope="session")
def primes_1e7():
    return sieve_primes(10**7)


@pytest.fixture(scope="session")
def density_table(acc_config):
    return run_density(acc_config, seed=0)[0]


@pytest.fixture(scope="session")
def expsum_table(acc_config):
    return run_expsum(acc_config, seed=0)[0]


@pytest.fixture(scope="session")
def vaughan_table(acc_config):
    return run_vaughan(acc_config, seed=0)[0]


@pytest.fixture(scope="session")
def transfer_table(acc_config):
    return run_transfer(acc_config, seed=0)[0]


@pytest.fixture(scope="session")
def majorant_tables(acc_config):
    return {t.name: t for t in run_majorant(acc_config, seed=0)}


@pytest.fixture(scope="session")
def unit_identity_tset():
    """Guard-free degenerate set: h = identity, psi forced to 1, so B is all
    of the natural numbers and every weight is exactly 1."""
    ell = SlowlyVaryingSpec(x0=1.0, log_power=0.0)
    h = RegularFunctionSpec(c=1.0, ell=ell)
    psi = PsiSpec(source=h, clip_ceiling=1.0, mode="unit")
    return ThinSetSpec(h1=h, h2=h, psi=psi, sign="plus")


@pytest.fixture(scope="session")
def ps11_tset():
    """Classic floor-of-power configuration: members are exactly the values
    floor(m**1.1), selected through the mirrored fractional-part test."""
    h = make_catalogue_function(1.1, 0.0, x0=1.0)
    return ThinSetSpec(h1=h, h2=h, psi=make_psi(h, "difference"), sign="minus")
