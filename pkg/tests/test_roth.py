import math

import numpy as np
import pytest

from psroth import (
    WeightedSequence,
    count_3aps,
    enumerate_ps_primes,
    fourier_sup_decay,
    inverse_of,
    pure_power,
    restriction_ratio,
    smoothing_bound_chain,
    spectrum_and_bohr,
    transference_build,
    varnavides_count,
)
from psroth.roth import _norm_with_refinement


def brute_pair_count(A):
    """Ordered pairs (x, z), x != z, x = z (mod 2), with (x+z)/2 in A."""
    s = set(int(x) for x in A)
    return sum(1 for x in s for z in s
               if x != z and (x + z) % 2 == 0 and (x + z) // 2 in s)


def test_integer_progression_basic():
    rep = count_3aps({1, 2, 3}, 10, mode="integer")
    assert rep.size == 3
    assert rep.nontrivial == 2
    assert rep.lam3 == 5
    assert rep.witness == (1, 2, 3)


def test_integer_progression_free():
    rep = count_3aps({1, 2, 4, 5}, 6, mode="integer")
    assert rep.nontrivial == 0
    assert rep.witness is None
    assert rep.lam3 == rep.size == 4


def test_cyclic_mod5():
    rep = count_3aps({0, 1, 2}, 5, mode="cyclic")
    assert rep.lam3 == 5
    assert rep.nontrivial == 2
    assert rep.witness is not None
    x, y, z = rep.witness
    assert (y - x) % 5 == (z - y) % 5


def test_cyclic_full_set():
    N = 15
    rep = count_3aps(range(N), N, mode="cyclic")
    assert rep.lam3 == N * N
    assert rep.nontrivial == N * (N - 1)


def test_integer_count_against_pair_oracle():
    rng = np.random.default_rng(11)
    for _ in range(20):
        N = int(rng.integers(20, 300))
        A = np.flatnonzero(rng.random(N) < 0.3)
        rep = count_3aps(A, N, mode="integer")
        assert rep.nontrivial == brute_pair_count(A)


def test_cyclic_fft_matches_brute():
    rng = np.random.default_rng(3)
    for N in (101, 1009):
        for _ in range(4):
            A = np.flatnonzero(rng.random(N) < 0.25)
            # brute mode already cross-checks internally for odd N
            br = count_3aps(A, N, mode="cyclic", method="brute")
            ff = count_3aps(A, N, mode="cyclic", method="fft")
            assert br.lam3 == ff.lam3
            assert ff.witness is None


def test_count_validation():
    with pytest.raises(ValueError):
        count_3aps({0, 12}, 10, mode="cyclic")
    with pytest.raises(ValueError):
        count_3aps({0, 1}, 8, mode="cyclic", method="fft")
    with pytest.raises(ValueError):
        count_3aps({0, 1}, 8, mode="diagonal")


def test_empty_set_counts():
    rep = count_3aps([], 11, mode="cyclic")
    assert rep.lam3 == 0 and rep.nontrivial == 0 and rep.witness is None


# -- averaged subprogression counts -------------------------------------------

def test_varnavides_full_set():
    rep = varnavides_count(range(11), 11, 5, d_list=[1, 2, 3])
    assert rep.identity_ok
    assert rep.good_pairs == 11 * 3
    for d in (1, 2, 3):
        assert np.all(rep.per_d_counts[d] == 5)


def test_varnavides_empty_set():
    rep = varnavides_count([], 11, 5, threshold=1.0, d_list=[1, 2])
    assert rep.identity_ok
    assert rep.good_pairs == 0
    assert rep.Z_lower == 0


def test_varnavides_averaging_identity():
    rng = np.random.default_rng(7)
    N, M = 101, 5
    A = rng.choice(N, size=30, replace=False)
    rep = varnavides_count(A, N, M, d_list=[7])
    counts = rep.per_d_counts[7]
    assert int(counts.sum()) == M * 30
    assert rep.good_pairs == int(np.count_nonzero(counts >= rep.threshold))
    full = varnavides_count(A, N, M)  # identity across every d
    assert full.identity_ok


def test_varnavides_validation():
    with pytest.raises(ValueError):
        varnavides_count([0], 10, 2)
    with pytest.raises(ValueError):
        varnavides_count([0], 10, 11)
    with pytest.raises(ValueError):
        varnavides_count([10], 10, 3)


# -- transference --------------------------------------------------------------

def test_transfer_trivial_modulus(inv95, table_1e6):
    rep = transference_build(inv95, table_1e6, 10 ** 4)
    assert rep.params.W == 1 and rep.params.m == 1 and rep.params.b == 0
    assert rep.mass == rep.window_mass
    assert rep.mass > 0
    ps = enumerate_ps_primes(inv95, 10 ** 4, table_1e6)
    window = ps.members[(ps.members > 5000) & (ps.members <= 10 ** 4)]
    assert np.array_equal(rep.A, window)


def test_transfer_override(inv95, table_1e6):
    n = 10 ** 5
    rep = transference_build(inv95, table_1e6, n, override_W=2)
    assert rep.params.m == 2 and rep.params.b == 1
    assert rep.N == 100003
    assert math.ceil(2 * n / rep.params.m) <= rep.N <= 4 * n // rep.params.m
    assert table_1e6.is_prime[rep.N]
    assert rep.A.min() >= 1 and rep.A.max() <= rep.N // 2
    # every odd member carries its weight over: window mass is preserved
    assert rep.mass == pytest.approx(rep.window_mass, rel=1e-12)


def test_transfer_preserves_progressions(inv95, table_1e6):
    n = 2000
    rep = transference_build(inv95, table_1e6, n, override_W=2)
    m, b = rep.params.m, rep.params.b
    picked = rep.A * m + b
    down = count_3aps(rep.A, int(rep.A.max()) + 1, mode="integer")
    up = count_3aps(picked, int(picked.max()) + 1, mode="integer")
    assert down.nontrivial == up.nontrivial
    assert down.size == up.size


def test_transfer_validation(inv95, table_1e6):
    with pytest.raises(ValueError):
        transference_build(inv95, table_1e6, 8)
    with pytest.raises(ValueError):
        transference_build(inv95, table_1e6, 10 ** 4, A0=[4, 6, 8])


# -- restriction ensemble -------------------------------------------------------

def test_restriction_control_and_determinism(inv95, table_1e6):
    rep1 = restriction_ratio(inv95, table_1e6, 2000, 3.0, 8, 123)
    rep2 = restriction_ratio(inv95, table_1e6, 2000, 3.0, 8, 123)
    assert rep1.control_ratio == 1.0
    assert np.array_equal(rep1.ratios, rep2.ratios)
    assert rep1.max_ratio < 1.0
    assert np.all(rep1.ratios > 0.5)
    assert rep1.grid == 16000


def test_restriction_global_modulation(inv95, table_1e6):
    ps = enumerate_ps_primes(inv95, 2000, table_1e6)
    ones = np.ones(ps.members.size, dtype=complex)
    base = _norm_with_refinement(ps.members, ones, 8192, 3.0)
    rotated = _norm_with_refinement(ps.members, np.exp(0.7j) * ones, 8192, 3.0)
    assert rotated == pytest.approx(base, rel=1e-12)


def test_restriction_validation(inv95, table_1e6):
    with pytest.raises(ValueError):
        restriction_ratio(inv95, table_1e6, 2000, 3.0, 5, 1, grid=4000)
    with pytest.raises(ValueError):
        restriction_ratio(inv95, table_1e6, 2000, 0.0, 5, 1)
    with pytest.raises(ValueError):
        restriction_ratio(inv95, table_1e6, 2000, 3.0, 0, 1)


# -- spectral decay and smoothing ----------------------------------------------

def test_sup_decay_identity_map(table_1e6):
    inv = inverse_of(pure_power(1.0))
    rows, slope = fourier_sup_decay(inv, table_1e6, [10 ** 4, 10 ** 5])
    assert all(s == 0.0 for _, s in rows)
    assert abs(slope) < 1e-9


def test_sup_decay_negative_slope(inv95, table_1e6):
    rows, slope = fourier_sup_decay(inv95, table_1e6, [10 ** 4, 3 * 10 ** 4, 10 ** 5])
    sups = [s for _, s in rows]
    assert sups[0] > sups[1] > sups[2] > 0
    print(f"sup decay slope: {slope:.4f}")
    assert slope < -0.2


def test_smoothing_chain_random_triples():
    rng = np.random.default_rng(17)
    N = 1009
    for trial in range(10):
        w = rng.random(N) * (rng.random(N) < 0.05)
        a = WeightedSequence(N, w, "test")
        report = spectrum_and_bohr(a, 0.4 * a.mass, 0.3)
        out = smoothing_bound_chain(a, report)
        assert out["identity_gap"] <= 1e-9
        assert abs(out["frequency_sum"]) <= out["triangle_bound"] + 1e-9
        assert abs(out["difference"]) <= out["triangle_bound"] + 1e-9


def test_smoothing_chain_degenerate_bohr():
    # beta concentrated at 0 smooths nothing: the difference vanishes
    N = 101
    w = np.zeros(N)
    w[[3, 10, 44]] = 1.0
    a = WeightedSequence(N, w, "test")
    report = spectrum_and_bohr(a, 0.5, 1e-3)  # tiny eps forces B = {0}
    out = smoothing_bound_chain(a, report)
    assert out["identity_gap"] <= 1e-9


def test_smoothing_chain_even_N():
    a = WeightedSequence(10, np.ones(10), "test")
    report = spectrum_and_bohr(a, 0.5, 0.3)
    with pytest.raises(ValueError):
        smoothing_bound_chain(a, report)
