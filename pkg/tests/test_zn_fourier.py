import numpy as np
import pytest

from psroth import (
    CyclicFunction,
    convolve,
    dft,
    fourier_on_grid,
    inverse_dft,
    sparse_fourier_on_grid,
    trilinear_direct,
    trilinear_fft,
)

RNG = np.random.default_rng(314159)


def dft_matrix_oracle(vals):
    # direct O(N^2) definition, nothing shared with the implementation
    N = len(vals)
    xs = np.arange(N)
    W = np.exp(-2j * np.pi * np.outer(xs, xs) / N)
    return W @ np.asarray(vals, dtype=complex)


def random_complex(N):
    return RNG.standard_normal(N) + 1j * RNG.standard_normal(N)


@pytest.mark.parametrize("N", [1, 2, 5, 32, 64, 101, 128, 257, 1009])
def test_dft_matches_matrix_oracle(N):
    f = random_complex(N)
    got = dft(f).values
    want = dft_matrix_oracle(f)
    scale = np.max(np.abs(want)) or 1.0
    assert np.max(np.abs(got - want)) < 1e-9 * scale


def test_delta_and_constant():
    d0 = np.zeros(7, dtype=complex)
    d0[0] = 1.0
    assert np.allclose(dft(d0).values, np.ones(7))
    ones = np.ones(7, dtype=complex)
    F = dft(ones).values
    assert F[0] == pytest.approx(7)
    assert np.max(np.abs(F[1:])) < 1e-12


@pytest.mark.parametrize("N", [32, 101, 1009])
def test_inversion_scaling(N):
    f = random_complex(N)
    back = inverse_dft(dft(f)).values
    assert np.max(np.abs(back - N * f)) < 1e-9 * N * np.max(np.abs(f))


@pytest.mark.parametrize("N", [32, 101, 1009])
def test_parseval(N):
    f = random_complex(N)
    lhs = np.sum(np.abs(f) ** 2)
    rhs = np.sum(np.abs(dft(f).values) ** 2) / N
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_empty_rejected():
    with pytest.raises(ValueError):
        CyclicFunction(np.empty(0, dtype=complex))


def test_convolution_against_double_sum():
    N = 64
    f, g = random_complex(N), random_complex(N)
    got = convolve(f, g).values
    want = np.array([sum(f[(x - y) % N] * g[y] for y in range(N))
                     for x in range(N)])
    assert np.max(np.abs(got - want)) < 1e-9 * np.max(np.abs(want))


def test_convolution_units():
    N = 16
    f = random_complex(N)
    d0 = np.zeros(N, dtype=complex)
    d0[0] = 1.0
    assert np.allclose(convolve(f, d0).values, f)
    ones = np.ones(N, dtype=complex)
    assert np.allclose(convolve(ones, ones).values, N * ones)


def test_convolution_transform_product():
    N = 101
    f, g = random_complex(N), random_complex(N)
    lhs = dft(convolve(f, g).values).values
    rhs = dft(f).values * dft(g).values
    assert np.max(np.abs(lhs - rhs)) < 1e-9 * np.max(np.abs(rhs))


def test_convolution_length_mismatch():
    with pytest.raises(ValueError):
        convolve(np.ones(4, dtype=complex), np.ones(5, dtype=complex))


@pytest.mark.parametrize("N", [5, 101, 1009])
def test_trilinear_agreement(N):
    for _ in range(8):
        f, g, h = (random_complex(N) for _ in range(3))
        a = trilinear_fft(f, g, h)
        b = trilinear_direct(f, g, h)
        assert abs(a - b) <= 1e-9 * max(abs(b), 1.0), N


def test_trilinear_pinned_values():
    d0 = np.zeros(5, dtype=complex)
    d0[0] = 1.0
    assert trilinear_fft(d0, d0, d0) == pytest.approx(1.0)
    ones = np.ones(5, dtype=complex)
    assert trilinear_fft(ones, ones, ones) == pytest.approx(25.0)
    ind = np.zeros(5, dtype=complex)
    ind[[0, 1, 2]] = 1.0
    assert trilinear_fft(ind, ind, ind) == pytest.approx(5.0)
    assert trilinear_direct(ind, ind, ind) == pytest.approx(5.0)


def test_trilinear_indicator_brute():
    # brute force over all (x, d) for a random indicator
    N = 101
    mask = RNG.random(N) < 0.3
    cnt = sum(1 for x in range(N) for d in range(N)
              if mask[x] and mask[(x + d) % N] and mask[(x + 2 * d) % N])
    a = np.where(mask, 1.0 + 0j, 0.0)
    assert trilinear_fft(a, a, a) == pytest.approx(cnt, abs=1e-6)
    assert cnt >= int(mask.sum())  # diagonal d=0 floor


def test_trilinear_even_N_rejected():
    ones = np.ones(6, dtype=complex)
    with pytest.raises(ValueError):
        trilinear_fft(ones, ones, ones)


def test_fourier_on_grid_sign_convention():
    # positive-exponent transform: F(xi) = sum f(n) e^{2 pi i n xi}
    f = np.array([1.0, 1.0], dtype=complex)
    G = 64
    got = fourier_on_grid(f, G)
    xs = np.arange(G) / G
    want_sq = 2.0 + 2.0 * np.cos(2 * np.pi * xs)
    assert np.max(np.abs(np.abs(got) ** 2 - want_sq)) < 1e-12


def test_fourier_on_grid_matches_conjugated_dft():
    N = 32
    f = random_complex(N)
    grid_vals = fourier_on_grid(f, N)
    assert np.max(np.abs(grid_vals - np.conj(dft(np.conj(f)).values))) < 1e-9


def test_fourier_on_grid_delta():
    f = np.array([1.0 + 0j])
    assert np.allclose(fourier_on_grid(f, 17), np.ones(17))


def test_fourier_on_grid_support_longer_than_grid():
    # folding: indices collapse mod grid size
    f = np.zeros(10, dtype=complex)
    f[7] = 1.0
    got = fourier_on_grid(f, 3)
    xs = np.arange(3) / 3
    want = np.exp(2j * np.pi * 7 * xs)
    assert np.max(np.abs(got - want)) < 1e-12


def test_sparse_fourier_on_grid():
    G = 16
    positions = np.array([3, 100, 2 ** 40])
    weights = np.array([1.0, -2.0, 0.5])
    got = sparse_fourier_on_grid(positions, weights, G)
    xs = np.arange(G) / G
    # e(p j/G) = e((p mod G) j/G); fold before exponentiating, otherwise the
    # oracle itself drowns in argument-reduction error at p = 2^40
    want = sum(w * np.exp(2j * np.pi * (p % G) * xs)
               for p, w in zip(positions, weights))
    assert np.max(np.abs(got - want)) < 1e-9
