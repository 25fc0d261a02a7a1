"""Exact-identity suite: every machine-checkable identity in the package.

Each check returns (name, passed, detail).  run_all executes the whole suite
with a fixed seed; the command line prints one line per check and the
acceptance tests assert on the same results, so the two entry points cannot
drift apart.
"""

from __future__ import annotations

import math

import numpy as np

from . import expsums, hfun, measures, roth, sieve, zn_fourier


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


def check_trilinear_routes(seed=2026, tol=1e-9):
    """FFT trilinear form vs the O(N^2) double sum on random triples."""
    rng = _rng(seed)
    worst = 0.0
    for N in (5, 101, 1009):
        for _ in range(50):
            f, g, h = (rng.normal(size=N) + 1j * rng.normal(size=N) for _ in range(3))
            a = zn_fourier.trilinear_fft(f, g, h)
            b = zn_fourier.trilinear_direct(f, g, h)
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    return "trilinear_fft_vs_direct", worst <= tol, f"worst rel err {worst:.3e}"


def check_inversion_and_parseval(seed=2027, tol=1e-9):
    """inverse_dft(dft(f)) = N f and sum|f|^2 = N^{-1} sum|F|^2."""
    rng = _rng(seed)
    worst = 0.0
    for N in (32, 101, 1009):
        f = rng.normal(size=N) + 1j * rng.normal(size=N)
        F = zn_fourier.dft(f)
        back = zn_fourier.inverse_dft(F).values / N
        worst = max(worst, float(np.max(np.abs(back - f))))
        pars = abs(np.sum(np.abs(f) ** 2) - np.sum(np.abs(F.values) ** 2) / N)
        worst = max(worst, pars / max(1.0, float(np.sum(np.abs(f) ** 2))))
    return "inversion_and_parseval", worst <= tol, f"worst err {worst:.3e}"


def check_bohr_pigeonhole(seed=2028):
    """|B(R, eps)| >= eps^k N for spectra of random restricted measures."""
    rng = _rng(seed)
    ok = True
    detail = []
    # delta sits just under the top nonzero peaks so k stays small but > 1
    for N, delta_frac, eps in ((101, 0.43, 0.15), (257, 0.29, 0.2), (1009, 0.18, 0.1)):
        w = rng.random(N) * (rng.random(N) < 0.2)
        s = w.sum()
        a = measures.WeightedSequence(N, w / s if s else w, "restricted")
        rep = measures.spectrum_and_bohr(a, delta_frac * a.mass, eps)
        lower = eps ** rep.k * N
        ok &= rep.bohr.size >= lower * (1 - 1e-12)
        detail.append(f"N={N}: |B|={rep.bohr.size} >= {lower:.3f} (k={rep.k})")
    return "bohr_pigeonhole", ok, "; ".join(detail)


def check_varnavides_identity(seed=2029):
    """sum_a |A' cap P_{a,d}| = M |A'| exactly for every d."""
    rng = _rng(seed)
    ok = True
    for N, M in ((101, 8), (101, 5)):
        A = np.flatnonzero(rng.random(N) < 0.3)
        rep = roth.varnavides_count(A, N, M)
        ok &= rep.identity_ok
    return "varnavides_identity", ok, "exact integer identity over all d"


def check_lam3_decomposition(seed=2030):
    """Lam3(1_A) = |A| + ordered nontrivial count, FFT vs brute."""
    rng = _rng(seed)
    ok = True
    for N in (101, 1009):
        for _ in range(5):
            A = np.flatnonzero(rng.random(N) < 0.25)
            rep = roth.count_3aps(A, N, mode="cyclic")
            ok &= rep.lam3 == rep.size + rep.nontrivial
    return "lam3_decomposition", ok, "lam3 = |A| + nontrivial, both routes"


def check_vaughan_residual(seed=2031, tol=1e-6):
    """Four-piece split reassembles the direct sum at P = 10^3."""
    rng = _rng(seed)
    inv = hfun.inverse_of(hfun.ps_exponent_spec(0.95))
    table = sieve.sieve_primes(2048)
    worst = 0.0
    for _ in range(10):
        xi = float(rng.random())
        m = int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
        q = int(rng.choice([1, 1, 2, 3]))
        a = 0 if q == 1 else int(rng.choice([r for r in range(q) if math.gcd(r, q) == 1]))
        pp = expsums.PhaseParams(xi, m, a, q, 1000, 2000)
        split = expsums.vaughan_decompose(inv, pp, table)
        worst = max(worst, split.residual / max(1.0, abs(split.direct)))
    return "vaughan_residual", worst <= tol, f"worst rel residual {worst:.3e}"


def check_floor_identity_matches_enumeration():
    """Membership by floor identity vs direct enumeration, h = x^(3/2)."""
    inv = hfun.inverse_of(hfun.pure_power(1.5))
    table = sieve.sieve_primes(3000)
    ps = sieve.enumerate_ps_primes(inv, 3000, table)
    mask = ps.member_mask(3000)
    ok = True
    bad = []
    for p in table.primes[table.primes >= ps.p_min]:
        if sieve.ps_member(inv, int(p)) != bool(mask[p]):
            ok = False
            bad.append(int(p))
    return "floor_identity_vs_enumeration", ok, \
        f"checked {int(np.sum(table.primes >= ps.p_min))} primes" + \
        (f", mismatches {bad[:5]}" if bad else "")


def check_chebyshev_identity():
    """sum_{d | n} Lambda(d) = log n for n <= 2000."""
    table = sieve.sieve_primes(2000)
    lam = table.mangoldt_array()
    worst = 0.0
    for n in range(2, 2001):
        s = sum(lam[d] for d in range(1, n + 1) if n % d == 0)
        worst = max(worst, abs(s - math.log(n)))
    return "chebyshev_identity", worst <= 1e-9, f"worst abs err {worst:.3e}"


ALL_CHECKS = (
    check_trilinear_routes,
    check_inversion_and_parseval,
    check_bohr_pigeonhole,
    check_varnavides_identity,
    check_lam3_decomposition,
    check_vaughan_residual,
    check_floor_identity_matches_enumeration,
    check_chebyshev_identity,
)


def run_all(seed=2026):
    results = []
    for fn in ALL_CHECKS:
        try:
            name, passed, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            name, passed, detail = fn.__name__, False, f"raised {exc!r}"
        results.append((name, bool(passed), detail))
    return results
