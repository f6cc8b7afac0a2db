"""Closed-form, quadrature, dynamic-programming and enumeration ground truth.

Everything here is deterministic.  The exit-time law of Brownian motion from
the interval (-1, 1) is evaluated by two theta-function series (spectral for
large t, images for small t); random-walk quantities come from exact
first-passage recursions, the reflection principle, or brute-force
enumeration for small sizes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special, stats

from .errors import InvalidArgument, UnsupportedSize

DP_MAX_N = 2048
RANGE_TABLE_MAX_N = 128
ENUMERATION_MAX = 22

_PI2_8 = math.pi**2 / 8.0


# ---------------------------------------------------------------------------
# exit time of (-1, 1)


@dataclass(frozen=True)
class ExitTimeLaw:
    """Law of the first exit time of Brownian motion from ``(-level, level)``.

    The spectral series converges fast for ``t >= crossover`` and the image
    (reflection) series for ``t < crossover``.  Both are alternating with
    decreasing terms, so the truncation error is below the first omitted term:
    with five terms that is ``4/(11 pi) exp(-121 pi^2/16)`` (spectral) and
    ``2 erfc(11)`` (images), far under ``tolerance``.
    """

    series_terms: int = 5
    tolerance: float = 1e-10
    crossover: float = 0.5
    level: float = 1.0

    def survival_spectral(self, t):
        t = np.asarray(t, dtype=float) / self.level**2
        q = np.exp(-_PI2_8 * t)
        q8 = q**8
        # term k carries q^((2k+1)^2); successive exponents differ by 8(k+1)
        term = q.copy()
        step = q8
        total = 4.0 / math.pi * term
        for k in range(1, self.series_terms):
            term = term * step
            step = step * q8
            total += (-1.0) ** k * 4.0 / ((2 * k + 1) * math.pi) * term
        return total

    def survival_images(self, t):
        t = np.asarray(t, dtype=float) / self.level**2
        k = np.arange(self.series_terms)
        odd = 2 * k + 1
        with np.errstate(divide="ignore"):
            arg = np.divide.outer(odd, np.sqrt(t) * math.sqrt(2.0))
        # 4 * sum (-1)^k P{N > (2k+1)/sqrt(t)} = P{tau < t}
        tail = 0.5 * special.erfc(arg)
        sign = ((-1.0) ** k)[:, None] if tail.ndim > 1 else (-1.0) ** k
        return 1.0 - 4.0 * (sign * tail).sum(axis=0)

    def survival(self, t):
        """``P{tau >= t}``."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0) or np.any(np.isnan(t_arr)):
            raise InvalidArgument("exit-time survival needs t >= 0")
        flat = np.atleast_1d(t_arr).ravel()
        out = np.empty_like(flat)
        big = flat >= self.crossover * self.level**2
        if big.any():
            out[big] = self.survival_spectral(flat[big])
        if (~big).any():
            out[~big] = self.survival_images(flat[~big])
        out = np.clip(out, 0.0, 1.0)
        if t_arr.ndim == 0:
            return float(out[0])
        return out.reshape(t_arr.shape)

    def cdf(self, t):
        return 1.0 - self.survival(t) if np.ndim(t) else 1.0 - self.survival(float(t))

    def density(self, t):
        """``-d/dt survival``, from whichever series :meth:`survival` uses at ``t``."""
        t_arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t_arr).ravel() / self.level**2
        k = np.arange(self.series_terms)
        odd = 2 * k + 1
        sign = (-1.0) ** k
        out = np.zeros_like(flat)
        big = flat >= self.crossover
        if big.any():
            coef = sign * 4.0 / (odd * math.pi) * odd**2 * _PI2_8
            out[big] = (coef * np.exp(-np.multiply.outer(flat[big], odd**2) * _PI2_8)).sum(axis=-1)
        small = ~big & (flat > 0)
        if small.any():
            ts = flat[small][:, None]
            terms = sign * 2.0 * odd * np.exp(-(odd**2) / (2.0 * ts)) / (math.sqrt(2.0 * math.pi) * ts**1.5)
            out[small] = terms.sum(axis=-1)
        out /= self.level**2
        if t_arr.ndim == 0:
            return float(out[0])
        return out.reshape(t_arr.shape)

    @property
    def _inverse_table(self):
        return _survival_inverse_table(self)

    def inverse_survival(self, u, tol: float = 1e-10) -> np.ndarray:
        """Solve ``survival(t) = u`` by bisection to absolute tolerance ``tol`` in t.

        A precomputed monotone table narrows each bracket first; the bisection
        itself is plain interval halving on the series.
        """
        u = np.asarray(u, dtype=float)
        grid_t, grid_s = self._inverse_table
        # grid_s is decreasing in grid_t
        idx = np.searchsorted(-grid_s, -u, side="left")
        idx = np.clip(idx, 1, grid_t.size - 1)
        lo = grid_t[idx - 1].copy()
        hi = grid_t[idx].copy()
        beyond = u < grid_s[-1]
        if beyond.any():
            # deep tail: the leading spectral term alone is exact to rounding here
            lo[beyond] = grid_t[-1]
            hi[beyond] = (np.log(4.0 / math.pi) - np.log(u[beyond])) / _PI2_8 * self.level**2 + 1.0
        # tighten the table bracket around the interpolated root when it still brackets
        s_lo, s_hi = grid_s[idx - 1], grid_s[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            guess = lo + (hi - lo) * (s_lo - u) / (s_lo - s_hi)
        guess = np.where(np.isfinite(guess) & ~beyond, guess, 0.5 * (lo + hi))
        pad = 1e-7 * self.level**2
        t_lo = np.maximum(lo, guess - pad)
        t_hi = np.minimum(hi, guess + pad)
        ok = (self.survival(t_lo) > u) & (self.survival(t_hi) <= u)
        lo = np.where(ok, t_lo, lo)
        hi = np.where(ok, t_hi, hi)
        while True:
            width = hi - lo
            if width.max(initial=0.0) <= tol:
                break
            mid = 0.5 * (lo + hi)
            above = self.survival(mid) > u
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        return 0.5 * (lo + hi)


@lru_cache(maxsize=8)
def _survival_inverse_table(law: ExitTimeLaw):
    t = np.concatenate([np.linspace(0.0, 0.05, 257)[:-1], np.linspace(0.05, 40.0, 1 << 15)])
    t = t * law.level**2
    return t, law.survival(t)


DEFAULT_EXIT_LAW = ExitTimeLaw()


def tau1_survival(t):
    """``P{tau_1 >= t}`` for the unit exit time; absolute error below 1e-10."""
    return DEFAULT_EXIT_LAW.survival(t)


@lru_cache(maxsize=1)
def tau1_moments() -> tuple[float, float]:
    """(mean, variance) of the unit exit time from quadrature of the survival function."""
    s = DEFAULT_EXIT_LAW.survival
    pieces = [(0.0, 0.5), (0.5, 4.0), (4.0, 60.0)]
    m1 = sum(integrate.quad(s, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)[0] for a, b in pieces)
    m2 = sum(
        2.0 * integrate.quad(lambda t: t * s(t), a, b, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        for a, b in pieces
    )
    return m1, m2 - m1 * m1


def reflection_probability(x: float, t: float) -> float:
    """``P{x + B_s > 0 for all s <= t} = P{|B_t| <= x} = 2 Phi(x / sqrt t) - 1``."""
    if not (x > 0 and t > 0):
        raise InvalidArgument("reflection_probability needs x > 0 and t > 0")
    if math.isinf(x):
        return 1.0
    return math.erf(x / math.sqrt(2.0 * t))


# ---------------------------------------------------------------------------
# expected intersection local times


def expected_mutual_ilt(t: float) -> float:
    """Mean of the mutual intersection local time on ``[0, t]^2`` by quadrature.

    The integrand is the N(0, s + r) density at zero.  The inner integral over
    s is taken analytically and the outer one numerically.
    """
    if not t > 0:
        raise InvalidArgument("expected_mutual_ilt needs t > 0")

    def inner(r):
        return 2.0 * (math.sqrt(t + r) - math.sqrt(r))

    val, _ = integrate.quad(inner, 0.0, t, epsabs=0.0, epsrel=1e-12, limit=200)
    return val / math.sqrt(2.0 * math.pi)


def expected_mutual_ilt_closed(t: float) -> float:
    return t**1.5 * (8.0 / 3.0) * (math.sqrt(2.0) - 1.0) / math.sqrt(2.0 * math.pi)


def expected_self_ilt(t: float) -> float:
    """Mean of the self-intersection local time on ``[0, t]^2`` (both orderings counted)."""
    if not t > 0:
        raise InvalidArgument("expected_self_ilt needs t > 0")
    val, _ = integrate.quad(lambda s: 4.0 * math.sqrt(s), 0.0, t, epsrel=1e-12)
    return val / math.sqrt(2.0 * math.pi)


def hat_autocorrelation(z):
    """``int hat(v) hat(v + z) dv`` for the unit hat ``max(0, 1 - |v|)``.

    Averaged over the bin origin, linear binning at width h turns a pair of
    points at distance d into the kernel ``hat_autocorrelation(d / h) / h``.
    """
    z = np.abs(np.asarray(z, dtype=float))
    near = 2.0 / 3.0 - z**2 + 0.5 * z**3
    far = (2.0 - z) ** 3 / 6.0
    return np.where(z < 1.0, near, np.where(z < 2.0, far, 0.0))


def _smoothed_gaussian_density(v: float, h: float) -> float:
    # E[hat_autocorrelation(N(0, v) / h) / h]
    if v <= 0.0:
        return 2.0 / (3.0 * h)
    sd = math.sqrt(v)
    val, _ = integrate.quad(
        lambda d: hat_autocorrelation(d / h) / h * math.exp(-0.5 * d * d / v) / (sd * math.sqrt(2.0 * math.pi)),
        0.0, 2.0 * h, points=[h], epsabs=1e-13, epsrel=1e-11,
    )
    return 2.0 * val


def expected_binned_ilt(h: float, functional: str = "mutual", t: float = 1.0) -> float:
    """Mean of the linear-binned estimator at width ``h`` in the continuum-time limit.

    The binned estimate equals the exact functional with the Dirac delta
    replaced by the origin-averaged binning kernel, so its mean falls short of
    :func:`expected_mutual_ilt` / :func:`expected_self_ilt` by the smoothing bias.
    """
    if not h > 0 or not t > 0:
        raise InvalidArgument("expected_binned_ilt needs h > 0 and t > 0")
    f = lambda v: _smoothed_gaussian_density(v, h)  # noqa: E731
    knots = [x for x in (h * h, 4.0 * h * h, 16.0 * h * h) if x < t]
    if functional == "mutual":
        # s + r has the triangular density min(v, 2t - v) on [0, 2t]
        a, _ = integrate.quad(lambda v: v * f(v), 0.0, t, points=knots or None, limit=200, epsrel=1e-10)
        b, _ = integrate.quad(lambda v: (2.0 * t - v) * f(v), t, 2.0 * t, limit=200, epsrel=1e-10)
        return a + b
    if functional == "self":
        val, _ = integrate.quad(lambda u: 2.0 * (t - u) * f(u), 0.0, t, points=knots or None, limit=200, epsrel=1e-10)
        return val
    raise InvalidArgument(f"unknown functional {functional!r}")


# ---------------------------------------------------------------------------
# simple random walk: enumeration


def _check_dp_size(n: int, cap: int = DP_MAX_N) -> None:
    if int(n) != n or n < 1 or n > cap:
        raise UnsupportedSize(f"n={n} outside the supported range 1..{cap}")


def enumerate_walks(n: int, start: int = 0) -> np.ndarray:
    """All 2**n simple-walk paths as rows ``(S_0, ..., S_n)``."""
    if n > 24:
        raise UnsupportedSize("enumeration limited to n <= 24")
    if n == 0:
        return np.full((1, 1), start, dtype=np.int64)
    bits = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1
    steps = 2 * bits.astype(np.int64) - 1
    out = np.empty((1 << n, n + 1), dtype=np.int64)
    out[:, 0] = start
    np.cumsum(steps, axis=1, out=out[:, 1:])
    out[:, 1:] += start
    return out


def no_intersection_enumerated(n: int) -> float:
    """``P_mu{Q_n = 0}`` by listing every pair of n-step paths (n <= 10)."""
    if n > 10:
        raise UnsupportedSize("brute-force Q_n enumeration limited to n <= 10")
    total = 0
    for x, xt in ((-1, -1), (1, 1), (-1, 1), (1, -1)):
        a = enumerate_walks(n, x)[:, 1:]
        b = enumerate_walks(n, xt)[:, 1:]
        meet = (a[:, None, :, None] == b[None, :, None, :]).any(axis=(2, 3))
        total += int((~meet).sum())
    return total / (4 * 4**n)


# ---------------------------------------------------------------------------
# simple random walk: range law tables


@dataclass(frozen=True, eq=False)
class RangeLawTable:
    """Joint law of (S_n, min_{1<=k<=n} S_k, max_{1<=k<=n} S_k).

    ``table[p, a, b]`` is the probability that position, minimum and maximum
    equal ``offset + p``, ``offset + a`` and ``offset + b``.
    """

    n: int
    start: int
    offset: int
    table: np.ndarray

    def prob(self, position: int, lo: int, hi: int) -> float:
        idx = (position - self.offset, lo - self.offset, hi - self.offset)
        if min(idx) < 0 or max(idx) >= self.table.shape[0]:
            return 0.0
        return float(self.table[idx])

    def min_marginal(self) -> dict[int, float]:
        m = self.table.sum(axis=(0, 2))
        return {self.offset + i: float(v) for i, v in enumerate(m) if v > 0}

    def max_marginal(self) -> dict[int, float]:
        m = self.table.sum(axis=(0, 1))
        return {self.offset + i: float(v) for i, v in enumerate(m) if v > 0}

    def position_marginal(self) -> dict[int, float]:
        m = self.table.sum(axis=(1, 2))
        return {self.offset + i: float(v) for i, v in enumerate(m) if v > 0}

    def entries(self):
        for p, a, b in zip(*np.nonzero(self.table)):
            yield self.offset + p, self.offset + a, self.offset + b, float(self.table[p, a, b])


def range_law(n: int, start: int = 0) -> RangeLawTable:
    """Exact DP over (position, running min, running max) for steps 1..n."""
    _check_dp_size(n, RANGE_TABLE_MAX_N)
    size = 2 * n + 1
    offset = start - n
    t = np.zeros((size, size, size))
    s = n  # index of `start`
    t[s + 1, s + 1, s + 1] = 0.5
    t[s - 1, s - 1, s - 1] = 0.5
    for _ in range(n - 1):
        new = np.zeros_like(t)
        # step up: position p -> p+1; the max moves only when p == max
        new[1:, :, :] += 0.5 * t[:-1, :, :]
        idx = np.arange(size - 1)
        # mass at (p=i, a, b=i) landed on (i+1, a, i); the max moves with it
        diag_up = np.einsum("iji->ij", t[:-1, :, :-1])
        new[idx + 1, :, idx] -= 0.5 * diag_up
        new[idx + 1, :, idx + 1] += 0.5 * diag_up
        # step down: p -> p-1; the min moves only when p == min
        new[:-1, :, :] += 0.5 * t[1:, :, :]
        diag_dn = np.einsum("iib->ib", t[1:, 1:, :])
        new[idx, idx + 1, :] -= 0.5 * diag_dn
        new[idx, idx, :] += 0.5 * diag_dn
        t = new
    return RangeLawTable(n, start, offset, t)


# ---------------------------------------------------------------------------
# extremes via the reflection principle


def _walk_sf(m: int, start: int, level: np.ndarray) -> np.ndarray:
    """``P{S_m >= level}`` for an m-step walk from ``start`` (exact binomial)."""
    # S_m = start + 2K - m, K ~ Bin(m, 1/2); S_m >= level  <=>  K >= ceil((level - start + m) / 2)
    k_min = np.ceil((level - start + m) / 2.0)
    return stats.binom.sf(k_min - 1, m, 0.5)


def max_law(n: int, start: int = 0) -> tuple[int, np.ndarray]:
    """Law of ``max_{1<=k<=n} S_k``; returns ``(first_level, pmf)``.

    Conditioning on the first step reduces to the maximum over steps 0..n-1 of
    a walk from ``start +- 1``, whose tail is ``P{S >= b} + P{S >= b + 1}``.
    """
    _check_dp_size(n)
    levels = np.arange(start - 1, start + n + 2)
    cdf_ge = np.zeros(levels.size)
    for y in (start - 1, start + 1):
        m = n - 1
        tail = _walk_sf(m, y, levels) + _walk_sf(m, y, levels + 1)
        tail = np.where(levels <= y, 1.0, tail)
        cdf_ge += 0.5 * tail
    pmf = cdf_ge - np.append(cdf_ge[1:], 0.0)
    return int(levels[0]), np.clip(pmf, 0.0, None)


def min_law(n: int, start: int = 0) -> tuple[int, np.ndarray]:
    """Law of ``min_{1<=k<=n} S_k`` as ``(first_level, pmf)`` (mirror of :func:`max_law`)."""
    first, pmf = max_law(n, -start)
    last = first + pmf.size - 1
    return -last, pmf[::-1].copy()


def strip_survival_dp(n: int, start: int, lo: int, hi: int) -> float:
    """``P{lo <= S_k <= hi for k = 1..n}`` by a killed-walk recursion (cross-check)."""
    _check_dp_size(n)
    if hi < lo:
        return 0.0
    width = hi - lo + 1
    p = np.zeros(width)
    for y in (start - 1, start + 1):
        if lo <= y <= hi:
            p[y - lo] += 0.5
    pad = np.zeros(width + 2)
    for _ in range(n - 1):
        pad[1:-1] = p
        p = 0.5 * (pad[:-2] + pad[2:])
    return float(p.sum())


def _below(first_a: int, pmf_max_a: np.ndarray, first_b: int, pmf_min_b: np.ndarray) -> float:
    """``P{max A < min B}`` for independent extremes given as pmfs."""
    levels_b = first_b + np.arange(pmf_min_b.size)
    # survival of min_B strictly above each level
    sf_b = pmf_min_b[::-1].cumsum()[::-1]  # P{min_B >= levels_b[i]}
    total = 0.0
    for i, p in enumerate(pmf_max_a):
        if p == 0.0:
            continue
        m = first_a + i
        j = m + 1 - first_b
        if j <= 0:
            total += p
        elif j < sf_b.size:
            total += p * sf_b[j]
    return float(total)


def no_intersection_pair(n: int, x: int, x_tilde: int) -> float:
    """``P_{(x, x~)}{Q_n = 0}``: the two visited integer intervals are disjoint."""
    fa, max_a = max_law(n, x)
    fb, min_a = min_law(n, x)
    ft, max_b = max_law(n, x_tilde)
    fu, min_b = min_law(n, x_tilde)
    return _below(fa, max_a, fu, min_b) + _below(ft, max_b, fb, min_a)


def no_intersection_exact(n: int) -> float:
    """Exact ``P_mu{Q_n = 0}`` averaged over the four corner starts of mu."""
    _check_dp_size(n)
    vals = [no_intersection_pair(n, x, xt) for x, xt in ((-1, -1), (1, 1), (-1, 1), (1, -1))]
    return float(np.mean(vals))


# ---------------------------------------------------------------------------
# hitting times


def hitting_pmf_exact(z: int, n: int, start: int) -> np.ndarray:
    """``pmf[m] = P{T_z = m}`` for m = 0..n, where ``T_z = min{m >= 1 : S_m = z}``.

    ``pmf[0]`` is always 0.  Absorbing-state recursion; exact up to rounding.
    """
    _check_dp_size(n)
    size = 2 * n + 3
    off = start - n - 1
    p = np.zeros(size)
    p[start - off] = 1.0
    zi = z - off
    pmf = np.zeros(n + 1)
    inside = 0 <= zi < size
    for m in range(1, n + 1):
        q = np.zeros_like(p)
        q[1:] += 0.5 * p[:-1]
        q[:-1] += 0.5 * p[1:]
        if inside:
            pmf[m] = q[zi]
            q[zi] = 0.0
        p = q
    return pmf


def hitting_pmf_mu(z: int, n: int) -> np.ndarray:
    """Hitting pmf of a single walk started from +-1 with probability 1/2 each."""
    return 0.5 * (hitting_pmf_exact(z, n, 1) + hitting_pmf_exact(z, n, -1))


def hitting_tail_mu(z: int, n_values) -> np.ndarray:
    """``P_mu{T_z >= n}`` for each n in ``n_values``."""
    n_values = np.asarray(n_values, dtype=int)
    n_max = int(n_values.max())
    pmf = hitting_pmf_mu(z, max(n_max, 1))
    below = np.concatenate([[0.0], np.cumsum(pmf)])  # below[n] = P{T_z <= n-1}
    return 1.0 - below[n_values]


# ---------------------------------------------------------------------------
# early-intersection events


def _walk_summaries(length: int, start: int) -> dict[tuple, int]:
    """Count paths by (min, max of S_1..S_{length-1}, S_length)."""
    paths = enumerate_walks(length, start)
    end = paths[:, length]
    if length == 1:
        lo = np.full(paths.shape[0], np.iinfo(np.int64).max)
        hi = np.full(paths.shape[0], np.iinfo(np.int64).min)
    else:
        inner = paths[:, 1:length]
        lo, hi = inner.min(axis=1), inner.max(axis=1)
    keys, counts = np.unique(np.stack([lo, hi, end], axis=1), axis=0, return_counts=True)
    return {tuple(int(v) for v in k): int(c) for k, c in zip(keys, counts)}


def f_event_count(rho: int, l: int) -> int:
    """Number of (start pair, sign sequence) configurations realising F_{rho,l}.

    Every sign sequence of both walks is enumerated; paths are then grouped by
    the interval they visit before their last step, which is all the event
    depends on because unit-step walks visit every integer of their range.
    """
    count = 0
    for x, xt in ((-1, -1), (1, 1), (-1, 1), (1, -1)):
        sa = _walk_summaries(rho, x)
        sb = _walk_summaries(l, xt)
        for (alo, ahi, aend), ca in sa.items():
            for (blo, bhi, bend), cb in sb.items():
                if aend != bend:
                    continue
                if blo <= aend <= bhi:  # S_rho meets an earlier S~_k
                    continue
                if alo <= bend <= ahi:  # S~_l meets an earlier S_j
                    continue
                if alo <= bhi and blo <= ahi:  # earlier parts overlap
                    continue
                count += ca * cb
    return count


def f_event_probability_bruteforce(rho: int, l: int) -> float:
    """Exact ``P_mu(F_{rho,l})`` by exhaustive enumeration (``rho + l <= 22``)."""
    if not (1 <= rho <= l):
        raise InvalidArgument("need 1 <= rho <= l")
    if rho + l > ENUMERATION_MAX:
        raise UnsupportedSize(f"rho + l = {rho + l} exceeds the enumeration cap {ENUMERATION_MAX}")
    return f_event_count(rho, l) / (4 * 2 ** (rho + l))


def f_event_probability_naive(rho: int, l: int) -> float:
    """Literal rectangle check over every configuration; for small sizes only."""
    if rho + l > 14:
        raise UnsupportedSize("naive F enumeration limited to rho + l <= 14")
    hits = 0
    for x, xt in ((-1, -1), (1, 1), (-1, 1), (1, -1)):
        a = enumerate_walks(rho, x)[:, 1:]
        b = enumerate_walks(l, xt)[:, 1:]
        eq = a[:, None, :, None] == b[None, :, None, :]
        corner = eq[:, :, rho - 1, l - 1]
        others = eq.reshape(eq.shape[0], eq.shape[1], -1).sum(axis=2) - corner
        hits += int((corner & (others == 0)).sum())
    return hits / (4 * 2 ** (rho + l))


def f_event_bound(rho: int, l: int, pmfs: dict[int, np.ndarray] | None = None) -> float:
    """``sum_{z in [-2, 2]} P_mu{T_z = rho} P_mu{T_z = l}``."""
    if pmfs is None:
        pmfs = {z: hitting_pmf_mu(z, l) for z in range(-2, 3)}
    return float(sum(p[rho] * p[l] for p in pmfs.values()))


def q_n_law_enumerated(n: int) -> dict[int, float]:
    """Full law of Q_n under mu for n <= 6 by enumeration."""
    if n > 6:
        raise UnsupportedSize("full Q_n law enumerated only for n <= 6")
    counts: dict[int, int] = {}
    for x, xt in ((-1, -1), (1, 1), (-1, 1), (1, -1)):
        a = enumerate_walks(n, x)[:, 1:]
        b = enumerate_walks(n, xt)[:, 1:]
        q = (a[:, None, :, None] == b[None, :, None, :]).sum(axis=(2, 3))
        for v, c in zip(*np.unique(q, return_counts=True)):
            counts[int(v)] = counts.get(int(v), 0) + int(c)
    total = 4 * 4**n
    return {k: v / total for k, v in sorted(counts.items())}


def first_step_cases() -> list[tuple[int, int, int, int]]:
    """All (x, x~, step, step~) one-step configurations under mu."""
    return list(itertools.product((-1, 1), (-1, 1), (-1, 1), (-1, 1)))
