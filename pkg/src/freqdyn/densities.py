"""Weighted lower and upper densities of integer sets.

A weight sequence ``alpha`` (non-decreasing, positive, divergent sum) turns the
counting ratio ``card(E & [1, n]) / n`` into the weighted ratio
``sum_{k <= n, k in E} alpha_k / sum_{k <= n} alpha_k``.  The lower density is
the liminf of that ratio, the upper density the limsup.  Every quantity here is
a finite-window proxy: the liminf becomes a minimum over an explicit window
``[n0, H]``, and callers state the window they used.

All weights live in the log domain.  Sequences such as ``exp(k ** 0.5)`` or
``exp(k / log k)`` overflow double precision long before ``k = 10**3``, so the
partial sums are accumulated with ``numpy.logaddexp``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, DomainError, HorizonError, ValidationError

LOG_ZERO = float("-inf")

# Windows longer than this are evaluated by exact counting when the set
# exposes its arithmetic-run structure and the weight is constant.
ARRAY_LIMIT = 1 << 23


# ---------------------------------------------------------------------------
# iterated logarithms
# ---------------------------------------------------------------------------

def iterated_log(x, s):
    """Apply the natural logarithm ``s`` times (``s = 0`` is the identity).

    ``s = math.inf`` is the convention ``log_(inf)(x) = 1``.  Works on scalars
    and numpy arrays.
    """
    if s == math.inf:
        return np.ones_like(x, dtype=float) if isinstance(x, np.ndarray) else 1.0
    out = x
    for _ in range(int(s)):
        out = np.log(out) if isinstance(out, np.ndarray) else math.log(out)
    return out


def iterated_exp(x, s):
    """Apply ``exp`` ``s`` times to ``x``."""
    out = float(x)
    for _ in range(int(s)):
        out = math.exp(out)
    return out


# ---------------------------------------------------------------------------
# weight sequences
# ---------------------------------------------------------------------------

_KINDS = ("const", "pow", "expE", "expD", "logL", "custom")


@dataclass(frozen=True)
class DensitySeq:
    """A completely admissible weight sequence ``alpha_k``, stored as ``ln alpha_k``.

    Use the constructors :meth:`constant`, :meth:`power`, :meth:`exp_e`,
    :meth:`exp_d`, :meth:`log_l` and :meth:`custom` rather than building the
    dataclass by hand; they fix ``k_min`` so that ``ln alpha_k`` is finite and
    non-decreasing from ``k_min`` on.
    """

    kind: str
    param: Optional[float]
    k_min: int
    fn: Optional[Callable] = field(default=None, compare=False, repr=False)

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c=1.0):
        if not c > 0:
            raise DomainError("constant weight must be positive")
        return cls("const", float(c), 1)

    @classmethod
    def power(cls, r):
        """``alpha_k = k ** r``; ``r >= 0`` keeps the sequence non-decreasing."""
        if not r >= 0:
            raise DomainError("power weight needs r >= 0 to be non-decreasing")
        return cls("pow", float(r), 1)

    @classmethod
    def exp_e(cls, eps):
        """``alpha_k = exp(k ** eps)`` with ``0 < eps < 1``."""
        if not 0 < eps < 1:
            raise DomainError("expE needs 0 < eps < 1")
        return cls("expE", float(eps), 1)

    @classmethod
    def exp_d(cls, s):
        """``alpha_k = exp(k / log_(s) k)``; ``s = inf`` gives ``exp(k)``."""
        if s != math.inf and (s < 0 or int(s) != s):
            raise DomainError("expD needs a non-negative integer s or inf")
        if s == math.inf:
            return cls("expD", math.inf, 1)
        # log_(s)(k) > 1 requires k > exp_(s)(1)
        k_min = math.ceil(iterated_exp(1.0, s)) + 1
        return cls("expD", float(s), k_min)

    @classmethod
    def log_l(cls, l):
        """``alpha_k = exp(log k * log_(l) k)`` for an integer ``l >= 1``."""
        if l < 1 or int(l) != l:
            raise DomainError("logL needs an integer l >= 1")
        # log_(l)(k) > 0 requires k > exp_(l-1)(1)
        k_min = math.ceil(iterated_exp(1.0, l - 1)) + 1
        return cls("logL", float(l), k_min)

    @classmethod
    def custom(cls, log_fn, k_min=1):
        """Wrap an arbitrary ``k -> ln alpha_k`` (vectorized if possible)."""
        return cls("custom", None, int(k_min), log_fn)

    @classmethod
    def parse(cls, spec):
        """Parse ``const:1``, ``pow:2``, ``expE:0.5``, ``expD:1`` or ``logL:2``."""
        name, _, arg = spec.strip().partition(":")
        try:
            if name == "const":
                return cls.constant(float(arg) if arg else 1.0)
            if name == "pow":
                return cls.power(float(arg))
            if name == "expE":
                return cls.exp_e(float(arg))
            if name == "expD":
                s = math.inf if arg.lower() in ("inf", "infinity") else int(arg)
                return cls.exp_d(s)
            if name == "logL":
                return cls.log_l(int(arg))
        except (ValueError, DomainError) as exc:
            raise ConfigError(f"bad density spec {spec!r}: {exc}") from exc
        raise ConfigError(f"unknown density kind in {spec!r}")

    def spec(self):
        """Inverse of :meth:`parse` for built-in kinds."""
        if self.kind == "custom":
            return "custom"
        p = self.param
        if self.kind == "expD" and p == math.inf:
            return "expD:inf"
        if p == int(p):
            p = int(p)
        return f"{self.kind}:{p}"

    # -- values -------------------------------------------------------------
    def log_values(self, ks):
        """``ln alpha_k`` for an integer array ``ks`` (all ``>= k_min``)."""
        k = np.asarray(ks, dtype=float)
        if self.kind == "const":
            return np.full(k.shape, math.log(self.param))
        if self.kind == "pow":
            return self.param * np.log(k)
        if self.kind == "expE":
            return k ** self.param
        if self.kind == "expD":
            if self.param == math.inf:
                return k.copy()
            return k / iterated_log(k, self.param)
        if self.kind == "logL":
            return np.log(k) * iterated_log(k, self.param)
        out = self.fn(np.asarray(ks))
        if np.isscalar(out) or np.shape(out) != k.shape:
            out = np.array([self.fn(int(v)) for v in np.asarray(ks).ravel()],
                           dtype=float).reshape(k.shape)
        return np.asarray(out, dtype=float)

    def log_alpha(self, k):
        """``ln alpha_k`` for a single index."""
        if k < self.k_min:
            raise DomainError(f"index {k} below k_min={self.k_min}")
        return float(self.log_values(np.array([k]))[0])

    def normalized_log_values(self, lo, hi):
        """``ln alpha_k - ln alpha_{k_min}`` for ``k`` in ``[lo, hi]``.

        Subtracting the first value makes every constant sequence identically
        zero, so densities under ``const:a`` do not depend on ``a`` at all.
        """
        ks = np.arange(lo, hi + 1, dtype=np.int64)
        return self.log_values(ks) - self.log_alpha(self.k_min)


def phi(alpha, n):
    """``ln sum_{k_min <= k <= n} alpha_k``.

    Terms are shifted by their maximum before exponentiation and summed with
    ``math.fsum``, so the result is correctly rounded up to the final ``log``.
    """
    if n < alpha.k_min:
        raise DomainError(f"phi needs n >= k_min={alpha.k_min}, got {n}")
    la = alpha.log_values(np.arange(alpha.k_min, n + 1, dtype=np.int64))
    top = float(la.max())
    return top + math.log(math.fsum(np.exp(la - top).tolist()))


# ---------------------------------------------------------------------------
# index sets
# ---------------------------------------------------------------------------

class IndexSet:
    """A strictly increasing set of non-negative integers, known up to ``horizon``.

    Three backings are supported:

    * materialized: a sorted array of elements;
    * runs: a sorted list of disjoint arithmetic progressions
      ``(start, step, count)``, which keeps huge sparse sets cheap and allows
      exact counting;
    * predicate: a membership test, optionally with a vectorized mask builder.
    """

    def __init__(self, horizon, elements=None, runs=None, contains=None,
                 mask_fn=None):
        self.horizon = int(horizon)
        self._elements = elements
        self._runs = runs
        self._contains = contains
        self._mask_fn = mask_fn

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_elements(cls, values, horizon=None):
        arr = np.unique(np.asarray(list(values) if not isinstance(values, np.ndarray)
                                   else values, dtype=np.int64))
        if arr.size and arr[0] < 0:
            raise ValidationError("index sets hold non-negative integers")
        if horizon is None:
            horizon = int(arr[-1]) if arr.size else 0
        arr = arr[arr <= horizon]
        return cls(horizon, elements=arr)

    @classmethod
    def from_runs(cls, runs, horizon):
        """Build from disjoint, increasing runs ``(start, step, count)``."""
        clean = []
        last = -1
        for start, step, count in runs:
            start, step, count = int(start), int(step), int(count)
            if count <= 0:
                continue
            if step <= 0 or start <= last:
                raise ValidationError("runs must be increasing and disjoint")
            if start > horizon:
                break
            count = min(count, (int(horizon) - start) // step + 1)
            clean.append((start, step, count))
            last = start + step * (count - 1)
        return cls(horizon, runs=clean)

    @classmethod
    def from_predicate(cls, contains, horizon, mask_fn=None):
        return cls(horizon, contains=contains, mask_fn=mask_fn)

    @classmethod
    def arithmetic(cls, step, offset=0, horizon=10**6):
        """``{offset + step * j : j >= 0}`` up to ``horizon``."""
        count = (horizon - offset) // step + 1 if horizon >= offset else 0
        return cls.from_runs([(offset, step, count)], horizon)

    @classmethod
    def naturals(cls, horizon):
        return cls.arithmetic(1, 0, horizon)

    @classmethod
    def empty(cls, horizon):
        return cls(horizon, elements=np.zeros(0, dtype=np.int64))

    @classmethod
    def from_text(cls, text, horizon=None):
        """Parse newline-delimited decimal integers."""
        values = [int(line) for line in text.split() if line.strip()]
        return cls.from_elements(values, horizon)

    # -- queries ------------------------------------------------------------
    @property
    def has_runs(self):
        return self._runs is not None

    def runs(self):
        if self._runs is None:
            raise ValidationError("this index set has no run structure")
        return list(self._runs)

    def __contains__(self, k):
        k = int(k)
        if k < 0 or k > self.horizon:
            return False
        if self._elements is not None:
            i = np.searchsorted(self._elements, k)
            return bool(i < self._elements.size and self._elements[i] == k)
        if self._runs is not None:
            for start, step, count in self._runs:
                if k < start:
                    return False
                if k <= start + step * (count - 1):
                    return (k - start) % step == 0
            return False
        return bool(self._contains(k))

    def mask(self, lo, hi):
        """Boolean membership array for the indices ``lo..hi`` inclusive."""
        if hi > self.horizon:
            raise HorizonError(f"window end {hi} beyond set horizon {self.horizon}")
        lo, hi = int(lo), int(hi)
        out = np.zeros(max(hi - lo + 1, 0), dtype=bool)
        if out.size == 0:
            return out
        if self._elements is not None:
            e = self._elements
            sel = e[(e >= lo) & (e <= hi)]
            out[sel - lo] = True
        elif self._runs is not None:
            for start, step, count in self._runs:
                end = start + step * (count - 1)
                if end < lo:
                    continue
                if start > hi:
                    break
                first = start if start >= lo else start + ((lo - start + step - 1) // step) * step
                last = min(end, hi)
                if first <= last:
                    out[first - lo:last - lo + 1:step] = True
        elif self._mask_fn is not None:
            out[:] = np.asarray(self._mask_fn(lo, hi), dtype=bool)
        else:
            out[:] = np.fromiter((bool(self._contains(k)) for k in range(lo, hi + 1)),
                                 dtype=bool, count=out.size)
        return out

    def elements(self):
        """All elements up to the horizon as an int64 array."""
        if self._elements is not None:
            return self._elements
        if self._runs is not None:
            parts = [np.arange(s, s + st * c, st, dtype=np.int64)
                     for s, st, c in self._runs]
            return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
        return np.flatnonzero(self.mask(0, self.horizon)).astype(np.int64)

    def __iter__(self) -> Iterator[int]:
        if self._runs is not None:
            for start, step, count in self._runs:
                yield from range(start, start + step * count, step)
            return
        for v in self.elements():
            yield int(v)

    def count_upto(self, n):
        """Exact number of elements in ``[0, n]``."""
        n = min(int(n), self.horizon)
        if n < 0:
            return 0
        if self._elements is not None:
            return int(np.searchsorted(self._elements, n, side="right"))
        if self._runs is not None:
            total = 0
            for start, step, count in self._runs:
                if start > n:
                    break
                total += min(count, (n - start) // step + 1)
            return total
        return int(self.mask(0, n).sum())

    def __len__(self):
        return self.count_upto(self.horizon)

    def first(self):
        for v in self:
            return v
        return None

    def complement(self):
        """``[0, horizon]`` minus this set, as a predicate-backed set."""
        return IndexSet.from_predicate(lambda k: k not in self, self.horizon,
                                       mask_fn=lambda lo, hi: ~self.mask(lo, hi))

    def to_text(self):
        return "".join(f"{v}\n" for v in self)


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

def _check_window(alpha, E, window):
    n0, H = int(window[0]), int(window[1])
    if n0 >= H:
        raise DomainError(f"empty window [{n0}, {H}]")
    if n0 < alpha.k_min:
        raise DomainError(f"window start {n0} below k_min={alpha.k_min}")
    if H > E.horizon:
        raise DomainError(f"window end {H} beyond set horizon {E.horizon}")
    return n0, H


def _log_partial_sums(alpha, E, H):
    """Log partial sums over ``[k_min, n]`` of alpha inside and outside ``E``."""
    la = alpha.normalized_log_values(alpha.k_min, H)
    m = E.mask(alpha.k_min, H)
    lin = np.logaddexp.accumulate(np.where(m, la, LOG_ZERO))
    lout = np.logaddexp.accumulate(np.where(m, LOG_ZERO, la))
    return lin, lout


def _ratios_from_logs(lin, lout):
    """Weighted ratio ``S_in / (S_in + S_out)``, complement-symmetric.

    The smaller of the two shares is computed directly from ``|lin - lout|``
    (so tiny ratios keep full relative precision) and the larger one as
    ``1 - smaller``.  A set and its complement therefore get the two halves of
    the same split, and their ratios add up to exactly ``1.0``.
    """
    gap = np.abs(lin - lout)
    small = np.exp(-np.logaddexp(0.0, gap))
    return np.where(lin < lout, small, 1.0 - small)


def partial_ratios(alpha, E, window):
    """Return ``(ns, ratios)`` for every ``n`` in the window."""
    n0, H = _check_window(alpha, E, window)
    lin, lout = _log_partial_sums(alpha, E, H)
    r = _ratios_from_logs(lin, lout)
    off = n0 - alpha.k_min
    return np.arange(n0, H + 1, dtype=np.int64), r[off:]


def _exact_constant_extreme(alpha, E, n0, H, mode):
    """Exact window extremum of ``count / length`` for run-structured sets.

    Between two consecutive elements the ratio decreases; at an element it
    jumps up.  Along one arithmetic run the values just before (or at) each
    element form a Moebius sequence in the element index, hence are monotone,
    so only the first and last element of each run can be extremal.
    """
    k0 = alpha.k_min
    cands = {n0, H}
    for start, step, count in E.runs():
        end = start + step * (count - 1)
        if end < n0 or start > H:
            if start > H:
                break
            continue
        first = start if start >= n0 else start + ((n0 - start + step - 1) // step) * step
        last = end if end <= H else start + ((H - start) // step) * step
        for e in (first, last):
            if n0 <= e <= H:
                cands.add(e if mode == "max" else e - 1)
    best = None
    below = E.count_upto(k0 - 1)
    for n in cands:
        if n < n0 or n > H:
            continue
        val = Fraction(E.count_upto(n) - below, n - k0 + 1)
        if best is None or (val < best if mode == "min" else val > best):
            best = val
    return float(best)


def _extreme(alpha, E, window, mode):
    n0, H = _check_window(alpha, E, window)
    if alpha.kind == "const" and E.has_runs and H - alpha.k_min > ARRAY_LIMIT:
        return _exact_constant_extreme(alpha, E, n0, H, mode)
    _, r = partial_ratios(alpha, E, (n0, H))
    return float(r.min() if mode == "min" else r.max())


def emp_lower_density(alpha, E, window):
    """Minimum over ``n`` in ``window`` of the weighted counting ratio."""
    return _extreme(alpha, E, window, "min")


def emp_upper_density(alpha, E, window):
    """Maximum over ``n`` in ``window`` of the weighted counting ratio.

    ``emp_upper_density(a, E, w) + emp_lower_density(a, E.complement(), w)``
    evaluates to exactly ``1.0`` in floating point.
    """
    return _extreme(alpha, E, window, "max")


def enumeration_ratios(alpha, elements, upto):
    """Ratios ``sum_{j<=k} alpha_{n_j} / sum_{j<=n_k} alpha_j`` at each ``n_k <= upto``.

    This is the closed form of the density matrix evaluated at the elements
    themselves; it serves as an independent oracle for :func:`partial_ratios`.
    """
    el = np.asarray(elements, dtype=np.int64)
    el = el[(el >= alpha.k_min) & (el <= upto)]
    la = alpha.normalized_log_values(alpha.k_min, upto)
    total = np.logaddexp.accumulate(la)
    num = np.logaddexp.accumulate(la[el - alpha.k_min])
    return el, np.exp(num - total[el - alpha.k_min])


# ---------------------------------------------------------------------------
# comparison of weight sequences
# ---------------------------------------------------------------------------

def precedes(alpha, beta, horizon):
    """Decide ``alpha <~ beta``: ``alpha_k / beta_k`` eventually non-increasing.

    Returns ``True`` when the log-ratio is non-increasing on ``[k0, horizon]``
    for some ``k0 <= horizon / 2``, ``False`` when an increase occurs in the
    second half of the range, and ``None`` (inconclusive) when the common
    domain is too short or the values are not finite.
    """
    start = max(alpha.k_min, beta.k_min)
    if horizon < 2 * start + 2:
        return None
    ks = np.arange(start, horizon + 1, dtype=np.int64)
    diff = alpha.log_values(ks) - beta.log_values(ks)
    if not np.all(np.isfinite(diff)):
        return None
    step = np.diff(diff)
    tol = 1e-12 * np.maximum(1.0, np.abs(diff[1:]))
    bad = np.flatnonzero(step > tol)
    if bad.size == 0:
        return True
    last_k = int(ks[bad[-1] + 1])
    return last_k <= horizon // 2


@dataclass(frozen=True)
class Delta2Verdict:
    holds: bool
    K: Optional[float]
    grid: Tuple[int, ...]
    ratios: Tuple[float, ...]
    reason: str


DELTA2_CEILING = 1e6


def delta2_verdict(alpha, horizon):
    """Classify ``phi(2x) <= K phi(x)`` from ``R(x) = phi(2x) / phi(x)``.

    ``R`` is sampled on ``x = k_min * 2**j <= horizon / 2``.  The verdict fails
    when ``R`` exceeds ``1e6`` or keeps growing without slowing down across the
    last decade of the grid.  It holds when ``R`` is flat or decreasing there,
    or when its increments contract geometrically; in the latter case ``K`` is
    the geometric extrapolation of the increments, otherwise the grid maximum.
    """
    if horizon < 2 * alpha.k_min:
        raise DomainError("delta2_verdict needs horizon >= 2 * k_min")
    xs = []
    x = alpha.k_min
    while 2 * x <= horizon:
        xs.append(x)
        x *= 2
    cache = {}

    def ph(v):
        if v not in cache:
            cache[v] = phi(alpha, v)
        return cache[v]

    logR = np.array([ph(2 * v) - ph(v) for v in xs])
    R = np.exp(np.minimum(logR, 700.0))
    grid, ratios = tuple(xs), tuple(float(v) for v in R)
    if logR.max() > math.log(DELTA2_CEILING):
        return Delta2Verdict(False, None, grid, ratios, "R exceeds 1e6")
    tail = R[np.asarray(xs) * 10 >= xs[-1]]
    if tail.size < 3:
        tail = R[-3:]
    inc = np.diff(tail)
    tol = 1e-9 * tail.max()
    if np.all(inc <= tol):
        return Delta2Verdict(True, float(R.max()), grid, ratios,
                             "R non-increasing over the last decade")
    if np.all(inc > tol):
        rho = inc[1:] / inc[:-1]
        if rho.size and np.all(rho <= 0.75):
            r = float(rho.max())
            K = max(float(R.max()), float(tail[-1] + inc[-1] * r / (1.0 - r)))
            return Delta2Verdict(True, K, grid, ratios,
                                 "R increasing with geometrically contracting steps")
        return Delta2Verdict(False, None, grid, ratios,
                             "R grows monotonically over the last decade")
    return Delta2Verdict(True, float(R.max()), grid, ratios,
                         "R bounded and oscillating over the last decade")


# ---------------------------------------------------------------------------
# the n_k(f) sequence
# ---------------------------------------------------------------------------

_SATURATED = math.inf


def tower_threshold(m):
    """``a_1 = 1`` and ``a_m = 2^2^...^2^(2^m)`` with ``m`` twos, saturating past 2**64."""
    if m < 1:
        raise DomainError("tower index starts at 1")
    if m == 1:
        return 1
    value = 2 ** m
    for _ in range(m - 1):
        if value >= 64:
            return _SATURATED
        value = 2 ** value
    return value


def f_level(j):
    """``f(j) = m`` for ``a_m <= j < a_{m+1}``."""
    if j < 1:
        raise DomainError("f is defined on positive integers")
    m = 1
    while tower_threshold(m + 1) <= j:
        m += 1
    return m


def first_zero_digit(j):
    """1-based position of the first zero binary digit of ``j`` (11 -> 3)."""
    if j < 0:
        raise DomainError("binary digits of a negative integer")
    trailing_ones = (j ^ (j + 1)).bit_length() - 1
    return trailing_ones + 1


def _count_delta_at_least(t, k):
    """``#{1 <= i < k : delta_i >= t}`` in closed form."""
    if t <= 1:
        return max(k - 1, 0)
    if t > 64:
        return 0
    return k >> (t - 1)


def _sum_f_delta(k):
    """``sum_{i < k} f(delta_i)`` via ``f(d) = #{m : a_m <= d}``."""
    total = 0
    m = 1
    while True:
        a = tower_threshold(m)
        if a is _SATURATED or a > 64:
            break
        total += _count_delta_at_least(a, k)
        m += 1
    return total


def nk_f(k):
    """``n_1 = 2`` and ``n_k = 2 sum_{i<k} f(delta_i) + f(delta_k)`` for ``k >= 2``."""
    k = int(k)
    if k < 1:
        raise DomainError("n_k(f) is defined for k >= 1")
    if k >= 1 << 62:
        raise DomainError("k must stay below 2**62")
    if k == 1:
        return 2
    return 2 * _sum_f_delta(k) + f_level(first_zero_digit(k))


def nk_f_sequence(kmax):
    """``n_1 .. n_kmax`` as an int64 array, built by cumulative sums."""
    if kmax < 1:
        raise DomainError("kmax must be positive")
    j = np.arange(1, kmax + 1, dtype=np.int64)
    trailing = np.zeros_like(j)
    v = j.copy()
    while True:
        odd = (v & 1) == 1
        if not odd.any():
            break
        trailing += odd
        v = np.where(odd, v >> 1, 0)
    delta = trailing + 1
    fvals = np.ones_like(j)
    m = 2
    while True:
        a = tower_threshold(m)
        if a is _SATURATED or a > 64:
            break
        fvals += (delta >= a)
        m += 1
    before = np.concatenate(([0], np.cumsum(fvals)[:-1]))
    out = 2 * before + fvals
    out[0] = 2
    return out


# ---------------------------------------------------------------------------
# shifted unions
# ---------------------------------------------------------------------------

def _eval_predicate(pred, ks):
    try:
        out = np.asarray(pred(ks), dtype=bool)
        if out.shape == ks.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.fromiter((bool(pred(int(k))) for k in ks), dtype=bool, count=ks.size)


def shift_union(A, shifts, partition):
    """``B = union_j (n_j + (A & I_j))`` with the horizon of ``A``.

    ``partition`` is a list of membership predicates ``I_j``; each may accept
    an integer array (vectorized) or a single integer.  The predicates must
    cover ``[0, horizon(A)]``.
    """
    if len(shifts) != len(partition) or not shifts:
        raise ValidationError("need one shift per partition member")
    if any(int(n) < 0 for n in shifts):
        raise ValidationError("shifts must be non-negative")
    ks = np.arange(0, A.horizon + 1, dtype=np.int64)
    masks = [_eval_predicate(p, ks) for p in partition]
    covered = np.logical_or.reduce(masks)
    if not covered.all():
        gap = int(ks[~covered][0])
        raise ValidationError(f"partition does not cover index {gap}")
    a = A.mask(0, A.horizon)
    out = np.zeros_like(a)
    for n, m in zip(shifts, masks):
        src = np.flatnonzero(a & m) + int(n)
        out[src[src <= A.horizon]] = True
    return IndexSet(A.horizon, elements=np.flatnonzero(out).astype(np.int64))
