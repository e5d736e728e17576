"""Finitely supported vectors, weighted shifts and operators of C-type on l^p.

C-type operators act blockwise on the basis: inside a block ``[b_n, b_{n+1})``
they move ``e_k`` one step right with weight ``w_{k+1}``; the last vector of
a block wraps to the start of the same block (with the inverse block product)
and, for ``n >= 1``, also leaks ``v_n`` into the start of block ``phi(n)``.

Coefficients of the C+,1 subclass are signed powers of two, so this module
carries every coefficient as ``sign * 2**exponent`` internally and only turns
it into a double at the end.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from .errors import DomainError, EstimateOverflowError, HorizonError, ValidationError

PRUNE = 1e-300


# ---------------------------------------------------------------------------
# sparse vectors
# ---------------------------------------------------------------------------

class SparseVec:
    """Finitely supported real vector in ``l^p`` (zeros below 1e-300 are dropped)."""

    __slots__ = ("_d", "p")

    def __init__(self, entries=None, p=2.0):
        if p < 1:
            raise DomainError("l^p needs p >= 1")
        self.p = float(p)
        self._d: Dict[int, float] = {}
        for k, c in (entries.items() if isinstance(entries, dict) else (entries or ())):
            if k < 0:
                raise DomainError("indices are non-negative")
            self._add(int(k), float(c))
        self._prune()

    @classmethod
    def basis(cls, k, p=2.0):
        return cls({k: 1.0}, p)

    @classmethod
    def zero(cls, p=2.0):
        return cls(None, p)

    def _add(self, k, c):
        self._d[k] = self._d.get(k, 0.0) + c

    def _prune(self):
        for k in [k for k, c in self._d.items() if abs(c) < PRUNE]:
            del self._d[k]

    def __getitem__(self, k):
        return self._d.get(k, 0.0)

    def items(self):
        return sorted(self._d.items())

    def support(self):
        return sorted(self._d)

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def norm(self, p=None):
        p = self.p if p is None else p
        if not self._d:
            return 0.0
        top = max(abs(c) for c in self._d.values())
        if math.isinf(p):
            return top
        return top * math.fsum((abs(c) / top) ** p for c in self._d.values()) ** (1.0 / p)

    def __add__(self, other):
        out = SparseVec(self._d, self.p)
        for k, c in other._d.items():
            out._add(k, c)
        out._prune()
        return out

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, a):
        return SparseVec({k: a * c for k, c in self._d.items()}, self.p)

    __rmul__ = scale

    def max_abs_diff(self, other):
        keys = set(self._d) | set(other._d)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def close_to(self, other, tol):
        return self.max_abs_diff(other) <= tol

    def to_csv(self, fmt=lambda v: f"{v:.12g}"):
        lines = ["index,coefficient"] + [f"{k},{fmt(c)}" for k, c in self.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text, p=2.0):
        entries = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("index"):
                continue
            k, c = line.split(",")
            entries[int(k)] = entries.get(int(k), 0.0) + float(c)
        return cls(entries, p)

    def __repr__(self):
        body = ", ".join(f"{k}: {c:.6g}" for k, c in self.items()[:8])
        more = ", ..." if len(self._d) > 8 else ""
        return f"SparseVec({{{body}{more}}}, p={self.p:g})"


# ---------------------------------------------------------------------------
# weighted shifts
# ---------------------------------------------------------------------------

def apply_backward(w, x):
    """``B_w x``: the entry at ``k`` becomes ``w_{k+1} x_{k+1}``; ``x_0`` is lost."""
    out = {}
    for k, c in x.items():
        if k >= 1:
            out[k - 1] = c * w.value(k)
    return SparseVec(out, x.p)


def apply_forward(w, x):
    """``F_w x``: the entry at ``k + 1`` becomes ``x_k / w_{k+1}``."""
    return SparseVec({k + 1: c / w.value(k + 1) for k, c in x.items()}, x.p)


def shift_word_log(w, m, l, k, w_den=None):
    """``(log coefficient, index)`` of ``B_w^m F_{w_den}^l e_k``; index None if killed.

    With one weight the common factors cancel before any summation, so large
    ``m`` and ``l`` do not lose precision.
    """
    if min(m, l, k) < 0:
        raise DomainError("m, l, k must be non-negative")
    top = k + l
    if m > top:
        return (-math.inf, None)
    idx = top - m
    if w_den is None or w_den is w:
        if m <= l:
            lc = -w.log_product(k + 1, k + l - m) if l > m else 0.0
        else:
            lc = w.log_product(k + l - m + 1, k) if m > l else 0.0
        return (lc, idx)
    num = w.log_product(idx + 1, top) if m > 0 else 0.0
    den = w_den.log_product(k + 1, top) if l > 0 else 0.0
    return (num - den, idx)


def shift_word(w, m, l, k, w_den=None):
    """Closed form of ``B_w^m F^l e_k`` as ``(coefficient, index)``.

    The coefficient is ``w_{k+l-m+1}...w_{k+l} / (w_{k+1}...w_{k+l})`` at index
    ``k + l - m``; ``(0.0, None)`` when ``m > k + l`` (the word kills ``e_k``).
    """
    lc, idx = shift_word_log(w, m, l, k, w_den)
    if idx is None:
        return (0.0, None)
    return (math.exp(lc), idx)


def apply_multiple_power(lam, w, m, x):
    """``(lam B_w)^m x`` through closed-form words (no step-by-step iteration)."""
    out = {}
    for k, c in x.items():
        lc, idx = shift_word_log(w, m, 0, k)
        if idx is not None:
            out[idx] = out.get(idx, 0.0) + c * math.exp(lc + m * math.log(lam))
    return SparseVec(out, x.p)


# ---------------------------------------------------------------------------
# C-type operators
# ---------------------------------------------------------------------------

def _pow2(e):
    try:
        return math.ldexp(1.0, e) if isinstance(e, int) else 2.0 ** e
    except OverflowError as exc:
        raise EstimateOverflowError(f"2**{e} overflows a double") from exc


def _log2_abs(x):
    return math.log2(abs(x)) if x != 0 else -math.inf


def _sign(x):
    return -1 if x < 0 else 1


@dataclass(frozen=True)
class CTypeParams:
    """Data ``(v, w, phi, b)`` of a C-type operator, materialized up to ``b[-1]``.

    ``b`` holds ``b_0 = 0 < b_1 < ... < b_B``; blocks ``0 .. B - 1`` exist.
    ``v(n)`` (n >= 1) and ``w(j)`` (j >= 1) return reals.  When ``v_log2`` /
    ``w_log2`` are given (C+,1 data) they return exact integer exponents of
    ``|v_n|`` and ``|w_j|`` and the sign is taken as ``+``.  The per-level
    tables use index ``k - 1`` for level ``k``.
    """

    b: Tuple[int, ...]
    phi: Callable[[int], int]
    v: Callable[[int], float]
    w: Callable[[int], float]
    flavor: str = "general"          # "general", "cplus" or "cplus1"
    Delta: Tuple[int, ...] = ()
    tau: Tuple[int, ...] = ()
    sdelta: Tuple[int, ...] = ()
    v_log2: Optional[Callable[[int], int]] = None
    w_log2: Optional[Callable[[int], int]] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, init=False)

    # -- layout ---------------------------------------------------------------
    @property
    def n_blocks(self):
        return len(self.b) - 1

    @property
    def k_max(self):
        return len(self.Delta)

    @property
    def end(self):
        return self.b[-1]

    def block_of(self, k):
        if not 0 <= k < self.end:
            raise HorizonError(f"index {k} outside the materialized blocks [0, {self.end})")
        return bisect.bisect_right(self.b, k) - 1

    def block_length(self, n):
        return self.b[n + 1] - self.b[n]

    # -- scalar data as (sign, log2 |.|) ---------------------------------------
    def v_sl(self, n):
        if self.v_log2 is not None:
            return 1, self.v_log2(n)
        val = self.v(n)
        return _sign(val), _log2_abs(val)

    def w_sl(self, j):
        if self.w_log2 is not None:
            return 1, self.w_log2(j)
        val = self.w(j)
        return _sign(val), _log2_abs(val)

    def wprod_sl(self, lo, hi):
        """Sign and log2 of ``prod_{j=lo}^{hi} w_j`` (empty product: ``(1, 0)``)."""
        key = ("wp", lo, hi)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.flavor == "cplus1" and lo <= hi:
            n = bisect.bisect_right(self.b, lo) - 1
            if n >= 1 and hi < self.b[n + 1]:
                d = self.sdelta[n.bit_length() - 1]
                i0, i1 = max(lo - self.b[n], 1), min(hi - self.b[n], d)
                return 1, max(0, i1 - i0 + 1)
        sign, total = 1, 0
        for j in range(lo, hi + 1):
            s, e = self.w_sl(j)
            sign *= s
            total += e
        self._cache[key] = (sign, total)
        return sign, total

    def level_of(self, n):
        """Level ``k`` with ``2^(k-1) <= n < 2^k`` (block 0 has no level)."""
        if n < 1:
            raise DomainError("block 0 has no level")
        return n.bit_length()

    def level_w_sl(self, k, i):
        """``w_i^(k)``: weight at offset ``i`` inside any block of level ``k``."""
        return self.w_sl(self.b[1 << (k - 1)] + i)


def _c1_weight_log2(b, sdelta):
    def wl(j):
        n = bisect.bisect_right(b, j) - 1
        if n <= 0 or j == b[n]:
            return 0
        k = n.bit_length()
        return 1 if j - b[n] <= sdelta[k - 1] else 0
    return wl


def cplus_blocks(Delta, b1=2):
    """``b`` for C+ data: block 0 of length ``b1``, level ``k`` blocks of length ``Delta[k-1]``."""
    b = [0, b1]
    for k, D in enumerate(Delta, start=1):
        for _ in range(1 << (k - 1)):
            b.append(b[-1] + D)
    return tuple(b)


def _cplus_phi(n):
    if n == 0:
        return 0
    return n - (1 << (n.bit_length() - 1))


def cplus(Delta, v_levels, w_levels, b1=2, w0=1.0):
    """C+ data from per-level tables: ``v_levels[k-1]`` and ``w_levels[k-1][i-1]``."""
    Delta = tuple(int(D) for D in Delta)
    b = cplus_blocks(Delta, b1)

    def v(n):
        return v_levels[n.bit_length() - 1]

    def w(j):
        n = bisect.bisect_right(b, j) - 1
        if n == 0:
            return w0
        i = j - b[n]
        return w_levels[n.bit_length() - 1][i - 1]

    return CTypeParams(b=b, phi=_cplus_phi, v=v, w=w, flavor="cplus", Delta=Delta)


def cplus_one(Delta, tau, sdelta, b1=2):
    """C+,1 data: ``v^(k) = 2^-tau^(k)`` and ``w_i^(k) = 2`` for ``i <= delta^(k)``, else 1."""
    Delta = tuple(int(D) for D in Delta)
    tau = tuple(int(t) for t in tau)
    sdelta = tuple(int(d) for d in sdelta)
    if not len(Delta) == len(tau) == len(sdelta):
        raise ValidationError("Delta, tau and delta tables need the same length")
    b = cplus_blocks(Delta, b1)
    wl = _c1_weight_log2(b, sdelta)

    def v_log2(n):
        return -tau[n.bit_length() - 1]

    return CTypeParams(
        b=b, phi=_cplus_phi,
        v=lambda n: _pow2(v_log2(n)),
        w=lambda j: float(1 << wl(j)),
        flavor="cplus1", Delta=Delta, tau=tau, sdelta=sdelta,
        v_log2=v_log2, w_log2=wl,
    )


def reference_cplus_one(k_max=8):
    """``Delta^(k) = 4^k``, ``delta^(k) = Delta/2``, ``tau^(k) = Delta/4``, ``b_1 = 2``."""
    Delta = [4 ** k for k in range(1, k_max + 1)]
    return cplus_one(Delta, [D // 4 for D in Delta], [D // 2 for D in Delta])


def ctype_validate(params, check_blocks=None):
    """Raise ValidationError unless the data defines a bounded C-type operator.

    Checks run over the materialized blocks (or the first ``check_blocks``).
    """
    b = params.b
    B = params.n_blocks if check_blocks is None else min(check_blocks, params.n_blocks)
    if b[0] != 0:
        raise ValidationError("b_0 must be 0")
    if any(b[i + 1] <= b[i] for i in range(len(b) - 1)):
        raise ValidationError("b must be strictly increasing")
    if b[1] < 2:
        raise ValidationError("b_1 >= 2 is required (the wrap rule at b_1 - 1 needs a weight)")
    if any(b[i + 1] - b[i] < 2 for i in range(B)):
        raise ValidationError("every block needs length >= 2")
    if params.phi(0) != 0:
        raise ValidationError("phi(0) must be 0")
    for n in range(1, B):
        f = params.phi(n)
        if not 0 <= f < n:
            raise ValidationError(f"phi({n}) = {f} is not in [0, {n})")
        if params.block_length(n) % (2 * params.block_length(f)):
            raise ValidationError(f"block {n} length is not a multiple of 2 * block {f} length")
    vlogs = []
    for n in range(1, B):
        s, e = params.v_sl(n)
        if e == -math.inf:
            raise ValidationError(f"v_{n} must be non-zero")
        vlogs.append(e)
    if len(vlogs) >= 4:
        top = max(vlogs)
        total = math.fsum(2.0 ** (e - top) for e in vlogs)
        tail = math.fsum(2.0 ** (e - top) for e in vlogs[len(vlogs) // 2:])
        if tail > 0.5 * total:
            raise ValidationError("sum |v_n| shows no decaying tail on the materialized blocks")
    wl = [params.w_sl(j)[1] for j in range(1, min(b[B], 1 << 16) + 1)]
    if any(e == -math.inf or math.isinf(e) for e in wl):
        raise ValidationError("weights must be non-zero and finite")
    for n in range(B):
        _, e = params.wprod_sl(b[n] + 1, b[n + 1] - 1)
        if e == -math.inf:
            raise ValidationError(f"block {n} weight product vanishes")
    if params.flavor in ("cplus", "cplus1"):
        for n in range(1, B):
            k = params.level_of(n)
            if params.phi(n) != n - (1 << (k - 1)):
                raise ValidationError(f"C+ data needs phi(n) = n - 2^(k-1) at n = {n}")
            if params.block_length(n) != params.Delta[k - 1]:
                raise ValidationError(f"block {n} length differs from Delta^({k})")
    if params.flavor == "cplus1":
        t, d, D = params.tau, params.sdelta, params.Delta
        if any(t[i + 1] <= t[i] or d[i + 1] <= d[i] for i in range(len(t) - 1)):
            raise ValidationError("tau and delta must be strictly increasing")
        if any(d[i] >= D[i] for i in range(len(d))):
            raise ValidationError("delta^(k) < Delta^(k) is required")
    return True


def _apply_once(params, terms):
    """One step on a dict ``index -> (sign, log2)`` list of contributions."""
    b = params.b
    out: Dict[int, list] = {}

    def put(idx, sign, e):
        out.setdefault(idx, []).append((sign, e))

    for k, contribs in terms.items():
        n = params.block_of(k)
        last = b[n + 1] - 1
        for sign, e in contribs:
            if k < last:
                s, we = params.w_sl(k + 1)
                put(k + 1, sign * s, e + we)
            else:
                ps, pe = params.wprod_sl(b[n] + 1, last)
                put(b[n], -sign * ps, e - pe)
                if n >= 1:
                    s, ve = params.v_sl(n)
                    put(b[params.phi(n)], sign * s, e + ve)
    return out


def _materialize(terms, p):
    out = {}
    for k, contribs in terms.items():
        out[k] = math.fsum(s * _pow2(e) for s, e in contribs)
    return SparseVec(out, p)


def ctype_apply(params, x, times):
    """``T^times x`` for the C-type operator with data ``params``."""
    if times < 0:
        raise DomainError("times must be non-negative")
    terms = {}
    for k, c in x.items():
        params.block_of(k)   # horizon check
        e = math.log2(abs(c))
        terms[k] = [(_sign(c), int(e) if e == int(e) else e)]
    for _ in range(times):
        terms = _apply_once(params, terms)
        # merge exact cancellations to keep the contribution lists short
        merged = {}
        for k, contribs in terms.items():
            acc: Dict[object, int] = {}
            for s, e in contribs:
                acc[e] = acc.get(e, 0) + s
            kept = [(1 if m > 0 else -1, e + math.log2(abs(m)) if abs(m) != 1 else e)
                    for e, m in acc.items() if m != 0]
            if kept:
                merged[k] = kept
        terms = merged
    return _materialize(terms, x.p)


def ctype_period(params, x):
    """lcm over the blocks met by ``x`` of ``2 * (b_{n+1} - b_n)``."""
    if not x:
        return 1
    out = 1
    for k in x.support():
        out = math.lcm(out, 2 * params.block_length(params.block_of(k)))
    return out


def block_pair_image(params, k, l, m):
    """``T^m e_{b_{2^(k-1)+l+1} - m}`` in closed form (C+ data).

    Equals ``v^(k) (w^(k)_{D-m+1} ... w^(k)_{D-1}) e_{b_l}
    - (w^(k)_1 ... w^(k)_{D-m})^(-1) e_{b_{2^(k-1)+l}}`` with ``D = Delta^(k)``.
    """
    if params.flavor not in ("cplus", "cplus1"):
        raise DomainError("block_pair_image needs C+ data")
    if not 1 <= k <= params.k_max:
        raise DomainError(f"level k = {k} outside 1..{params.k_max}")
    if not 0 <= l < (1 << (k - 1)):
        raise DomainError(f"l = {l} outside [0, 2^(k-1))")
    D = params.Delta[k - 1]
    if not 1 <= m <= D:
        raise DomainError(f"m = {m} outside [1, Delta^(k)]")
    n = (1 << (k - 1)) + l
    start = params.b[n]
    vs, ve = params.v_sl(n)
    s1, e1 = params.wprod_sl(start + D - m + 1, start + D - 1)
    s2, e2 = params.wprod_sl(start + 1, start + D - m)
    out = {params.b[l]: vs * s1 * _pow2(ve + e1), start: -s2 * _pow2(-e2)}
    return SparseVec(out)


# ---------------------------------------------------------------------------
# common frequent hypercyclicity for C+,1 families
# ---------------------------------------------------------------------------

DEFAULT_C_GRID = (10, 10 ** 3, 10 ** 6)


@dataclass(frozen=True)
class CPlusVerdict:
    holds: bool
    ratio: Fraction                     # inf over members of the tail max
    member_ratios: Tuple[Fraction, ...]
    witnesses: Dict[Tuple[int, int, int], Optional[int]]
    block_ratio_log2: Dict[Tuple[int, int], int]
    reason: str


def _pow2_gt(e, C):
    """Exact test ``2**e > C`` for an integer exponent and a rational ``C``."""
    return Fraction(2) ** e > Fraction(C)


def _pow2_lt(e, C):
    return Fraction(2) ** e < Fraction(C)


def _witness_ok(member, family, alpha, k, C):
    """Check the two block conditions at level ``k`` for one member, exactly."""
    D = member.Delta[k - 1]
    tau, dl = member.tau[k - 1], member.sdelta[k - 1]
    amax = int(alpha * D)            # largest n (or m) with n <= alpha * D
    # |v| prod_{i=n+1}^{D-1} w_i > C for every n <= alpha D; the worst n is amax
    exp_lower = -tau + max(0, dl - amax)
    if not _pow2_gt(exp_lower, C):
        return False
    # 2^(tau - delta) * max_{t, m <= alpha D} prod_{i<=m+1} w_i(t) < 1 / C
    top = max(min(amax + 1, f.sdelta[k - 1]) for f in family)
    return _pow2_lt(tau - dl + top, Fraction(1) / Fraction(C))


def cplus_common_verdict(family, alpha_frac, k_max=None, C_grid=DEFAULT_C_GRID):
    """Decide the growth condition for a finite C+,1 family sharing ``b``.

    ``ratio`` is ``min_t max_k (delta^(k)(t) - tau^(k)(t)) / Delta^(k)`` with
    ``k`` over the upper half ``[k_max/2, k_max]`` (a limsup proxy), computed
    as an exact fraction.  The verdict holds when ``ratio > 2 alpha`` and,
    for every member ``s``, every ``C`` in the grid and every ``k0 <= k_max``,
    some level ``k0 <= k <= k_max`` satisfies both block conditions exactly.
    ``block_ratio_log2[(s, t)]`` is ``max_k |delta^(k)(t) - delta^(k)(s)|``, the
    log2 of the within-block bound on weight-product ratios; it is reported only.
    """
    if not family:
        raise ValidationError("empty family")
    b = family[0].b
    for f in family:
        if f.flavor != "cplus1":
            raise ValidationError("cplus_common_verdict needs C+,1 members")
        if f.b != b:
            raise ValidationError("all members must share b")
    alpha = Fraction(alpha_frac).limit_denominator(10 ** 12)
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    K = family[0].k_max if k_max is None else min(k_max, family[0].k_max)
    lo = max(1, K // 2)
    member_ratios = tuple(
        max(Fraction(f.sdelta[k - 1] - f.tau[k - 1], f.Delta[k - 1]) for k in range(lo, K + 1))
        for f in family)
    ratio = min(member_ratios)
    witnesses = {}
    for s, f in enumerate(family):
        for C in C_grid:
            for k0 in range(1, K + 1):
                found = None
                for k in range(k0, K + 1):
                    if Fraction(f.sdelta[k - 1] - f.tau[k - 1], f.Delta[k - 1]) > 2 * alpha \
                            and _witness_ok(f, family, alpha, k, C):
                        found = k
                        break
                witnesses[(s, C, k0)] = found
    bounds = {}
    for s, fs in enumerate(family):
        for t, ft in enumerate(family):
            bounds[(s, t)] = max(abs(ft.sdelta[k] - fs.sdelta[k]) for k in range(K))
    if ratio <= 2 * alpha:
        return CPlusVerdict(False, ratio, member_ratios, witnesses, bounds,
                            f"ratio {ratio} does not exceed 2 alpha = {2 * alpha}")
    missing = [key for key, k in witnesses.items() if k is None]
    if missing:
        return CPlusVerdict(False, ratio, member_ratios, witnesses, bounds,
                            f"no witness level up to k_max for {missing[0]} "
                            f"(and {len(missing) - 1} more)")
    return CPlusVerdict(True, ratio, member_ratios, witnesses, bounds,
                        f"ratio {ratio} > 2 alpha and every (s, C, k0) has a witness")


# ---------------------------------------------------------------------------
# text configuration
# ---------------------------------------------------------------------------

def parse_ctype_config(text):
    """Read ``key = value`` lines: ``flavor``, ``b_horizon``, ``delta[k]``, ``tau[k]``,
    ``sigma_delta[k]`` (``delta`` is the block length Delta, ``sigma_delta`` the
    doubling count).  Missing tables default to the reference instance."""
    vals = {}
    tables = {"delta": {}, "tau": {}, "sigma_delta": {}}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"expected key = value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if "[" in key:
            name, idx = key.rstrip("]").split("[")
            if name not in tables:
                raise ValidationError(f"unknown table {name!r}")
            tables[name][int(idx)] = int(val)
        else:
            vals[key] = val
    flavor = vals.get("flavor", "cplus1")
    if flavor != "cplus1":
        raise ValidationError("only flavor = cplus1 can be built from a text config")
    K = int(vals.get("b_horizon", 8))
    ref = reference_cplus_one(K)

    def table(name, default):
        t = tables[name]
        return [t.get(k, default[k - 1]) for k in range(1, K + 1)]

    params = cplus_one(table("delta", ref.Delta), table("tau", ref.tau),
                       table("sigma_delta", ref.sdelta), b1=int(vals.get("b1", 2)))
    ctype_validate(params, check_blocks=min(params.n_blocks, 64))
    return params
