"""Building a common frequently hypercyclic vector for multiples of a weighted shift.

The pipeline has four stages:

1. ``tail_threshold_table``: for every label ``(p, i)`` (target level ``p``,
   multiplier index ``i``) the least ``N`` after which all the tail sums that
   the convergence argument needs are below their share of the budget;
2. ``build_index_sets``: pairwise separated sets ``E_p(i)`` of positive lower
   density (unions of multiples of ``N_p(i)`` inside ``[(1-eps)a^u, (1+eps)a^u]``);
3. ``assemble_common_vector``: ``x = sum_{i,p} sum_{n in E_p(i)} lam_i^-n F_w^n y_p``;
4. ``verify_frequent_hits``: ``||(lam_j B_w)^m x - y_q|| < r_q`` for every
   ``m in E_q(j)`` inside a window, evaluated term by term in closed form.

Integer sets are built with exact arithmetic (``Fraction`` for ``a``), so the
separation properties are exact statements, not floating-point ones.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .densities import DensitySeq, IndexSet, emp_lower_density
from .errors import (DivergingTailError, DomainError, PreconditionError,
                     TruncationError, ValidationError)
from .operators import SparseVec
from .shift_analysis import ConstantWeight, shift_quantities

M_SCAN = 1000           # cross terms are scanned for m <= M_SCAN
DEFAULT_CAP = 10 ** 4


def default_targets(p=2.0):
    """``e0, e0 + e1, 2 e1, e2 - e0, (e0 + e1 + e2) / 2``."""
    return [SparseVec({0: 1.0}, p), SparseVec({0: 1.0, 1: 1.0}, p), SparseVec({1: 2.0}, p),
            SparseVec({2: 1.0, 0: -1.0}, p), SparseVec({0: 0.5, 1: 0.5, 2: 0.5}, p)]


# ---------------------------------------------------------------------------
# budget
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsilonBudget:
    """``eps_p = 2^-(p+2)`` and ``J_p = p + 2`` unless ``constant`` overrides eps."""

    constant: Optional[float] = None

    def eps(self, p):
        return self.constant if self.constant is not None else 2.0 ** -(p + 2)

    def J(self, p):
        return p + 2

    def tail(self, p):
        """``sum_{i >= p} eps_i``."""
        if self.constant is not None:
            return math.inf
        return 2.0 ** -(p + 1)

    def r1(self, q):
        return 2 * q * self.eps(q) + 2 * self.tail(q)

    def r2(self, q):
        e, J = self.eps(q), self.J(q)
        return self.tail(q) + q * e + q * e * J * self.eps(J)

    def r(self, q):
        """Radius of the hit ball around ``y_q``: ``eps_q + r1_q + 2 r2_q``."""
        return self.eps(q) + self.r1(q) + 2 * self.r2(q)


# ---------------------------------------------------------------------------
# tail thresholds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdTable:
    N: Dict[Tuple[int, int], int]
    breakdown: Dict[Tuple[int, int], Dict[str, int]]
    c: float
    d: float
    lambdas: Tuple[float, ...]
    budget: EpsilonBudget

    @property
    def labels(self):
        return sorted(self.N)


def choose_c(lambdas, a):
    """Least integer ``c >= 2`` with ``sup/inf * (d/inf)^(c-1) <= 1`` for ``d`` a
    quarter of the way from ``a`` to ``inf Lambda``."""
    lo, hi = min(lambdas), max(lambdas)
    if hi == lo:
        return 2.0
    d = a + (lo - a) / 4
    need = 1 + math.log(hi / lo) / math.log(lo / d)
    return float(max(2, math.ceil(need)))


def check_c(lambdas, a, c):
    """Return some admissible ``d`` in ``(a, inf Lambda)`` for ``c``, else raise."""
    lo, hi = min(lambdas), max(lambdas)
    if c <= 1:
        raise PreconditionError("c must exceed 1")
    if hi == lo:
        return (a + lo) / 2
    # the constraint is monotone in d, so it is satisfiable iff it holds as d -> a
    if (hi / lo) * (a / lo) ** (c - 1) >= 1:
        raise PreconditionError(f"c = {c} too small: sup/inf * (d/inf)^(c-1) > 1 for every d > {a:.6g}")
    dmax = lo * (lo / hi) ** (1 / (c - 1))
    return (a + min(dmax, lo)) / 2


def _log_forward_norms(w, y, lam, length, p):
    """``log ||lam^-n F_w^n y||_p`` for ``n = 0 .. length - 1``."""
    ns = np.arange(length, dtype=np.int64)
    acc = np.full(length, -np.inf)
    for k, c in y.items():
        lp = w.log_prefix_array(ns + k) - w.log_prefix(k) if k > 0 else w.log_prefix_array(ns)
        acc = np.logaddexp(acc, p * (math.log(abs(c)) - lp))
    return acc / p - ns * math.log(lam)


def _log_backward_norms(w, y, lam, p):
    """``log ||lam^n B_w^n y||_p`` for ``n = 0 .. max support`` (zero afterwards)."""
    top = max(y.support())
    out = []
    for n in range(top + 1):
        parts = [p * (math.log(abs(c)) + w.log_product(k - n + 1, k) if n else p * math.log(abs(c)))
                 for k, c in y.items() if k >= n]
        out.append(float(np.logaddexp.reduce(parts)) / p + n * math.log(lam) if parts else -math.inf)
    return np.asarray(out)


def _suffix_logsum(logs):
    """``out[N] = log sum_{n >= N} exp(logs[n])`` (pairwise-free, ordered)."""
    return np.logaddexp.accumulate(logs[::-1])[::-1]


TIE_MARGIN = 1e-9       # log-scale margin so that exact ties count as "not below"


def _least_N(value_at, log_threshold, cap, condition):
    """Smallest ``N`` in ``[1, cap]`` with ``value_at(N) < log_threshold`` (monotone)."""
    log_threshold -= TIE_MARGIN
    if value_at(cap) >= log_threshold:
        raise DivergingTailError(f"condition ({condition}) does not close below cap = {cap}",
                                 condition=condition)
    lo, hi = 1, cap
    while lo < hi:
        mid = (lo + hi) // 2
        if value_at(mid) < log_threshold:
            hi = mid
        else:
            lo = mid + 1
    return lo


def tail_threshold_table(w, lambdas, targets, p=2.0, budget=None, c=None, cap=DEFAULT_CAP,
                         quantities=None, levels=None):
    """Least ``N_p(i)`` meeting every tail condition for ``T_i = lam_i B_w``, ``S_i = F_w / lam_i``.

    Finite sets ``F`` are replaced by whole tails ``n >= N`` of absolute
    values (absolute convergence implies unconditional convergence).  For this
    pair ``(T, S)``, ``B^m F^(m+n) = F^n`` and ``B^m F^(m-n) = B^n``, which gives:

    * (i), (v), (vi): sums of ``lam^n ||B^n y||``; they vanish past the support of y;
    * (ii): ``sum_{n>=N} lam_k^-n ||F^n y|| < eps_p``;
    * (iii), (iv): ``(lam_k/lam_l)^m sum_{n >= max(N, (c-1)m)} lam_l^-n ||F^n y||``
      below ``eps_p eps_i`` and ``eps_{J_p} eps_p``, scanned for ``m <= 1000``;
    * (vii): the tail of (ii) below ``eps_p eps_i``;
    * (viii): ``T^N S^N y = y`` exactly.

    ``breakdown[(p, i)]`` keeps the least ``N`` per condition; ``N[(p, i)]`` is
    their maximum over targets ``q <= p``, made non-decreasing in ``p``.
    """
    lambdas = tuple(float(v) for v in lambdas)
    if not lambdas or not targets:
        raise ValidationError("need at least one multiplier and one target")
    budget = budget or EpsilonBudget()
    if quantities is None:
        quantities = shift_quantities(w, 10 ** 5, p)
    a = 1.0 / quantities.r_pw
    for lam in lambdas:
        if not lam > a + quantities.width:
            raise PreconditionError(f"multiplier {lam} is not above 1/r_pw = {a:.12g} (+width)")
    if c is None:
        c = choose_c(lambdas, a)
    d = check_c(lambdas, a, c)
    levels = len(targets) if levels is None else levels
    length = 5 * cap + int(math.ceil((c - 1) * M_SCAN)) + 2
    ms = np.arange(M_SCAN + 1)
    cross_idx = np.ceil((c - 1) * ms - 1e-12).astype(np.int64)

    fwd = {}   # (lambda index, target index) -> suffix log sums of forward terms
    bwd = {}
    for li, lam in enumerate(lambdas):
        for q, y in enumerate(targets):
            logs = _log_forward_norms(w, y, lam, length, p)
            if logs[-1] > logs[0] - 30:
                raise DivergingTailError(f"forward terms for lambda={lam} do not decay",
                                         condition="ii")
            fwd[(li, q)] = _suffix_logsum(logs)
            bwd[(li, q)] = _log_backward_norms(w, y, lam, p)

    def fwd_tail(li, q, N):
        tail = fwd[(li, q)]
        return tail[N] if N < tail.size else -math.inf

    def bwd_tail(li, q, N):
        arr = bwd[(li, q)]
        return float(np.logaddexp.reduce(arr[N:])) if N < arr.size else -math.inf

    def cond_v(k, l, q, N):
        """sup_m sum_{N <= n <= m, n >= (c-1)m/c} (lam_k/lam_l)^(m-n) lam_k^n ||B^n y||."""
        arr = bwd[(k, q)]
        if N >= arr.size:
            return -math.inf
        r = math.log(lambdas[k] / lambdas[l])
        best = -math.inf
        for m in range(N, min(M_SCAN, int(arr.size * c / (c - 1)) + 1) + 1):
            ns = [n for n in range(N, min(m, arr.size - 1) + 1) if n >= (c - 1) * m / c]
            if ns:
                best = max(best, float(np.logaddexp.reduce([(m - n) * r + arr[n] for n in ns])))
        return best

    def cond_iii(k, l, q, N):
        tail = fwd[(l, q)]
        idx = np.maximum(cross_idx, N)
        vals = ms * math.log(lambdas[k] / lambdas[l]) + tail[np.minimum(idx, tail.size - 1)]
        return float(vals.max())

    pairs = [(k, l) for k in range(len(lambdas)) for l in range(len(lambdas)) if k != l]
    table, breakdown = {}, {}
    for i in range(len(lambdas)):
        running = 0
        for lev in range(levels):
            eps_p, eps_i = budget.eps(lev), budget.eps(i)
            cross = min(eps_p * eps_i, budget.eps(budget.J(lev)) * eps_p)
            per = {}
            qs = range(min(lev, len(targets) - 1) + 1)
            per["i"] = max(_least_N(lambda N: max(bwd_tail(k, q, N) for k in range(len(lambdas)) for q in qs),
                                    math.log(eps_p), cap, "i"), 1)
            per["ii"] = _least_N(lambda N: max(fwd_tail(k, q, N) for k in range(len(lambdas)) for q in qs),
                                 math.log(eps_p), cap, "ii")
            per["vii"] = _least_N(lambda N: max(fwd_tail(k, q, N) for k in range(len(lambdas)) for q in qs),
                                  math.log(eps_p * eps_i), cap, "vii")
            if pairs:
                per["iii/iv"] = _least_N(lambda N: max(cond_iii(k, l, q, N) for k, l in pairs for q in qs),
                                         math.log(cross), cap, "iii/iv")
                per["v/vi"] = _least_N(lambda N: max(cond_v(k, l, q, N) for k, l in pairs for q in qs),
                                       math.log(cross), cap, "v/vi")
            per["viii"] = 1   # T^N S^N y = y holds for every N
            running = max(running, max(per.values()))
            table[(lev, i)] = running
            breakdown[(lev, i)] = per
    return ThresholdTable(table, breakdown, float(c), float(d), lambdas, budget)


# ---------------------------------------------------------------------------
# separated index sets
# ---------------------------------------------------------------------------

def _ceil_frac(x):
    return -((-x.numerator) // x.denominator)


def _floor_frac(x):
    return x.numerator // x.denominator


@dataclass
class SeparatedFamily:
    """Labelled sets ``E_p(i)`` with their construction data.

    ``A[label] = (residue, M)``: the admissible block exponents are
    ``u = residue mod M`` with ``u >= u_min[label]``.
    """

    labels: Tuple[Tuple[int, int], ...]
    K: Fraction
    eps: Fraction
    a: Fraction
    N: Dict[Tuple[int, int], int]
    A: Dict[Tuple[int, int], Tuple[int, int]]
    u_min: Dict[Tuple[int, int], int]
    horizon: int
    sets: Dict[Tuple[int, int], IndexSet] = field(default_factory=dict)

    @property
    def M(self):
        return len(self.labels)

    def blocks(self, label, upto):
        """Admissible ``u`` (increasing) whose interval starts at or below ``upto``."""
        r, M = self.A[label]
        u = self.u_min[label]
        u += (r - u) % M
        while (1 - self.eps) * self.a ** u <= upto:
            yield u
            u += M

    def nth_block(self, label, j):
        r, M = self.A[label]
        u = self.u_min[label]
        return u + (r - u) % M + j * M

    def interval(self, u):
        au = self.a ** u
        return _ceil_frac((1 - self.eps) * au), _floor_frac((1 + self.eps) * au)

    def runs(self, label, upto):
        n = self.N[label]
        out = []
        for u in self.blocks(label, upto):
            lo, hi = self.interval(u)
            first = -(-lo // n) * n
            if first <= hi:
                out.append((first, n, (hi - first) // n + 1))
        return out

    def set_upto(self, label, horizon):
        """``E_p(i)`` as a run-backed set on ``[0, horizon]`` (any size)."""
        return IndexSet.from_runs(self.runs(label, horizon), horizon)

    def csv_rows(self):
        rows = ["p,i,N,u_min,count"]
        for lab in self.labels:
            rows.append(f"{lab[0]},{lab[1]},{self.N[lab]},{self.u_min[lab]},{len(self.sets[lab])}")
        return "\n".join(rows) + "\n"

    def lower_density_floor(self, label):
        """``0.5 * eps / (N a^M + 1)``: half the asymptotic lower-density bound."""
        return 0.5 * float(self.eps) / (self.N[label] * float(self.a) ** self.M + 1)

    def density_window(self, label, start_block=2):
        """Window ``[a^u*, a^(u* + 2M)]`` with ``u*`` the third admissible block."""
        u = self.nth_block(label, start_block)
        return _ceil_frac(self.a ** u), _floor_frac(self.a ** (u + 2 * self.M))


def build_index_sets(N, K, labels=None, horizon=10 ** 6, eps=Fraction(1, 10), slack=Fraction(11, 10)):
    """Separated sets for the thresholds ``N`` (a dict label -> N or a ThresholdTable).

    ``a = slack * K (1 + 2 eps) / (1 - 2 eps)``; ``A_p(i)`` is the residue class of
    the label's position modulo the number of labels; ``u_min`` is the least
    ``u`` with ``N <= eps a^u``.  All arithmetic on the sets is exact.
    """
    if isinstance(N, ThresholdTable):
        N = N.N
    labels = tuple(sorted(N)) if labels is None else tuple(labels)
    K = Fraction(K)
    eps = Fraction(eps)
    if not K > 1:
        raise DomainError("K must exceed 1")
    if not 0 < eps < Fraction(1, 2):
        raise DomainError("eps must lie in (0, 1/2)")
    a = Fraction(slack) * K * (1 + 2 * eps) / (1 - 2 * eps)
    if not (1 - 2 * eps) / (1 + 2 * eps) * a > K:
        raise ValidationError("(1 - 2eps)/(1 + 2eps) a > K fails")
    M = len(labels)
    fam = SeparatedFamily(labels, K, eps, a, {lab: int(N[lab]) for lab in labels},
                          {lab: (r, M) for r, lab in enumerate(labels)}, {}, int(horizon))
    for lab in labels:
        n = fam.N[lab]
        if n < 1:
            raise ValidationError("N must be a positive integer")
        u = 0
        while n > eps * a ** u:
            u += 1
        fam.u_min[lab] = u
        fam.sets[lab] = fam.set_upto(lab, horizon)
        if len(fam.sets[lab]) == 0:
            warnings.warn(f"label {lab} has no element up to {horizon}", stacklevel=2)
    return fam


def check_separation(family, horizon=None):
    """Exact check of the three separation properties on ``[0, horizon]``.

    Sorting all elements reduces the pairwise statements to neighbours: the
    gap condition for a pair follows from the nearest element on each side,
    and the ratio condition from the largest smaller element of another label.
    Returns a dict of property -> list of violations (empty lists mean pass).
    """
    H = family.horizon if horizon is None else horizon
    vals, labs = [], []
    for li, lab in enumerate(family.labels):
        el = [v for v in family.set_upto(lab, H)]
        vals.extend(el)
        labs.extend([li] * len(el))
    bad = {"min": [], "gap": [], "ratio": []}
    for li, lab in enumerate(family.labels):
        first = family.set_upto(lab, H).first()
        if first is not None and first < family.N[lab]:
            bad["min"].append((lab, first))
    order = sorted(range(len(vals)), key=vals.__getitem__)
    Ns = [family.N[lab] for lab in family.labels]
    K = family.K
    top = []   # up to two (value, label) of the latest element per distinct label
    prev = None
    for idx in order:
        v, l = vals[idx], labs[idx]
        if prev is not None:
            pv, pl = prev
            if v - pv < max(Ns[l], Ns[pl]):
                bad["gap"].append((pv, v))
        for tv, tl in top:
            if tl != l:
                if v * K.denominator < K.numerator * tv:
                    bad["ratio"].append((tv, v))
                break
        top = [(v, l)] + [t for t in top if t[1] != l][:1]
        prev = (v, l)
    return bad


# ---------------------------------------------------------------------------
# the common vector
# ---------------------------------------------------------------------------

@dataclass
class AssembledVector:
    """Truncated series ``sum lam_i^-n F_w^n y_p`` with its bookkeeping.

    ``terms`` lists ``(i, p, n)``; ``x`` is the materialized sum (entries under
    1e-300 vanish, the hit check therefore works from ``terms``).
    """

    terms: List[Tuple[int, int, int]]
    lambdas: Tuple[float, ...]
    w: object
    targets: List[SparseVec]
    support_cap: int
    tail_bound: float
    x: SparseVec

    def term_arrays(self):
        """Flat arrays over (term, support entry): lambda index, n, k, log|coef|, sign."""
        li, ns, ks, lc, sg = [], [], [], [], []
        for i, p, n in self.terms:
            for k, c in self.targets[p].items():
                li.append(i)
                ns.append(n)
                ks.append(k)
                lc.append(math.log(abs(c)))
                sg.append(1.0 if c > 0 else -1.0)
        return (np.asarray(li, dtype=np.int64), np.asarray(ns, dtype=np.int64),
                np.asarray(ks, dtype=np.int64), np.asarray(lc), np.asarray(sg))

    def zeroed(self, index):
        """Copy with coordinate ``index`` of x set to zero (drops every term touching it)."""
        keep = [t for t in self.terms
                if all(k + t[2] != index for k in self.targets[t[1]].support())]
        if len(keep) == len(self.terms):
            raise ValidationError(f"coordinate {index} is not in the support of x")
        entries = {k: v for k, v in self.x.items() if k != index}
        return AssembledVector(keep, self.lambdas, self.w, self.targets, self.support_cap,
                               self.tail_bound, SparseVec(entries, self.x.p))


def assemble_common_vector(family, lambdas, w, targets, support_cap, budget=None, p=2.0):
    """Sum ``S_i^n y_p`` over ``n in E_p(i)`` with ``n + max supp(y_p) <= support_cap``.

    The discarded part is bounded by a geometric tail with ratio
    ``1 / (min lam * min w)`` over all labels; a bound above ``min_q r_q / 10``
    raises TruncationError.
    """
    budget = budget or EpsilonBudget()
    lambdas = tuple(float(v) for v in lambdas)
    terms = []
    entries: Dict[int, float] = {}
    if family is None or not family.labels:
        return AssembledVector([], lambdas, w, list(targets), support_cap, 0.0, SparseVec({}, p))
    ws_min = math.exp(float(np.min(w.log_w_array(np.arange(1, support_cap + 2, dtype=np.int64)))))
    tail = 0.0
    for lab in family.labels:
        lev, i = lab
        y = targets[lev]
        s = max(y.support())
        E = family.set_upto(lab, support_cap)
        lam = lambdas[i]
        for n in E:
            if n + s > support_cap:
                break
            terms.append((i, lev, n))
            for k, c in y.items():
                lc = -n * math.log(lam) - w.log_product(k + 1, k + n) if n else 0.0
                val = c * math.exp(lc)
                if val != 0.0:
                    entries[k + n] = entries.get(k + n, 0.0) + val
        rho = 1.0 / (lam * ws_min)
        if rho >= 1:
            raise TruncationError(f"no geometric tail bound: lam * min w = {1 / rho:.6g} <= 1")
        n0 = max(support_cap - s + 1, family.N[lab])
        ynorm = sum(abs(c) for _, c in y.items())
        tail += ynorm * rho ** n0 / (1 - rho)
    rmin = min(budget.r(q) for q in range(len(targets)))
    if tail > rmin / 10:
        raise TruncationError(f"discarded tail bound {tail:.3g} exceeds min r_q / 10 = {rmin / 10:.3g}")
    return AssembledVector(terms, lambdas, w, list(targets), support_cap, tail, SparseVec(entries, p))


@dataclass(frozen=True)
class HitRow:
    q: int
    j: int
    m: int
    norm: float
    r_q: float
    passed: bool


@dataclass
class HitReport:
    rows: List[HitRow]
    densities: Dict[Tuple[int, int], float]
    probes: Dict[Tuple[int, int], int]

    @property
    def all_passed(self):
        return all(r.passed for r in self.rows)

    def failures(self):
        return [r for r in self.rows if not r.passed]

    def csv(self, fmt=lambda v: f"{v:.12g}"):
        lines = ["q,j,m,norm,r_q,pass"]
        lines += [f"{r.q},{r.j},{r.m},{fmt(r.norm)},{fmt(r.r_q)},{int(r.passed)}" for r in self.rows]
        return "\n".join(lines) + "\n"


def orbit_residual(vec, j, m, y, p=2.0, arrays=None):
    """``(lam_j B_w)^m x - y`` from the term list, as a SparseVec.

    For a term ``lam_i^-n F^n e_k`` the image is ``lam_j^m lam_i^-n B^m F^n e_k``,
    i.e. ``exp(m ln lam_j - n ln lam_i + P(k) - P(k+n-m))`` at ``k + n - m``
    (``P`` the log prefix product), or nothing when ``k + n < m``.
    """
    li, ns, ks, lc, sg = vec.term_arrays() if arrays is None else arrays
    idx = ks + ns - m
    live = idx >= 0
    lam_log = np.log(np.asarray(vec.lambdas))
    w = vec.w
    logc = (m * lam_log[j] - ns[live] * lam_log[li[live]] + lc[live]
            + w.log_prefix_array(ks[live]) - w.log_prefix_array(idx[live]))
    vals = sg[live] * np.exp(logc)
    out: Dict[int, float] = {}
    for t, v in zip(idx[live].tolist(), vals.tolist()):
        out[t] = out.get(t, 0.0) + v
    for k, c in y.items():
        out[k] = out.get(k, 0.0) - c
    return SparseVec(out, p)


def verify_frequent_hits(vec, family, window, budget=None, p=2.0):
    """Check ``||(lam_j B_w)^m x - y_q|| + tail < r_q`` for ``m in E_q(j)`` in ``window``."""
    budget = budget or EpsilonBudget()
    lo, hi = int(window[0]), int(window[1])
    arrays = vec.term_arrays()
    rows, dens, probes = [], {}, {}
    const = DensitySeq.constant(1.0)
    for lab in family.labels:
        q, j = lab
        E = family.set_upto(lab, hi)
        rq = budget.r(q)
        count = 0
        for m in E:
            if m < lo:
                continue
            res = orbit_residual(vec, j, m, vec.targets[q], p, arrays)
            nrm = res.norm()
            rows.append(HitRow(q, j, m, nrm, rq, nrm + vec.tail_bound < rq))
            count += 1
        probes[lab] = count
        first = E.first()
        if first is None or first >= hi:
            dens[lab] = 0.0
        else:
            dens[lab] = emp_lower_density(const, E, (max(first, lo, 1), hi))
    return HitReport(rows, dens, probes)


# ---------------------------------------------------------------------------
# hit sets from periodic-point constructions
# ---------------------------------------------------------------------------

def build_gmm_hit_sets(n, d_seq, period, alpha, depth):
    """Union over ``j <= depth`` of the layered sets ``A_{m,j}``.

    ``d_seq = (d_{j_m}, d_{j_m+1}, ..., d_{j_m+depth+1})``.  Layer 0 is
    ``{n + k d_0 + k' period : 0 <= k' <= alpha d_0 / period, 0 <= k <= alpha d_1 / d_0 - 2}``
    and layer ``j`` is ``A_{m,j-1} + k d_j`` for ``1 <= k <= alpha d_{j+1} / d_j - 1``.
    Each layer stays below ``alpha d_{j+1}`` (checked).
    """
    alpha = Fraction(alpha).limit_denominator(10 ** 9)
    d = [int(v) for v in d_seq]
    if not 0 < alpha < 1:
        raise ValidationError("alpha must lie in (0, 1)")
    if period < 1:
        raise ValidationError("period must be >= 1")
    if len(d) < depth + 2:
        raise ValidationError("d_seq needs depth + 2 entries")
    for j in range(1, len(d)):
        if not alpha * d[j] > 4 * d[j - 1]:
            raise ValidationError(f"growth condition alpha d_j > 4 d_(j-1) fails at j = {j}")
    kp_max = _floor_frac(alpha * d[0] / period)
    k_max = _floor_frac(alpha * d[1] / d[0]) - 2
    layer = sorted({n + k * d[0] + kp * period for k in range(k_max + 1) for kp in range(kp_max + 1)})
    union = set(layer)
    for j in range(depth + 1):
        if layer and layer[-1] > alpha * d[j + 1]:
            raise ValidationError(f"layer {j} exceeds alpha d_(j+1)")
        if j == depth:
            break
        kmax = _floor_frac(alpha * d[j + 2] / d[j + 1]) - 1
        layer = sorted({v + k * d[j + 1] for v in layer for k in range(1, kmax + 1)})
        union.update(layer)
    return IndexSet.from_elements(sorted(union))
