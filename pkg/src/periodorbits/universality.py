"""Scaling estimates for cascades of superstable orbits.

Parameter gaps shrink by the Feigenbaum ratio delta along a period-doubling
cascade, critical distances by alpha, and the first appearances of odd periods
accumulate geometrically on the edge of their block.  The appearance order of
odd periods follows a self-similar pattern generated here row by row.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .dynamics import (
    ScanConfig,
    SuperstableRecord,
    default_window,
    find_superstable,
    get_family,
    iterate,
    orbit_of_critical,
    period_doubling_ladder,
)
from .errors import CoverageError, DomainError, NotRenormalizableError, PrecisionFloorError

D_FLOOR = 1e-13


# --- cascade estimators ------------------------------------------------------

def feigenbaum_delta(lambdas: Sequence[float]) -> List[float]:
    """Gap ratios ``(l[s-1]-l[s-2]) / (l[s]-l[s-1])`` for s = 2, 3, ..."""
    lam = [float(v) for v in lambdas]
    if len(lam) < 3:
        raise DomainError("need at least three ladder values")
    out = []
    for s in range(2, len(lam)):
        den = lam[s] - lam[s - 1]
        if den == 0.0:
            raise DomainError(f"degenerate ladder: repeated value at s={s}")
        out.append((lam[s - 1] - lam[s - 2]) / den)
    return out


def critical_distance(fam, lam: float, p: int) -> float:
    """Directed distance from the critical point to the nearest other point of its p-orbit."""
    fam = get_family(fam)
    c = fam.x_max
    d = min((c - x for x in orbit_of_critical(fam, lam, p)[1:]), key=abs)
    if abs(d) < D_FLOOR:
        raise PrecisionFloorError(f"critical distance {d:.3e} below {D_FLOOR:g} at parameter {lam!r}")
    return d


def critical_distances(fam, q: int, ladder: Sequence[float]) -> List[Optional[float]]:
    """``d[s]`` for each ladder level; None for the fixed point, which has no other orbit point."""
    return [None if (q << s) == 1 else critical_distance(fam, lam, q << s) for s, lam in enumerate(ladder)]


def alpha_ratios(fam, q: int, j: int, ladder: Sequence[float]) -> List[Optional[float]]:
    """Ratios ``d[s-1]/d[s]`` of critical distances along the ladder, for s >= 1.

    ``d[s]`` is measured on the superstable ``2^s q`` orbit at its own
    parameter ``ladder[s]``.  Signs alternate, so the ratios are negative.
    The fixed point of the pure doubling cascade has no such distance, so for
    ``q = 1`` the first entry is None.
    """
    if len(ladder) < 2:
        raise DomainError("need at least two ladder values")
    d = critical_distances(fam, q, ladder)
    return [None if d[s - 1] is None else d[s - 1] / d[s] for s in range(1, len(d))]


def lambda_inf_extrapolate(ladder: Sequence[float], delta: float) -> float:
    """One geometric step beyond the last two ladder values."""
    if len(ladder) < 2:
        raise DomainError("need at least two ladder values")
    if delta <= 1.0:
        raise DomainError(f"extrapolation diverges for delta = {delta}")
    return (ladder[-1] - ladder[-2]) / delta + ladder[-1]


@dataclass(frozen=True)
class CascadeEstimate:
    family: str
    q: int
    appearance: int
    ladder: List[float]
    deltas: List[float]
    alphas: List[Optional[float]]
    d_values: List[Optional[float]]
    lambda_inf: float

    def as_json(self) -> dict:
        return {
            "family": self.family,
            "q": self.q,
            "appearance": self.appearance,
            "ladder": self.ladder,
            "deltas": self.deltas,
            "alphas": self.alphas,
            "d_values": self.d_values,
            "lambda_inf": self.lambda_inf,
        }


def cascade(fam, q: int, j: int, s_max: int = 4, cfg: Optional[ScanConfig] = None) -> CascadeEstimate:
    fam = get_family(fam)
    if not 2 <= s_max <= 6:
        raise DomainError("s_max must lie in 2..6")
    ladder = period_doubling_ladder(fam, q, j, s_max, cfg)
    deltas = feigenbaum_delta(ladder)
    alphas = alpha_ratios(fam, q, j, ladder)
    d = critical_distances(fam, q, ladder)
    return CascadeEstimate(fam.kind, q, j, ladder, deltas, alphas, d, lambda_inf_extrapolate(ladder, deltas[-1]))


# --- Sharkovskii blocks --------------------------------------------------------

def block_rate(lambdas_by_q: Sequence[float]) -> List[float]:
    """Ratios of consecutive gaps in a sequence decreasing in the odd period."""
    lam = [float(v) for v in lambdas_by_q]
    if len(lam) < 3:
        raise DomainError("need at least three values")
    if any(b >= a for a, b in zip(lam, lam[1:])):
        raise DomainError("block parameters must decrease strictly with the period")
    return [(lam[i] - lam[i + 1]) / (lam[i + 1] - lam[i + 2]) for i in range(len(lam) - 2)]


def block_parameters(fam, s: int, j: int, q_max: int, cfg: Optional[ScanConfig] = None,
                     points: int = 200_000) -> Dict[int, float]:
    """Parameters of the j-th superstable ``2^s q`` orbit for odd q = 3..q_max.

    Each search window runs from below the geometric accumulation estimate up
    to the previous value, so the j-th root counted from the bottom is the
    j-th appearance.
    """
    fam = get_family(fam)
    lo0, hi0 = (cfg.lo, cfg.hi) if cfg else default_window(fam)
    out: Dict[int, float] = {}
    prev = hi0
    for q in range(3, q_max + 1, 2):
        lams = list(out.values())
        lo = lo0
        if len(lams) >= 3:
            g1, g2 = lams[-3] - lams[-2], lams[-2] - lams[-1]
            limit = lams[-1] - g2 / (g1 / g2 - 1.0)
            lo = max(lo0, limit - 2.0 * (prev - limit))
        recs = find_superstable(fam, q << s, ScanConfig(lo, prev, grid_density=points / (prev - lo)))
        if len(recs) >= j:
            out[q] = recs[j - 1].parameter
            prev = out[q]
    return out


# --- pattern of patterns -------------------------------------------------------

@dataclass(frozen=True)
class PatternRow:
    N: int
    increments: List[int]
    spans: List[int]
    indices: List[int]

    def as_json(self) -> dict:
        return {"N": self.N, "increments": self.increments, "spans": self.spans, "indices": self.indices}


def _power_row(n: int) -> List[int]:
    if n == 0:
        return [2]
    size = 1 << n
    row = [0] * size
    row[0], row[-1] = 2 * (n + 1), -2 * n
    for i in range(1, n):
        block = size >> (i - 1)
        half = block >> 1
        for start in range(0, size, block):
            row[start + half - 1] = -2 * (n - i)
            row[start + half] = 2 * (n - i)
    return row


def _indices(N: int) -> List[int]:
    row = [1]
    for i in range(1, N):
        m = row.index(i) + 1
        if m - 1 >= 1 and row[m - 2] != 1:
            row.insert(m - 2, i + 1)
        else:
            row.append(i + 1)
    return row


def pattern_row(N: int) -> PatternRow:
    """Signed period increments, their column spans and the appearance indices for bound N."""
    if not 1 <= N <= 64:
        raise DomainError("pattern rows are generated for 1 <= N <= 64")
    n = N.bit_length() - 1
    width = max(16, 1 << (N - 1).bit_length())
    inc = _power_row(n)
    spans = [width >> n] * len(inc)
    extra = N - (1 << n)
    if extra:
        head_inc, head_span = inc[:-extra], spans[:-extra]
        tail_inc, tail_span = [], []
        for v, w in zip(inc[-extra:], spans[-extra:]):
            tail_inc += [v + 2, -2] if v > 0 else [2, v - 2]
            tail_span += [w // 2, w // 2]
        inc, spans = head_inc + tail_inc, head_span + tail_span
    return PatternRow(N, inc, spans, _indices(N))


def pattern_walk(N: int, q_max: int, counts: Optional[Dict[int, int]] = None) -> List[tuple]:
    """(period, appearance) pairs predicted in descending parameter order from 3_1.

    The walk stops at the first period above ``q_max``.  When ``counts`` is
    given, appearances beyond ``counts[q]`` do not exist and are skipped.
    """
    row = pattern_row(N)
    q, pos, out = 3, 0, []
    while q <= q_max:
        j = row.indices[pos]
        if counts is None or j <= counts.get(q, 0):
            out.append((q, j))
        q += row.increments[pos]
        pos = (pos + 1) % N
        if q < 3:
            raise DomainError("pattern walk left the odd periods")
    return out


@dataclass(frozen=True)
class PatternReport:
    N: int
    q_max: int
    expected: List[tuple]
    observed: List[tuple]
    agree: bool
    first_mismatch: Optional[int]

    def as_json(self) -> dict:
        fmt = lambda seq: [f"{q}_{j}" for q, j in seq]  # noqa: E731
        return {
            "N": self.N,
            "q_max": self.q_max,
            "agree": self.agree,
            "first_mismatch": self.first_mismatch,
            "expected": fmt(self.expected),
            "observed": fmt(self.observed),
        }


def verify_pattern_against_scan(fam, N: int, records: Sequence[SuperstableRecord],
                                q_max: Optional[int] = None) -> PatternReport:
    """Compare the descending order of scanned odd-period appearances with the pattern walk."""
    odd = [r for r in records if r.period % 2 == 1 and r.period >= 3]
    periods = {r.period for r in odd}
    if q_max is None:
        q_max = max(periods, default=0)
    missing = [q for q in range(3, q_max + 1, 2) if q not in periods]
    if missing or (3, 1) not in {(r.period, r.appearance) for r in odd}:
        raise CoverageError(f"records miss odd periods {missing or [3]} needed up to {q_max}")
    counts = {}
    for r in odd:
        counts[r.period] = max(counts.get(r.period, 0), r.appearance)
    expected = pattern_walk(N, q_max, counts)
    chosen = sorted((r for r in odd if r.appearance <= N and r.period <= q_max),
                    key=lambda r: r.parameter, reverse=True)
    observed = [(r.period, r.appearance) for r in chosen][:len(expected)]
    mismatch = next((i for i, (a, b) in enumerate(zip(expected, observed)) if a != b), None)
    if mismatch is None and len(observed) < len(expected):
        mismatch = len(observed)
    return PatternReport(N, q_max, expected, observed, mismatch is None, mismatch)


def scan_odd_records(fam, q_max: int, cfg: Optional[ScanConfig] = None) -> List[SuperstableRecord]:
    fam = get_family(fam)
    cfg = cfg or ScanConfig(*default_window(fam))
    return [r for q in range(3, q_max + 1, 2) for r in find_superstable(fam, q, cfg)]


# --- renormalisation ------------------------------------------------------------

def doubling_operator(psi: Callable, check_grid: int = 201) -> Callable:
    """The period-doubling renormalisation ``x -> -(1/a) psi(psi(-a x))`` with ``a = -psi(1)``."""
    if abs(psi(0.0) - 1.0) > 1e-12:
        raise NotRenormalizableError(f"psi(0) = {psi(0.0)} but must equal 1")
    a = -psi(1.0)
    b = psi(a)
    pb = psi(b)
    checks = [
        ("0 < psi(b)", 0.0 < pb),
        ("psi(b) < a", pb < a),
        ("a < b", a < b),
        ("b < 1", b < 1.0),
    ]
    for label, ok in checks:
        if not ok:
            raise NotRenormalizableError(f"rescaling condition fails: {label} (a={a}, b={b}, psi(b)={pb})")
    xs = np.linspace(-1.0, 1.0, check_grid)
    vals = np.array([psi(x) for x in xs])
    if np.any(np.abs(vals) > 1.0 + 1e-12):
        raise NotRenormalizableError("psi does not map [-1, 1] into itself")

    def renormalized(x):
        return -psi(psi(-a * x)) / a

    renormalized.scale = a
    return renormalized


@dataclass(frozen=True)
class UniversalFunctionSample:
    family: str
    q: int
    appearance: int
    depth: int
    scale: float
    grid: List[float]
    values: List[float]


def universal_function_approx(fam, q: int, j: int, n: int, grid: Sequence[float],
                              ladder: Optional[Sequence[float]] = None,
                              alpha: Optional[float] = None) -> UniversalFunctionSample:
    """Rescaled iterate ``alpha^n [f^{q 2^n}(x_max + x/alpha^n) - x_max]`` at the level n+1 parameter.

    Coordinates are centred on the critical point.  ``alpha`` defaults to the
    measured critical-distance ratio at the deepest level of the ladder.
    """
    fam = get_family(fam)
    if n < 0:
        raise DomainError("depth must be non-negative")
    if ladder is None or len(ladder) < n + 2:
        ladder = period_doubling_ladder(fam, q, j, max(n + 1, 2))
    if alpha is None:
        alpha = alpha_ratios(fam, q, j, ladder)[-1]
    c = fam.x_max
    scale = alpha ** n
    xs = np.asarray(grid, dtype=float)
    args = c + xs / scale
    bad = np.nonzero((args < 0.0) | (args > 1.0))[0]
    if bad.size:
        raise DomainError(f"rescaled argument leaves [0, 1] at grid point x = {xs[bad[0]]}")
    vals = scale * (iterate(fam, ladder[n + 1], args, q << n) - c)
    return UniversalFunctionSample(fam.kind, q, j, n, float(alpha), xs.tolist(), np.asarray(vals).tolist())
