"""Unimodal families, superstable parameters and their orbits."""

import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Tuple

import numpy as np

from .errors import DegeneracyError, DomainError, PartialLadderError
from .perm import CyclicPermutation


@dataclass(frozen=True)
class UnimodalFamily:
    kind: str
    x_max: float
    _f: Callable = field(repr=False, compare=False)

    def __call__(self, lam, x):
        return self._f(lam, x)


_CUBIC = 1.5 * math.sqrt(3.0)

FAMILIES = {
    "logistic": UnimodalFamily("logistic", 0.5, lambda lam, x: 4.0 * lam * x * (1.0 - x)),
    "sine": UnimodalFamily("sine", 0.5, lambda lam, x: lam * np.sin(np.pi * x)),
    "cubic": UnimodalFamily("cubic", 1.0 / math.sqrt(3.0), lambda lam, x: _CUBIC * lam * x * (1.0 - x * x)),
    "quartic": UnimodalFamily("quartic", 0.5, lambda lam, x: lam - lam * (2.0 * x - 1.0) ** 4),
}


def get_family(fam) -> UnimodalFamily:
    if isinstance(fam, UnimodalFamily):
        return fam
    try:
        return FAMILIES[fam]
    except KeyError:
        raise DomainError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}") from None


def family_eval(fam, lam: float, x: float) -> float:
    fam = get_family(fam)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x = {x} outside [0, 1]")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"parameter {lam} outside [0, 1]")
    return float(fam(lam, x))


def iterate(fam, lam, x, k: int):
    """``f_lam^k(x)``; works elementwise on arrays."""
    fam = get_family(fam)
    for _ in range(k):
        x = fam(lam, x)
    return x


def superstable_residual(fam, lam, p: int):
    fam = get_family(fam)
    return iterate(fam, lam, fam.x_max, p) - fam.x_max


@dataclass(frozen=True)
class ScanConfig:
    lo: float
    hi: float
    grid_density: Optional[float] = None
    refine_tolerance: float = 1e-14
    separation: float = 1e-10
    merge_tolerance: float = 1e-12
    period_tolerance: float = 1e-9

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty window [{self.lo}, {self.hi}]")
        if self.refine_tolerance <= 0:
            raise DomainError("refine tolerance must be positive")

    def density(self, p: int) -> float:
        return self.grid_density if self.grid_density else max(2.0**14, 512.0 * p)


@dataclass(frozen=True)
class SuperstableRecord:
    family: str
    period: int
    parameter: float
    appearance: int
    orbit: Tuple[float, ...]
    residual: float

    @property
    def label(self) -> str:
        return f"{self.period}_{self.appearance}"


def _grid(cfg: ScanConfig, p: int) -> np.ndarray:
    count = int(math.ceil((cfg.hi - cfg.lo) * cfg.density(p))) + 1
    return np.linspace(cfg.lo, cfg.hi, max(count, 2))


def _bisect(fam, p, lo, hi, flo, tol):
    # vectorised bisection over all brackets at once
    lo, hi, flo = lo.copy(), hi.copy(), flo.copy()
    while True:
        width = hi - lo
        if not np.any(width > tol):
            break
        mid = 0.5 * (lo + hi)
        stalled = (mid <= lo) | (mid >= hi)
        fmid = superstable_residual(fam, mid, p)
        left = np.sign(fmid) == np.sign(flo)
        move = left & ~stalled
        lo = np.where(move, mid, lo)
        flo = np.where(move, fmid, flo)
        hi = np.where(~left & ~stalled, mid, hi)
        hi = np.where(fmid == 0, mid, hi)
        lo = np.where(fmid == 0, mid, lo)
        if np.all(stalled | (hi - lo <= tol)):
            break
    return 0.5 * (lo + hi)


def _roots(fam, p, cfg: ScanConfig, chunk=1 << 16) -> np.ndarray:
    grid = _grid(cfg, p)
    vals = np.concatenate([superstable_residual(fam, grid[i:i + chunk], p) for i in range(0, grid.size, chunk)])
    exact = grid[vals == 0.0]
    sign = np.sign(vals)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    found = _bisect(fam, p, grid[idx], grid[idx + 1], vals[idx], cfg.refine_tolerance) if idx.size else np.empty(0)
    roots = np.sort(np.concatenate([found, exact]))
    if roots.size == 0:
        return roots
    keep = [roots[0]]
    for r in roots[1:]:
        if r - keep[-1] > cfg.merge_tolerance:
            keep.append(r)
    return np.array(keep)


def orbit_of_critical(fam, lam: float, p: int) -> List[float]:
    fam = get_family(fam)
    x, pts = fam.x_max, []
    for _ in range(p):
        pts.append(float(x))
        x = fam(lam, x)
    return pts


def minimal_period_ok(fam, lam: float, p: int, tol: float) -> bool:
    fam = get_family(fam)
    pts = orbit_of_critical(fam, lam, p)
    c = fam.x_max
    return all(abs(pts[d] - c) > tol for d in range(1, p) if p % d == 0)


def find_superstable(fam, p: int, cfg: ScanConfig) -> List[SuperstableRecord]:
    """All superstable parameters of least period ``p`` in the window, ranked by parameter."""
    fam = get_family(fam)
    if p < 1:
        raise DomainError("period must be positive")
    records = []
    for lam in _roots(fam, p, cfg):
        lam = float(lam)
        if not minimal_period_ok(fam, lam, p, cfg.period_tolerance):
            continue
        orbit = tuple(sorted(orbit_of_critical(fam, lam, p)))
        res = float(superstable_residual(fam, lam, p))
        records.append(SuperstableRecord(fam.kind, p, lam, len(records) + 1, orbit, res))
    return records


def orbit_permutation(rec: SuperstableRecord, separation: float = 1e-10) -> CyclicPermutation:
    """Rank permutation of the numeric superstable orbit."""
    fam = get_family(rec.family)
    pts = sorted(orbit_of_critical(fam, rec.parameter, rec.period))
    gaps = np.diff(pts)
    if gaps.size and gaps.min() < separation:
        raise DegeneracyError(f"orbit points of {rec.label} closer than {separation}")
    images = [float(fam(rec.parameter, x)) for x in pts]
    image = []
    for y in images:
        k = int(np.argmin([abs(y - x) for x in pts]))
        image.append(k + 1)
    return CyclicPermutation(tuple(image))


def itinerary(fam, lam: float, p: int) -> str:
    """Kneading word of the critical orbit: L/R for ``f^k(x_max)``, k = 1..p-1."""
    fam = get_family(fam)
    pts = orbit_of_critical(fam, lam, p)
    return "".join("R" if x > fam.x_max else "L" for x in pts[1:])


def doubled_itinerary(word: str) -> str:
    """Word of the period-doubled copy, the product of the period-2 word ``R`` with ``word``."""
    flip = {"L": "R", "R": "L"}
    return "R" + "".join(flip[b] + "R" for b in word)


def default_window(fam) -> Tuple[float, float]:
    """Appearance window from just above the period-doubling limit up to the period-3 window."""
    fam = get_family(fam)
    if fam.kind == "logistic":
        return 0.8925, 0.9580
    return _computed_window(fam.kind)


_WINDOWS = {}


def _computed_window(kind):
    if kind not in _WINDOWS:
        fam = FAMILIES[kind]
        three = find_superstable(fam, 3, ScanConfig(0.5, 1.0))
        top = three[0].parameter
        lam = 0.5
        # follow the doubling cascade 1, 2, 4, 8, 16 from below
        for s in range(5):
            recs = find_superstable(fam, 2**s, ScanConfig(lam, top, grid_density=2.0**16))
            lam = recs[0].parameter
        _WINDOWS[kind] = (lam, top + 1e-6)
    return _WINDOWS[kind]


def period_doubling_ladder(fam, q: int, j: int, s_max: int, cfg: Optional[ScanConfig] = None,
                           points: int = 40000) -> List[float]:
    """Parameters of the superstable ``2^s q`` orbits continuing the window ``q_j``.

    Level ``s`` is the orbit whose kneading word is the period-doubled copy of
    the word at level ``s-1``.  Windows sit below their parent for odd ``q > 1``
    and above it for the pure doubling cascade ``q = 1``.
    """
    fam = get_family(fam)
    if cfg is None:
        cfg = ScanConfig(*default_window(fam))
    if q == 1:
        base = find_superstable(fam, 1, ScanConfig(0.0 + 1e-9, cfg.hi))
    else:
        base = find_superstable(fam, q, cfg)
    if len(base) < j:
        raise PartialLadderError(f"no appearance {q}_{j} in the window", [])
    lams = [base[j - 1].parameter]
    word = itinerary(fam, lams[0], q)
    upward = q == 1
    for s in range(1, s_max + 1):
        p = q << s
        target = doubled_itinerary(word)
        prev = lams[-1]
        if s == 1:
            lo, hi = (prev, cfg.hi) if upward else (cfg.lo, prev)
            sub = ScanConfig(lo, hi, cfg.grid_density, cfg.refine_tolerance, cfg.separation,
                             cfg.merge_tolerance, cfg.period_tolerance)
        else:
            gap = abs(lams[-1] - lams[-2])
            lo, hi = (prev, prev + gap) if upward else (prev - gap, prev)
            sub = ScanConfig(lo, hi, points / gap, cfg.refine_tolerance, cfg.separation,
                             cfg.merge_tolerance, cfg.period_tolerance)
        match = [r for r in find_superstable(fam, p, sub) if itinerary(fam, r.parameter, p) == target]
        if not match:
            raise PartialLadderError(f"no {p}-orbit continuing {q}_{j} at level {s}", lams)
        pick = match[0] if upward else match[-1]
        lams.append(pick.parameter)
        word = target
    return lams
