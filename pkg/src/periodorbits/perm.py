"""Cyclic permutations, transition digraphs and forced periods.

A cyclic permutation ``p`` of ``{1..n}`` stands for an n-orbit
``b_1 < ... < b_n`` of an interval map with ``f(b_i) = b_{p[i]}``.  Taking
``b_i = i`` and joining the dots gives the L-map, whose periods are exactly the
periods forced by the orbit.  The intervals ``J_i = [i, i+1]`` form the
vertices of the transition digraph.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import FrozenSet, Iterable, Optional, Tuple

from .errors import DomainError
from .order import ascending_predecessor, decompose, sharkovskii_less


@dataclass(frozen=True, order=True)
class CyclicPermutation:
    """Image tuple with 1-based values; ``image[i-1]`` is the rank of ``f(b_i)``."""

    image: Tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        n = len(image)
        if n == 0 or sorted(image) != list(range(1, n + 1)):
            raise DomainError(f"{image} is not a permutation of 1..{n}")
        i, steps = 1, 0
        while True:
            i = image[i - 1]
            steps += 1
            if i == 1:
                break
        if steps != n:
            raise DomainError(f"{image} is not a single {n}-cycle")

    @classmethod
    def parse(cls, text: str) -> "CyclicPermutation":
        """Accept ``"4 5 7 6 3 2 1"``, ``"(4 5 7 6 3 2 1)"`` or comma separated."""
        cleaned = text.replace("(", " ").replace(")", " ").replace(",", " ")
        return cls(tuple(int(tok) for tok in cleaned.split()))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def __str__(self):
        return "(" + " ".join(map(str, self.image)) + ")"


def inverse(p: CyclicPermutation) -> CyclicPermutation:
    """Conjugate by the order-reversing flip ``i -> n+1-i``."""
    n = p.n
    return CyclicPermutation(tuple(n + 1 - p.image[n - i] for i in range(1, n + 1)))


def canonical(p: CyclicPermutation) -> CyclicPermutation:
    return min(p, inverse(p))


@dataclass(frozen=True)
class TransitionDigraph:
    n: int
    edges: FrozenSet[Tuple[int, int]]
    red: FrozenSet[Tuple[int, int]]

    @property
    def vertices(self) -> range:
        return range(1, self.n)

    def successors(self, i: int) -> Tuple[int, ...]:
        return tuple(sorted(s for (a, s) in self.edges if a == i))

    def loops(self) -> Tuple[int, ...]:
        return tuple(sorted(a for (a, s) in self.edges if a == s))

    def in_degree(self, s: int) -> int:
        return sum(1 for (_, b) in self.edges if b == s)

    def out_degree(self, i: int) -> int:
        return sum(1 for (a, _) in self.edges if a == i)

    def relabeled(self) -> "TransitionDigraph":
        """Apply ``J_i -> J_{n-i}``, the relabeling induced by the inverse."""
        n = self.n
        flip = lambda e: (n - e[0], n - e[1])  # noqa: E731
        return TransitionDigraph(n, frozenset(map(flip, self.edges)), frozenset(map(flip, self.red)))

    def as_json(self) -> dict:
        return {"edges": [list(e) for e in sorted(self.edges)], "red": [list(e) for e in sorted(self.red)]}


def build_digraph(p: CyclicPermutation) -> TransitionDigraph:
    n = p.n
    if n < 2:
        raise DomainError("a transition digraph needs n >= 2")
    edges, red = set(), set()
    for i in range(1, n):
        lo, hi = sorted((p(i), p(i + 1)))
        edges.update((i, s) for s in range(lo, hi))
        if hi - lo == 1:
            red.add((i, lo))
    return TransitionDigraph(n, frozenset(edges), frozenset(red))


def lmap_eval(p: CyclicPermutation, x) -> Fraction:
    """Exact value of the connect-the-dots map at a rational point of [1, n]."""
    x = Fraction(x)
    n = p.n
    if not 1 <= x <= n:
        raise DomainError(f"x = {x} lies outside [1, {n}]")
    i = min(int(x), n - 1) if n > 1 else 1
    if n == 1:
        return Fraction(p(1))
    a, b = p(i), p(i + 1)
    return a + (b - a) * (x - i)


# --- forced periods -------------------------------------------------------

def _matmul(a, b):
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def _mobius(k: int) -> int:
    result, d = 1, 2
    while d * d <= k:
        if k % d == 0:
            k //= d
            if k % d == 0:
                return 0
            result = -result
        d += 1
    return -result if k > 1 else result


def _divisors(m: int):
    return [d for d in range(1, m + 1) if m % d == 0]


class _Walks:
    """Closed-walk bookkeeping for one permutation."""

    def __init__(self, p: CyclicPermutation):
        self.p = p
        n = self.n = p.n
        self.slope = [0] + [p(i + 1) - p(i) for i in range(1, n)]
        k = n - 1
        self.adj = [[0] * k for _ in range(k)]
        for i in range(1, n):
            lo, hi = sorted((p(i), p(i + 1)))
            for s in range(lo, hi):
                self.adj[i - 1][s - 1] = 1
        self._traces = {}
        self._power = None

    def trace(self, d: int) -> int:
        # closed walks of length d, counted with their starting vertex
        if d not in self._traces:
            if self._power is None:
                self._power = [1, self.adj]
            while len(self._power) <= d:
                self._power.append(_matmul(self._power[-1], self.adj))
            m = self._power[d]
            self._traces[d] = sum(m[i][i] for i in range(len(m)))
        return self._traces[d]

    def primitive(self, m: int) -> int:
        return sum(_mobius(m // d) * self.trace(d) for d in _divisors(m))

    def orbit_walks(self, d: int) -> int:
        """Closed walks of length d whose cylinder's fixed point is an orbit point.

        Only walks with expanding slope product are counted; for those the
        fixed point is unique, so it is an orbit point exactly when some orbit
        point follows the walk.
        """
        n, p, adj = self.n, self.p, self.adj
        if d % n:
            return 0
        total = 0
        for start in range(1, n + 1):
            pts = [start]
            for _ in range(d - 1):
                pts.append(p(pts[-1]))
            choices = [[v for v in (x - 1, x) if 1 <= v <= n - 1] for x in pts]
            total += self._count_cycles(choices, expanding=False) - self._count_cycles(choices, expanding=True)
        return total

    def _count_cycles(self, choices, expanding):
        # closed sequences through the candidate vertices along the edges;
        # with expanding=True only slope +-1 vertices are allowed
        adj, slope = self.adj, self.slope
        allowed = [[v for v in c if not expanding or abs(slope[v]) == 1] for c in choices]
        total = 0
        for v0 in allowed[0]:
            ways = {v0: 1}
            for layer in allowed[1:]:
                ways = {w: sum(c for v, c in ways.items() if adj[v - 1][w - 1]) for w in layer}
            total += sum(c for v, c in ways.items() if adj[v - 1][v0 - 1])
        return total

    def reflection_periods(self) -> set:
        """Periods ``2k`` produced by red cycles of length k with negative slope product."""
        red_next = {}
        for i in range(1, self.n):
            if abs(self.slope[i]) == 1:
                red_next[i] = min(self.p(i), self.p(i + 1))
        out = set()
        seen = set()
        for start in red_next:
            if start in seen:
                continue
            path, v = [], start
            while v in red_next and v not in path:
                path.append(v)
                v = red_next[v]
            seen.update(path)
            if v in path:
                cycle = path[path.index(v):]
                sign = 1
                for u in cycle:
                    sign *= 1 if self.slope[u] > 0 else -1
                if sign < 0:
                    out.add(2 * len(cycle))
        return out

    def has_period(self, m: int) -> bool:
        if m == self.n:
            return True
        genuine = self.primitive(m)
        if m % self.n == 0:
            genuine -= sum(_mobius(m // d) * self.orbit_walks(d) for d in _divisors(m) if d % self.n == 0)
        return genuine > 0 or m in self.reflection_periods()


def has_least_period(p: CyclicPermutation, m: int) -> bool:
    """Whether the L-map of ``p`` has a point of least period ``m``."""
    if m < 1:
        raise DomainError("period must be positive")
    if p.n == 1:
        return m == 1
    return _Walks(p).has_period(m)


def least_periods(p: CyclicPermutation, ms: Iterable[int]) -> dict:
    walks = _Walks(p)
    return {m: (m == 1 if p.n == 1 else walks.has_period(m)) for m in ms}


def _odd_cover_bound(n: int) -> int:
    # any odd part realised by the L-map is realised by one at most 2n+1,
    # and forcing propagates upward in the odd part, so probing there is enough
    r = 2 * n + 1
    return r if r % 2 else r + 1


def is_minimal(p: CyclicPermutation) -> bool:
    """True when ``n`` is the largest period of the L-map in the Sharkovskii order."""
    n, s, q = decompose(p.n)
    walks = _Walks(p)
    if q == 1:
        return n == 1 or not walks.has_period(2 * n)
    probes = [(qq << s) for qq in range(3, q, 2)]
    if s > 0:
        probes.append(_odd_cover_bound(n) << (s - 1))
    return not any(walks.has_period(m) for m in probes)


def is_second_minimal(p: CyclicPermutation) -> bool:
    """True when the largest period of the L-map is the predecessor of ``n``.

    For odd ``n`` this means a point of period ``n-2`` and none of odd period
    ``3 .. n-4``.
    """
    n, s, q = decompose(p.n)
    walks = _Walks(p)
    if s == 0:
        if n < 7:
            raise DomainError(f"second minimality needs odd n >= 7, got {n}")
        return walks.has_period(n - 2) and not walks.has_period(n - 4)
    k = ascending_predecessor(n)
    if k is None:
        raise DomainError(f"{n} has no immediate predecessor in the Sharkovskii order")
    if not walks.has_period(k):
        return False
    _, ks, kq = decompose(k)
    if kq == 1:
        return not walks.has_period(2 * k)
    probes = [(qq << ks) for qq in range(3, kq, 2)]
    if ks > 0:
        probes.append(_odd_cover_bound(n) << (ks - 1))
    return not any(walks.has_period(m) for m in probes)


def shape_signature(p: CyclicPermutation) -> str:
    """Sequence of turning points of the L-map, e.g. ``"max-min-max"``."""
    labels = []
    prev = None
    for i in range(1, p.n):
        up = p(i + 1) > p(i)
        if prev is not None and up != prev:
            labels.append("min" if up else "max")
        prev = up
    return "-".join(labels) if labels else "monotone"


TABLE_SECOND_MINIMAL_7 = tuple(
    CyclicPermutation(t)
    for t in (
        (4, 5, 7, 6, 3, 2, 1),
        (3, 7, 5, 6, 4, 2, 1),
        (6, 4, 7, 5, 3, 2, 1),
        (7, 4, 6, 5, 3, 1, 2),
        (4, 6, 7, 5, 2, 3, 1),
        (4, 6, 7, 5, 3, 1, 2),
        (4, 7, 6, 5, 2, 1, 3),
        (3, 7, 6, 5, 2, 4, 1),
        (4, 7, 5, 6, 2, 3, 1),
    )
)


def stefan(n: int) -> CyclicPermutation:
    """The Stefan cycle of odd period ``n`` in the orientation with a single maximum."""
    if n < 3 or n % 2 == 0:
        raise DomainError("Stefan cycles have odd period >= 3")
    k = (n + 1) // 2
    order = [k]
    for step in range(1, n):
        order.append(k + (step + 1) // 2 if step % 2 else k - step // 2)
    image = [0] * n
    for a, b in zip(order, order[1:] + order[:1]):
        image[a - 1] = b
    return CyclicPermutation(tuple(image))


def match_catalog(p: CyclicPermutation) -> Optional[int]:
    """Position (1-based) of ``p`` in the catalogue of second minimal 7-cycles."""
    if p.n != 7:
        return None
    key = canonical(p)
    for idx, entry in enumerate(TABLE_SECOND_MINIMAL_7, 1):
        if canonical(entry) == key:
            return idx
    return None
