"""Enumeration of minimal and second minimal cyclic permutations up to inverse."""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

from .errors import DomainError, ResourceError
from .order import ascending_predecessor, decompose
from .perm import (
    CyclicPermutation,
    TransitionDigraph,
    build_digraph,
    inverse,
    is_minimal,
    is_second_minimal,
    match_catalog,
    shape_signature,
)

MAX_PERIOD = 13
PREDICATES = ("minimal", "second_minimal")


@dataclass(frozen=True)
class OrbitClass:
    representative: CyclicPermutation
    inverse_representative: CyclicPermutation
    type_index: Optional[int]
    shape: str

    @property
    def digraph(self) -> TransitionDigraph:
        return build_digraph(self.representative)

    def as_json(self) -> dict:
        return {
            "representative": list(self.representative.image),
            "inverse": list(self.inverse_representative.image),
            "shape": self.shape,
            "type_index": self.type_index,
            "digraph": self.digraph.as_json(),
        }


def _odd_walk(out, k, m):
    """Closed walk of odd length m through at least two of the k vertices.

    ``out[v]`` is the successor bitmask of vertex v (0-based).  For odd m below
    the orbit period this is exactly the least-period test.
    """
    for v in range(k):
        s = out[v] & ~(1 << v)
        for _ in range(m - 1):
            t = 0
            while s:
                low = s & -s
                t |= out[low.bit_length() - 1]
                s ^= low
            s = t
        if s >> v & 1:
            return True
    return False


def _three_walk_through(out, v):
    # closed walk v -> w -> x -> v, not the triple loop
    bit_v = 1 << v
    ws = out[v]
    while ws:
        low = ws & -ws
        w = low.bit_length() - 1
        ws ^= low
        xs = out[w]
        while xs:
            lx = xs & -xs
            x = lx.bit_length() - 1
            xs ^= lx
            if out[x] & bit_v and not (w == v and x == v):
                return True
    return False


class _Search:
    """Depth-first search over cyclic permutations, one image value at a time."""

    def __init__(self, n, predicate):
        self.n = n
        self.predicate = predicate
        _, self.s, self.q = decompose(n)
        # the 3-walk prune applies whenever period 3 is excluded by the predicate
        self.prune3 = not (predicate == "minimal" and n == 3) and not (
            predicate == "second_minimal" and n == 5
        )
        self.found = []

    def _leaf_ok(self, image, out):
        n, k = self.n, self.n - 1
        if self.predicate == "second_minimal" and self.s == 0:
            if _odd_walk(out, k, n - 4) or not _odd_walk(out, k, n - 2):
                return False
            return True
        if self.predicate == "minimal" and self.s == 0 and n >= 5:
            return not _odd_walk(out, k, n - 2)
        if self.predicate == "minimal" and self.s >= 1 and self.q >= 3:
            if self.s == 1 and _odd_walk(out, k, 2 * n + 1):
                return False
        p = CyclicPermutation(tuple(image))
        return is_minimal(p) if self.predicate == "minimal" else is_second_minimal(p)

    def run(self, prefix=()):
        n = self.n
        image = [0] * (n + 1)
        used = [False] * (n + 1)
        begin = list(range(n + 1))
        end = list(range(n + 1))
        out = [0] * (n - 1)
        # replay the prefix
        for i, v in enumerate(prefix, 1):
            if not self._place(i, v, image, used, begin, end, out):
                return self.found
        self._dfs(len(prefix) + 1, image, used, begin, end, out)
        return self.found

    def _place(self, i, v, image, used, begin, end, out):
        n = self.n
        if used[v] or v == i:
            return False
        if end[v] == i and i != n:
            return False
        image[i] = v
        used[v] = True
        b, e = begin[i], end[v]
        end[b], begin[e] = e, b
        if i >= 2:
            lo, hi = sorted((image[i - 1], v))
            out[i - 2] = ((1 << (hi - 1)) - 1) ^ ((1 << (lo - 1)) - 1)
            if self.prune3 and _three_walk_through(out, i - 2):
                return False
        return True

    def _dfs(self, i, image, used, begin, end, out):
        n = self.n
        if i > n:
            # closing the cycle is guaranteed by the chain bookkeeping
            if self._leaf_ok(image[1:], out):
                self.found.append(tuple(image[1:]))
            return
        for v in range(1, n + 1):
            if used[v] or v == i:
                continue
            if end[v] == i and i != n:
                continue
            saved = (begin[i], end[v], begin[end[v]], end[begin[i]])
            b, e = begin[i], end[v]
            if self._place(i, v, image, used, begin, end, out):
                self._dfs(i + 1, image, used, begin, end, out)
            image[i] = 0
            used[v] = False
            if i >= 2:
                out[i - 2] = 0
            end[b], begin[e] = saved[3], saved[2]


def _run_task(args):
    n, predicate, prefix = args
    return _Search(n, predicate).run(prefix)


def enumerate_permutations(n: int, predicate: str, workers: Optional[int] = None) -> List[CyclicPermutation]:
    """All cyclic n-permutations satisfying the predicate, sorted."""
    if predicate not in PREDICATES:
        raise DomainError(f"unknown predicate {predicate!r}")
    if n > MAX_PERIOD:
        raise ResourceError(f"enumeration beyond period {MAX_PERIOD} is refused ({n - 1}! cyclic candidates)")
    if n < 2:
        raise DomainError("period must be at least 2")
    if predicate == "second_minimal" and n % 2 and n < 7:
        raise DomainError(f"second minimality needs odd n >= 7, got {n}")
    if predicate == "second_minimal" and n % 2 == 0 and ascending_predecessor(n) is None:
        raise DomainError(f"{n} has no immediate predecessor in the Sharkovskii order")
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or n < 8:
        images = _Search(n, predicate).run()
    else:
        tasks = [(n, predicate, (a,)) for a in range(2, n + 1)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            images = [im for part in pool.map(_run_task, tasks) for im in part]
    return sorted(CyclicPermutation(im) for im in images)


def enumerate_classes(n: int, predicate: str, workers: Optional[int] = None) -> List[OrbitClass]:
    """Inverse-merged classes, each keyed by its lexicographically smaller member."""
    seen = {}
    for p in enumerate_permutations(n, predicate, workers):
        inv = inverse(p)
        rep = min(p, inv)
        if rep not in seen:
            other = max(p, inv)
            seen[rep] = OrbitClass(rep, other, match_catalog(rep), shape_signature(rep))
    return [seen[k] for k in sorted(seen)]


def count_minimal_double_odd_types(k: int = 2, workers: Optional[int] = None) -> int:
    """Digraph types of minimal 2(2k+1)-cycles, merging a digraph with its relabeling."""
    if k < 1:
        raise DomainError("k must be positive")
    if k > 2:
        raise ResourceError("only k = 2 (period 10) is within the enumeration budget")
    n = 2 * (2 * k + 1)
    types = set()
    for p in enumerate_permutations(n, "minimal", workers):
        g = build_digraph(p)
        h = g.relabeled()
        key = min((sorted(g.edges), sorted(g.red)), (sorted(h.edges), sorted(h.red)))
        types.add((tuple(key[0]), tuple(key[1])))
    return len(types)
