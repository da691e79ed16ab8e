"""Query graph over a concept class, with exact edge weights.

The directed edge weight d(A, B) is the expected dimension drop when a
learner queries hypothesis A, the hidden target is B, and a teacher
draws the counterexample point from mu conditioned on the symmetric
difference of A and B. Each counterexample at point a carries the
target's label, so the term for a is the drop of the restriction to
a = B(a), weighted by mu(a) within the difference.

Two exact facts drive query selection:

* for distinct A and B, d(A, B) + d(B, A) >= 1, hence
* the concept maximizing the minimum outgoing weight has query rank
  at least 1/2.

Querying that maximizer therefore costs the adversary at least half a
dimension level per counterexample in expectation, which is what bounds
the learner's expected counterexample count by twice the dimension.

:class:`QueryGraph` evaluates weights lazily, memoizes per subclass of a
root class (subclasses encoded as index bitmasks, shared with
:class:`~thicket.littlestone.LdimCache`), and exposes the max-min query
choice with lowest-index tie-breaking.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .concepts import Concept, ConceptClass
from .littlestone import LdimCache

__all__ = [
    "QueryGraph",
    "edge_weight",
    "find_deficient_cycle",
    "max_min_query",
    "query_rank",
]

_HALF = Fraction(1, 2)


class QueryGraph:
    """Lazy edge-weight and query-selection engine for one root class.

    All methods take a subclass bitmask (see LdimCache) so the learner
    can keep using one engine while it restricts the class; the module
    level functions below wrap the common whole-class case.
    """

    def __init__(self, root: ConceptClass, cache: LdimCache | None = None) -> None:
        if cache is not None and cache.root != root:
            raise ValueError("cache was built for a different root class")
        self.root = root
        self.cache = cache if cache is not None else LdimCache(root)
        self._diffs: dict[tuple[int, int], tuple[int, ...]] = {}
        self._weights: dict[tuple[int, int, int], Fraction] = {}
        self._best: dict[int, int] = {}

    def diff_points(self, i: int, j: int) -> tuple[int, ...]:
        """Point indices where concepts i and j disagree (order-insensitive)."""
        key = (i, j) if i < j else (j, i)
        hit = self._diffs.get(key)
        if hit is None:
            a = self.root.concepts[key[0]].bits
            b = self.root.concepts[key[1]].bits
            hit = tuple(p for p in range(len(a)) if a[p] != b[p])
            self._diffs[key] = hit
        return hit

    def weight(self, mask: int, i: int, j: int) -> Fraction:
        """d(concepts[i], concepts[j]) within the subclass `mask`."""
        if i == j:
            raise ValueError("edge weight is undefined for identical concepts")
        key = (mask, i, j)
        hit = self._weights.get(key)
        if hit is not None:
            return hit
        cache = self.cache
        d_here = cache.ldim_mask(mask)
        mu = self.root.domain.mu
        target_bits = self.root.concepts[j].bits
        num = Fraction(0)
        den = Fraction(0)
        for p in self.diff_points(i, j):
            w = mu[p]
            sub = cache.restrict_mask(mask, p, target_bits[p])
            num += w * (d_here - cache.ldim_mask(sub))
            den += w
        value = num / den
        self._weights[key] = value
        return value

    def rank(self, mask: int, i: int) -> Fraction | float:
        """Minimum outgoing weight of concepts[i]; +inf when it is alone."""
        best: Fraction | float = math.inf
        rest = mask & ~(1 << i)
        while rest:
            j = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            w = self.weight(mask, i, j)
            if w < best:
                best = w
        return best

    def best_query(self, mask: int) -> int:
        """Index of the max-min query in the subclass, lowest index on ties."""
        if mask == 0:
            raise ValueError("no query exists for the empty class")
        hit = self._best.get(mask)
        if hit is not None:
            return hit
        best_i = -1
        best_rank: Fraction | float | None = None
        todo = mask
        while todo:
            i = (todo & -todo).bit_length() - 1
            todo &= todo - 1
            rank: Fraction | float = math.inf
            beaten = False
            rest = mask & ~(1 << i)
            while rest:
                j = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                w = self.weight(mask, i, j)
                if w < rank:
                    rank = w
                    # a running minimum at or below the incumbent cannot win
                    if best_rank is not None and rank <= best_rank:
                        beaten = True
                        break
            if not beaten and (best_rank is None or rank > best_rank):
                best_i = i
                best_rank = rank
        self._best[mask] = best_i
        return best_i


def _whole(concept_class: ConceptClass, graph: QueryGraph | None) -> tuple[QueryGraph, int]:
    if graph is None:
        graph = QueryGraph(concept_class)
        return graph, graph.cache.full_mask
    return graph, graph.cache.mask_of(concept_class)


def edge_weight(
    concept_class: ConceptClass,
    a: Concept,
    b: Concept,
    graph: QueryGraph | None = None,
) -> Fraction:
    """Exact d(a, b) in the given class. Requires a != b, both members."""
    graph, mask = _whole(concept_class, graph)
    return graph.weight(mask, graph.root.index_of(a), graph.root.index_of(b))


def query_rank(
    concept_class: ConceptClass,
    a: Concept,
    graph: QueryGraph | None = None,
) -> Fraction | float:
    """Minimum weight over edges leaving `a`; +inf in a singleton class."""
    graph, mask = _whole(concept_class, graph)
    return graph.rank(mask, graph.root.index_of(a))


def max_min_query(
    concept_class: ConceptClass,
    graph: QueryGraph | None = None,
) -> Concept:
    """The concept with maximal query rank, lowest class index on ties."""
    graph, mask = _whole(concept_class, graph)
    return graph.root.concepts[graph.best_query(mask)]


def find_deficient_cycle(
    concept_class: ConceptClass,
    max_len: int = 5,
    graph: QueryGraph | None = None,
) -> tuple[Concept, ...] | None:
    """Search for a directed cycle whose edges all weigh at most 1/2,
    at least one strictly below.

    Such a cycle would let an adversary rotate the target forever while
    the class dimension drops by less than one per two queries, so none
    can exist; the search is the falsifiable check of that claim. Simple
    cycles up to `max_len` vertices are enumerated, each started from its
    smallest vertex. Returns the cycle's concepts in order, or None.
    """
    if max_len < 2:
        raise ValueError("a cycle needs at least 2 vertices")
    graph, mask = _whole(concept_class, graph)
    indices = [i for i in range(len(graph.root.concepts)) if mask >> i & 1]
    light: dict[int, list[int]] = {i: [] for i in indices}
    strict: set[tuple[int, int]] = set()
    for i in indices:
        for j in indices:
            if i == j:
                continue
            w = graph.weight(mask, i, j)
            if w <= _HALF:
                light[i].append(j)
                if w < _HALF:
                    strict.add((i, j))

    def walk(start: int, here: int, seen: set[int], path: list[int], any_strict: bool):
        for nxt in light[here]:
            if nxt == start and len(path) >= 2:
                if any_strict or (here, start) in strict:
                    return path
            elif nxt > start and nxt not in seen and len(path) < max_len:
                found = walk(
                    start, nxt, seen | {nxt}, path + [nxt],
                    any_strict or (here, nxt) in strict,
                )
                if found:
                    return found
        return None

    for start in indices:
        cycle = walk(start, start, {start}, [start], False)
        if cycle:
            return tuple(graph.root.concepts[i] for i in cycle)
    return None
