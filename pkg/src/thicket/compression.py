"""Sample compression sized by the class dimension, with d + 1 decoders.

A labeled sample realizable by a class of dimension d compresses to an
ordered tuple of exactly d of its own points (no extra label bits). The
compressor greedily restricts: while the sample is not exceptional for
the current class, it pins the first sample point (in domain order)
whose labeled restriction strictly drops the dimension. A full run pins
d points whose positively labeled prefix and negatively labeled suffix
pin down a single concept, so a threshold decoder recovers it. A run
that halts early, on a sample exceptional for the current class, emits
fewer points; the tuple is then padded with duplicates arranged so that
the duplication pattern itself encodes where the positive block ends,
and the decoder finishes with the canonical partial labeling of the
decoded restriction, which extends every exceptional sample.

Reconstruction needs d + 1 functions rho_0 .. rho_d: on a tuple of d
distinct points, rho_i reads the first i as positive and the rest as
negative. Duplicated tuples reach only rho_0 and rho_1, which double as
the early-halt decoders. All-equal tuples are shared between exceptional
empty runs and one-point encodings; the label that keeps the class
dimension at the repeated point (at most one exists) settles who decodes
what.

`certify_scheme` replays every realizable sample of every nonempty point
subset through compression and reconstruction and reports violations,
none of which should exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Sequence

from .concepts import Concept, ConceptClass, PartialAssignment
from .littlestone import LdimCache, canonical_partial

__all__ = [
    "CompressionReport",
    "GreedyRun",
    "Reconstructor",
    "build_reconstructors",
    "certify_scheme",
    "compress",
    "greedy_run",
]

Reconstructor = Callable[[Sequence[str]], Concept]


def _check_sample(concept_class: ConceptClass, sample: PartialAssignment) -> None:
    if len(concept_class) == 0:
        raise ValueError("the empty class has no compression scheme")
    if not sample:
        raise ValueError("cannot compress an empty sample")
    for point, label in sample.items():
        concept_class.domain.index(point)
        if label not in (0, 1):
            raise ValueError(f"sample labels must be 0 or 1, got {label!r}")
    if not any(
        all(c.value(p) == v for p, v in sample.items()) for c in concept_class.concepts
    ):
        raise ValueError("sample is not realizable by the class")


@dataclass(frozen=True)
class GreedyRun:
    """Outcome of the greedy restriction pass over one sample.

    `ones` and `zeros` list the pinned points carrying labels 1 and 0,
    in the order they were chosen; `completed` tells whether the run
    performed all d steps (False means it halted on an exceptional
    sample, possibly immediately).
    """

    ones: tuple[str, ...]
    zeros: tuple[str, ...]
    completed: bool


def greedy_run(
    concept_class: ConceptClass,
    sample: PartialAssignment,
    cache: LdimCache | None = None,
) -> GreedyRun:
    """Run the greedy dimension-dropping pass; see the module docstring."""
    _check_sample(concept_class, sample)
    if cache is None:
        cache = LdimCache(concept_class)
    mask = cache.mask_of(concept_class)
    d = cache.ldim_mask(mask)
    domain = concept_class.domain
    in_sample = [(p, domain.index(p), sample[p]) for p in domain.points if p in sample]
    ones: list[str] = []
    zeros: list[str] = []
    for _ in range(d):
        here = cache.ldim_mask(mask)
        chosen = None
        for point, p, label in in_sample:
            sub = cache.restrict_mask(mask, p, label)
            if cache.ldim_mask(sub) < here:
                chosen = (point, label, sub)
                break
        if chosen is None:
            # every labeled restriction keeps the dimension: exceptional
            return GreedyRun(tuple(ones), tuple(zeros), False)
        point, label, mask = chosen
        (ones if label == 1 else zeros).append(point)
    return GreedyRun(tuple(ones), tuple(zeros), True)


def compress(
    concept_class: ConceptClass,
    sample: PartialAssignment,
    cache: LdimCache | None = None,
) -> tuple[str, ...]:
    """Compress a realizable nonempty sample to exactly d sample points.

    Full runs emit their pinned points, positives first. Early halts pad
    with duplicates: a nonempty positive block emits
    (ones..., ones[0], zeros..., ones[0]...), an all-negative block emits
    (zeros..., zeros[0], zeros[0]...), and an immediate halt repeats the
    first sample point in domain order d times.
    """
    if cache is None:
        cache = LdimCache(concept_class)
    run = greedy_run(concept_class, sample, cache)
    d = cache.ldim_mask(cache.mask_of(concept_class))
    if run.completed:
        return run.ones + run.zeros
    if run.ones:
        out = run.ones + (run.ones[0],) + run.zeros
        return out + (run.ones[0],) * (d - len(out))
    if run.zeros:
        out = run.zeros + (run.zeros[0],)
        return out + (run.zeros[0],) * (d - len(out))
    first = next(p for p in concept_class.domain.points if p in sample)
    return (first,) * d


def build_reconstructors(
    concept_class: ConceptClass,
    cache: LdimCache | None = None,
) -> tuple[Reconstructor, ...]:
    """The d + 1 reconstruction functions of the class, rho_0 .. rho_d.

    Each is total on length-d point tuples. For every realizable
    nonempty sample f, at least one of them satisfies
    rho(compress(C, f)) restricted to dom(f) == f.
    """
    if len(concept_class) == 0:
        raise ValueError("the empty class has no compression scheme")
    if cache is None:
        cache = LdimCache(concept_class)
    root_mask = cache.mask_of(concept_class)
    d = cache.ldim_mask(root_mask)
    domain = concept_class.domain
    concepts = concept_class.concepts
    if d == 0:
        only = concepts[0]

        def rho_trivial(points: Sequence[str]) -> Concept:
            if len(points) != 0:
                raise ValueError("expected an empty tuple for a dimension-0 class")
            return only

        return (rho_trivial,)

    default = concepts[0]
    canon_cache: dict[int, Concept | None] = {}

    def canon_extension(mask: int) -> Concept | None:
        """Canonical partial labeling of the subclass, extended by 0."""
        if mask in canon_cache:
            return canon_cache[mask]
        if mask == 0:
            canon_cache[mask] = None
            return None
        sub = ConceptClass(
            domain,
            tuple(c for i, c in enumerate(concepts) if mask >> i & 1),
        )
        partial = canonical_partial(sub, cache)
        out = Concept(domain, tuple(partial.get(p, 0) for p in domain.points))
        canon_cache[mask] = out
        return out

    def lowest(mask: int) -> Concept | None:
        if mask == 0:
            return None
        return concepts[(mask & -mask).bit_length() - 1]

    def restrict_all(points: Sequence[str], label: int, mask: int) -> int:
        for p in points:
            mask = cache.restrict_mask(mask, domain.index(p), label)
        return mask

    def stable_label(point: str) -> int | None:
        """The label keeping the class dimension at `point`, if any."""
        p = domain.index(point)
        for label in (0, 1):
            sub = cache.restrict_mask(root_mask, p, label)
            if cache.ldim_mask(sub) == d:
                return label
        return None

    def decode_positive_block(points: Sequence[str]) -> tuple[list[str], list[str]] | None:
        """Split (ones..., marker, zeros..., pads...) back into blocks."""
        head = points[0]
        second = None
        for k in range(1, len(points)):
            if points[k] == head:
                second = k
                break
        if second is None:
            return None
        ones = list(points[:second])
        zeros: list[str] = []
        for k in range(second + 1, len(points)):
            if points[k] == head:
                break
            zeros.append(points[k])
        return ones, zeros

    def make_rho(i: int) -> Reconstructor:
        def rho(points: Sequence[str]) -> Concept:
            points = tuple(points)
            if len(points) != d:
                raise ValueError(f"expected a tuple of {d} points, got {len(points)}")
            for p in points:
                domain.index(p)
            distinct = len(set(points))
            if distinct == 1:
                point = points[0]
                if i > 1:
                    return default
                if stable_label(point) == i:
                    found = canon_extension(root_mask)
                else:
                    found = canon_extension(
                        cache.restrict_mask(root_mask, domain.index(point), i)
                    )
                return found if found is not None else default
            if distinct < d:
                if i == 1:
                    blocks = decode_positive_block(points)
                    if blocks is None:
                        return default
                    ones, zeros = blocks
                    mask = restrict_all(zeros, 0, restrict_all(ones, 1, root_mask))
                    found = canon_extension(mask)
                    return found if found is not None else default
                if i == 0:
                    blocks = decode_positive_block(points)
                    if blocks is None:
                        return default
                    # the whole pre-duplicate block is negatively labeled
                    zeros = blocks[0]
                    found = canon_extension(restrict_all(zeros, 0, root_mask))
                    return found if found is not None else default
                return default
            mask = restrict_all(points[:i], 1, root_mask)
            mask = restrict_all(points[i:], 0, mask)
            found = lowest(mask)
            return found if found is not None else default

        return rho

    return tuple(make_rho(i) for i in range(d + 1))


@dataclass(frozen=True)
class CompressionReport:
    """Result of replaying a class's full finite-sample universe."""

    dimension: int
    rho_count: int
    samples_tested: int
    failures: tuple[dict[str, Any], ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict[str, Any]:
        return {
            "d": self.dimension,
            "rho_count": self.rho_count,
            "samples_tested": self.samples_tested,
            "failures": list(self.failures),
        }


def certify_scheme(
    concept_class: ConceptClass,
    max_sample_size: int | None = None,
) -> CompressionReport:
    """Compress and reconstruct every realizable sample, recording failures.

    Samples are restrictions of class concepts to nonempty point subsets
    of size up to `max_sample_size` (the whole domain by default). A
    sample fails when its tuple is not d of its own points or no
    reconstructor returns a concept agreeing with it.
    """
    if len(concept_class) == 0:
        raise ValueError("the empty class has no compression scheme")
    cache = LdimCache(concept_class)
    d = cache.ldim_mask(cache.full_mask)
    rhos = build_reconstructors(concept_class, cache)
    domain = concept_class.domain
    limit = len(domain) if max_sample_size is None else max_sample_size
    if limit < 1:
        raise ValueError("max_sample_size must be at least 1")
    tested = 0
    failures: list[dict[str, Any]] = []
    for size in range(1, min(limit, len(domain)) + 1):
        for subset in combinations(domain.points, size):
            seen: set[tuple[int, ...]] = set()
            for concept in concept_class.concepts:
                key = tuple(concept.value(p) for p in subset)
                if key in seen:
                    continue
                seen.add(key)
                sample = dict(zip(subset, key))
                tested += 1
                tup = compress(concept_class, sample, cache)
                problem = None
                if len(tup) != d:
                    problem = f"tuple has length {len(tup)}, expected {d}"
                elif not set(tup) <= set(subset):
                    problem = "tuple uses points outside the sample"
                elif not any(
                    all(rho(tup).value(p) == v for p, v in sample.items())
                    for rho in rhos
                ):
                    problem = "no reconstructor recovers the sample"
                if problem is not None:
                    failures.append(
                        {"sample": sample, "tuple": list(tup), "reason": problem}
                    )
    return CompressionReport(
        dimension=d,
        rho_count=len(rhos),
        samples_tested=tested,
        failures=tuple(failures),
    )
