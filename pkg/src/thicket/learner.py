"""Equivalence-query learner against a random-counterexample teacher.

The learner repeatedly proposes the max-min query of the current class.
The teacher either confirms equivalence with the hidden target or draws
a counterexample point from mu conditioned on the symmetric difference
of hypothesis and target, revealing the target's label there. The
learner keeps only the concepts consistent with that label and repeats.

Every random draw is made through a 64-bit uniform variate interpreted
as an exact dyadic rational, so sampling is reproducible across
platforms and the conditional probabilities are hit exactly up to
2**-64. Exact expected query counts come from a separate memoized
recursion, not from simulation.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .concepts import Concept, ConceptClass, Domain
from .querygraph import QueryGraph

__all__ = [
    "TeacherResponse",
    "Transcript",
    "TrialSummary",
    "derive_seed",
    "exact_expected_queries",
    "monte_carlo_trials",
    "run_thicket_learner",
    "sample_index",
    "teacher_respond",
    "unit_variate",
]


@dataclass(frozen=True)
class TeacherResponse:
    """Either an equivalence confirmation or one labeled counterexample.

    `point` is None exactly for the confirmation; otherwise it is a
    domain point (a point name here, a rational number for the interval
    families in :mod:`thicket.staged`) and `label` is the target's value
    at that point.
    """

    point: Any = None
    label: int | None = None

    @property
    def equivalent(self) -> bool:
        return self.point is None


@dataclass(frozen=True)
class Transcript:
    """Ordered record of one learning run.

    The last response is an equivalence confirmation iff the run ended
    by identifying the target.
    """

    queries: tuple[tuple[Concept, TeacherResponse], ...]
    seed: int | None = None

    @property
    def query_count(self) -> int:
        return len(self.queries)

    @property
    def identified(self) -> bool:
        return bool(self.queries) and self.queries[-1][1].equivalent


def derive_seed(master: int, index: int) -> int:
    """Stable 64-bit per-trial seed, independent of platform hashing."""
    digest = hashlib.sha256(f"{master}/{index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def unit_variate(rng: random.Random) -> Fraction:
    """A uniform dyadic rational in [0, 1) with 64 bits of resolution."""
    return Fraction(rng.getrandbits(64), 1 << 64)


def sample_index(weights: Sequence[Fraction], rng: random.Random) -> int:
    """Draw an index with probability proportional to its exact weight."""
    if not weights:
        raise ValueError("cannot sample from an empty weight sequence")
    total = sum(weights, Fraction(0))
    if total <= 0:
        raise ValueError("weights must have positive total mass")
    threshold = unit_variate(rng) * total
    acc = Fraction(0)
    for i, w in enumerate(weights):
        acc += w
        if acc > threshold:
            return i
    return len(weights) - 1


def teacher_respond(
    target: Concept,
    hypothesis: Concept,
    domain: Domain,
    rng: random.Random,
) -> TeacherResponse:
    """One teacher step: confirm equality or sample a labeled counterexample.

    The counterexample point is drawn from mu conditioned on the
    symmetric difference, so each disagreement point a is returned with
    probability mu(a) / mu(difference).
    """
    if target.domain != domain or hypothesis.domain != domain:
        raise ValueError("target and hypothesis must live on the given domain")
    diff = [
        p
        for p in range(len(domain))
        if target.bits[p] != hypothesis.bits[p]
    ]
    if not diff:
        return TeacherResponse()
    pick = diff[sample_index([domain.mu[p] for p in diff], rng)]
    point = domain.points[pick]
    return TeacherResponse(point, target.bits[pick])


def run_thicket_learner(
    concept_class: ConceptClass,
    target: Concept,
    rng: random.Random,
    graph: QueryGraph | None = None,
    seed: int | None = None,
) -> Transcript:
    """Run the max-min learner until the teacher confirms the target.

    The target must be a member of the class; it then survives every
    restriction, the class shrinks by at least the queried concept per
    counterexample, and the run halts with probability 1.
    """
    if graph is None:
        graph = QueryGraph(concept_class)
    cache = graph.cache
    concept_class.index_of(target)  # membership check
    mask = cache.mask_of(concept_class)
    domain = concept_class.domain
    entries: list[tuple[Concept, TeacherResponse]] = []
    while True:
        hypothesis = graph.root.concepts[graph.best_query(mask)]
        response = teacher_respond(target, hypothesis, domain, rng)
        entries.append((hypothesis, response))
        if response.equivalent:
            return Transcript(tuple(entries), seed)
        mask = cache.restrict_mask(mask, domain.index(response.point), response.label)


def exact_expected_queries(
    concept_class: ConceptClass,
    target: Concept,
    graph: QueryGraph | None = None,
) -> Fraction:
    """Exact expected number of queries to identify `target`.

    Averages over the teacher's counterexample draws by dynamic
    programming on subclasses: a run in a subclass costs one query plus
    the mass-weighted expectation over the restrictions the possible
    counterexamples lead to. The count includes the final confirming
    query, so the expectation is exactly 1 when the first query is the
    target and never exceeds 2 * ldim + 1 overall: each counterexample
    drops the dimension by at least 1/2 in expectation, and one more
    query confirms.
    """
    if graph is None:
        graph = QueryGraph(concept_class)
    cache = graph.cache
    t = graph.root.index_of(target)
    if not (cache.mask_of(concept_class) >> t) & 1:
        raise ValueError("target is not a member of the class")
    mu = graph.root.domain.mu
    target_bits = target.bits
    memo: dict[int, Fraction] = {}

    def expect(mask: int) -> Fraction:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        q = graph.best_query(mask)
        if q == t:
            memo[mask] = Fraction(1)
            return memo[mask]
        points = graph.diff_points(q, t)
        total = sum((mu[p] for p in points), Fraction(0))
        acc = Fraction(1)
        for p in points:
            sub = cache.restrict_mask(mask, p, target_bits[p])
            acc += (mu[p] / total) * expect(sub)
        memo[mask] = acc
        return acc

    return expect(cache.mask_of(concept_class))


@dataclass(frozen=True)
class TrialSummary:
    """Exact summary statistics over seeded Monte Carlo learning runs.

    `histogram` pairs each observed query count with its frequency,
    sorted by count. Mean and variance are exact rationals computed from
    integer tallies; `variance` is the unbiased sample variance, 0 when
    there are fewer than two trials.
    """

    trials: int
    seed: int
    mean: Fraction
    variance: Fraction
    max_queries: int
    histogram: tuple[tuple[int, int], ...]

    def as_dict(self, class_name: str, target: str) -> dict[str, Any]:
        return {
            "class": class_name,
            "target": target,
            "trials": self.trials,
            "seed": self.seed,
            "mean": str(self.mean),
            "variance": str(self.variance),
            "max": self.max_queries,
            "histogram": {str(k): v for k, v in self.histogram},
        }

    def csv_row(self, class_name: str, target: str) -> str:
        return (
            f"{class_name},{target},{self.trials},{self.seed},"
            f"{self.mean},{self.variance},{self.max_queries}"
        )

    @staticmethod
    def csv_header() -> str:
        return "class,target,trials,seed,mean,variance,max"


def monte_carlo_trials(
    concept_class: ConceptClass,
    target: Concept,
    trials: int,
    seed: int,
    graph: QueryGraph | None = None,
) -> TrialSummary:
    """Run seeded independent learning trials and summarize query counts.

    Trial i uses its own generator seeded with derive_seed(seed, i), so
    any single trial can be replayed in isolation.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if graph is None:
        graph = QueryGraph(concept_class)
    counts: dict[int, int] = {}
    for i in range(trials):
        rng = random.Random(derive_seed(seed, i))
        transcript = run_thicket_learner(concept_class, target, rng, graph)
        n = transcript.query_count
        counts[n] = counts.get(n, 0) + 1
    total = sum(k * v for k, v in counts.items())
    mean = Fraction(total, trials)
    if trials > 1:
        square_sum = sum(v * (Fraction(k) - mean) ** 2 for k, v in counts.items())
        variance = square_sum / (trials - 1)
    else:
        variance = Fraction(0)
    return TrialSummary(
        trials=trials,
        seed=seed,
        mean=mean,
        variance=variance,
        max_queries=max(counts),
        histogram=tuple(sorted(counts.items())),
    )
