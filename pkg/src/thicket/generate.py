"""Seeded random concept classes for verification corpora.

Generation is deterministic given (seed, index): every class in a corpus
can be regenerated in isolation, which is how verification reports stay
reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator

from .concepts import Concept, ConceptClass, Domain
from .learner import derive_seed

__all__ = ["random_class", "random_classes"]


def random_class(
    rng: random.Random,
    max_points: int = 5,
    max_concepts: int = 8,
    min_points: int = 1,
    min_concepts: int = 1,
) -> ConceptClass:
    """One random class: sizes, concept bit patterns, and weights all drawn.

    Weights are random positive rationals normalized to total mass 1.
    Concepts are distinct by construction (sampled without replacement
    from the 2**n bit patterns).
    """
    if not 1 <= min_points <= max_points:
        raise ValueError("need 1 <= min_points <= max_points")
    n = rng.randint(min_points, max_points)
    k_cap = min(max_concepts, 2**n)
    if not 1 <= min_concepts <= k_cap:
        raise ValueError("need 1 <= min_concepts <= min(max_concepts, 2**points)")
    k = rng.randint(min_concepts, k_cap)
    patterns = rng.sample(range(2**n), k)
    numerators = [rng.randint(1, 16) for _ in range(n)]
    total = sum(numerators)
    domain = Domain(
        tuple(f"x{i + 1}" for i in range(n)),
        tuple(Fraction(a, total) for a in numerators),
    )
    concepts = tuple(
        Concept(domain, tuple((m >> p) & 1 for p in range(n))) for m in patterns
    )
    return ConceptClass(domain, concepts, tuple(f"c{i}" for i in range(k)))


def random_classes(
    seed: int,
    count: int,
    max_points: int = 5,
    max_concepts: int = 8,
    min_points: int = 1,
    min_concepts: int = 1,
) -> Iterator[ConceptClass]:
    """A reproducible corpus: class i is drawn from derive_seed(seed, i)."""
    for i in range(count):
        rng = random.Random(derive_seed(seed, i))
        yield random_class(rng, max_points, max_concepts, min_points, min_concepts)
