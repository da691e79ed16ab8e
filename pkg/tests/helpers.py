"""Shared fixtures and independent oracles for the test suite.

The oracles here recompute dimensions and edge weights from the raw
definitions with no memoization, masks, or pruning, so they share no
code path with the package under test.
"""

from fractions import Fraction
from itertools import combinations, product

from thicket import Concept, ConceptClass, Domain


def ref_ldim(patterns):
    """Plain recursive mistake-tree depth over bit tuples."""
    if not patterns:
        return -1
    if len(patterns) == 1:
        return 0
    best = 0
    for p in range(len(patterns[0])):
        zeros = [c for c in patterns if c[p] == 0]
        ones = [c for c in patterns if c[p] == 1]
        if zeros and ones:
            cand = 1 + min(ref_ldim(zeros), ref_ldim(ones))
            if cand > best:
                best = cand
    return best


def ref_edge_weight(patterns, mu, i, j):
    """Expected dimension drop querying pattern i against target j."""
    diff = [p for p in range(len(patterns[0])) if patterns[i][p] != patterns[j][p]]
    total = sum((mu[p] for p in diff), Fraction(0))
    base = ref_ldim(patterns)
    acc = Fraction(0)
    for p in diff:
        kept = [c for c in patterns if c[p] == patterns[j][p]]
        acc += mu[p] * (base - ref_ldim(kept))
    return acc / total


def mk_class(bitstrings, mu=None, labels=None):
    n = len(bitstrings[0])
    points = tuple(f"x{i + 1}" for i in range(n))
    if mu is None:
        domain = Domain.uniform(points)
    else:
        domain = Domain(points, tuple(Fraction(m) for m in mu))
    concepts = tuple(Concept.from_bitstring(domain, b) for b in bitstrings)
    return ConceptClass(domain, concepts, labels)


def c3():
    """The worked three-concept class used across the suite."""
    return mk_class(["10", "01", "11"], labels=("A", "B", "C"))


def powerset3():
    bits = ["".join(t) for t in product("01", repeat=3)]
    return mk_class(bits)


def all_three_point_classes():
    """Every nonempty class over three points, uniform weights."""
    patterns = ["".join(t) for t in product("01", repeat=3)]
    for size in range(1, 9):
        for chosen in combinations(patterns, size):
            yield mk_class(list(chosen))


def write_class_file(path, cc, tau=None):
    from thicket import save_class

    path.write_bytes(save_class(cc, tau))
    return str(path)
