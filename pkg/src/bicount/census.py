"""Brute-force census of labeled edge-bicolored graphs.

A graph on half-edge label sets S = {0..2s-1} (red) and T = {0..2t-1}
(yellow) is a triple (V, E_S, E_T): a set partition V of the labels
into vertices, a perfect matching E_S of the red labels and a perfect
matching E_T of the yellow ones.  Isomorphism classes are never
constructed; each class of labeled graphs has exactly
(2s)!(2t)!/|Aut| members, so summing 1/|Aut| over classes is the same
as counting labeled triples and dividing by (2s)!(2t)!.

The census buckets triples by degree profile (the multiset of vertex
bidegrees).  This module is the independent ground-truth oracle for the
generating-function pipeline in :mod:`bicount.expansion`, so it stays
deliberately naive: explicit matchings, explicit partitions, exhaustive
edge-subset scans.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .errors import InstanceTooLargeError, ValidationError
from .expansion import PotentialSpec
from .polyring import Coeff, ParamPoly, Rational, rational

__all__ = [
    "MAX_HALF_EDGES",
    "CensusEntry",
    "perfect_matchings",
    "enumerate_census",
    "chi_census",
    "weighted_A",
    "eulerian_sum",
    "regular_monochrome_classes",
]

# Hard guard on 2s + 2t.  Euler characteristic -2 at vertex degree 4
# needs 8 half-edges and stays comfortably inside; -3 at degree 3 would
# need 18 and is out of reach for a desk-scale exhaustive scan.
MAX_HALF_EDGES = 12

Profile = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class CensusEntry:
    """All labeled graphs sharing one degree profile.

    weight = labeled_count / ((2s)! (2t)!) is the automorphism-weighted
    number of isomorphism classes with this profile.
    """

    profile: Profile
    labeled_count: int
    weight: Rational


def perfect_matchings(labels: Sequence) -> Iterator[Tuple[Tuple, ...]]:
    """Yield every perfect matching of ``labels``.

    The smallest remaining label is paired with each other remaining
    label in turn, so each matching appears exactly once; an odd number
    of labels yields nothing, the empty set yields the empty matching.
    """
    items = list(labels)
    if not items:
        yield ()
        return
    if len(items) % 2:
        return
    first = items[0]
    rest = items[1:]
    for i, partner in enumerate(rest):
        pair = (first, partner)
        for sub in perfect_matchings(rest[:i] + rest[i + 1:]):
            yield (pair,) + sub


def _partition_profiles(
    n_red: int,
    n_yellow: int,
    min_degree: int,
    exact_degree: Optional[int],
    n_blocks: Optional[int] = None,
) -> Dict[Profile, int]:
    """Count set partitions of the labels by block-bidegree profile.

    Partitions are enumerated in restricted-growth order (each element
    joins an existing block or opens the next new one), pruning blocks
    that exceed ``exact_degree`` and branches that cannot reach
    ``min_degree`` everywhere with the elements that remain.
    """
    total = n_red + n_yellow
    tally: Dict[Profile, int] = {}
    if total == 0:
        tally[()] = 1
        return tally
    cap = exact_degree if exact_degree is not None else total
    floor = exact_degree if exact_degree is not None else min_degree
    blocks: List[List[int]] = []  # [red count, yellow count] per block

    def deficit() -> int:
        return sum(max(0, floor - (b[0] + b[1])) for b in blocks)

    def place(i: int) -> None:
        remaining = total - i
        if remaining < deficit():
            return
        if n_blocks is not None:
            # every new element can open at most one block
            if len(blocks) > n_blocks:
                return
            need_new = n_blocks - len(blocks)
            if need_new > remaining:
                return
        if i == total:
            if n_blocks is not None and len(blocks) != n_blocks:
                return
            prof = tuple(sorted((b[0], b[1]) for b in blocks))
            tally[prof] = tally.get(prof, 0) + 1
            return
        color = 0 if i < n_red else 1
        for b in blocks:
            if b[0] + b[1] >= cap:
                continue
            b[color] += 1
            place(i + 1)
            b[color] -= 1
        if n_blocks is None or len(blocks) < n_blocks:
            blocks.append([1, 0] if color == 0 else [0, 1])
            place(i + 1)
            blocks.pop()

    place(0)
    return tally


@lru_cache(maxsize=None)
def _census_cached(
    s: int, t: int, min_degree: int, exact_degree: Optional[int]
) -> Tuple[CensusEntry, ...]:
    # The degree profile of (V, E_S, E_T) depends on V alone, so every
    # partition contributes once per matching pair; both factors are
    # still obtained by explicit enumeration.
    m_s = sum(1 for _ in perfect_matchings(range(2 * s)))
    m_t = sum(1 for _ in perfect_matchings(range(2 * t)))
    profiles = _partition_profiles(2 * s, 2 * t, min_degree, exact_degree)
    denom = factorial(2 * s) * factorial(2 * t)
    entries = []
    for prof in sorted(profiles):
        labeled = profiles[prof] * m_s * m_t
        entries.append(
            CensusEntry(
                profile=prof,
                labeled_count=labeled,
                weight=mpq(labeled, denom),
            )
        )
    return tuple(entries)


def enumerate_census(
    s: int,
    t: int,
    min_degree: int = 1,
    exact_degree: Optional[int] = None,
) -> List[CensusEntry]:
    """Automorphism-weighted census of graphs with s red and t yellow edges.

    Iterates all perfect matchings of the red and yellow half-edge sets
    and all vertex partitions whose blocks meet the degree constraints,
    buckets by degree profile and divides by (2s)!(2t)!.
    """
    if s < 0 or t < 0:
        raise ValidationError("edge counts must be nonnegative")
    if 2 * s + 2 * t > MAX_HALF_EDGES:
        raise InstanceTooLargeError(
            f"{2 * s + 2 * t} half-edges exceed the guard of {MAX_HALF_EDGES}"
        )
    return list(_census_cached(s, t, min_degree, exact_degree))


def chi_census(
    n: int, pot: PotentialSpec
) -> List[Tuple[int, int, CensusEntry]]:
    """Census entries contributing to A_n for the given potential.

    Covers every edge split (s, t) compatible with n vertices fewer
    than edges, keeping entries whose profile has s + t - n vertices,
    all of degree >= 3 and all carried by the potential's support.
    """
    if n <= 0:
        raise ValidationError("n must be positive")
    if pot.is_empty():
        return []
    d_min = min(u + w for u, w in pot.terms)
    d_max = max(u + w for u, w in pot.terms)
    # with b = s + t - n blocks: d_min * b <= 2(s+t) <= d_max * b
    lo = -(-n * d_max // (d_max - 2))  # ceil
    hi = (n * d_min) // (d_min - 2)
    if 2 * hi > MAX_HALF_EDGES:
        raise InstanceTooLargeError(
            f"A_{n} needs up to {2 * hi} half-edges; guard is {MAX_HALF_EDGES}"
        )
    out = []
    for edges in range(max(lo, n + 1), hi + 1):
        for s in range(edges + 1):
            t = edges - s
            for entry in enumerate_census(s, t, min_degree=3):
                if len(entry.profile) != edges - n:
                    continue
                if all(deg in pot.terms for deg in entry.profile):
                    out.append((s, t, entry))
    return out


def weighted_A(n: int, pot: PotentialSpec) -> Coeff:
    """Oracle value of A_n: sum over graphs with min degree 3 and chi = -n.

    Enumerates every split (s, t) of the edge count, filters census
    entries to those with s + t - n vertices, and weights each vertex of
    bidegree (u, w) by the potential coefficient L_{u,w}.
    """
    one: Coeff = ParamPoly((1,)) if pot.param else mpq(1)
    zero: Coeff = ParamPoly() if pot.param else mpq(0)
    if n == 0:
        return one  # only the empty graph has chi = 0 and min degree 3
    if n < 0:
        raise ValidationError("n must be nonnegative")
    if pot.is_empty():
        return zero
    total = zero
    for _s, _t, entry in chi_census(n, pot):
        prod: Coeff = one
        for (u, w) in entry.profile:
            prod = prod * pot.terms[(u, w)]
        total = total + entry.weight * prod
    return total


def eulerian_sum(edges: Sequence[Tuple[int, int]], lam) -> Rational:
    """Even-subgraph generating value Z(G, lam) = sum lam^{|subset|}.

    ``edges`` lists the edges of a small multigraph as vertex pairs
    (loops as (v, v)); a subset counts when every vertex is covered an
    even number of times, loops contributing 2.  Exhaustive over all
    2^|E| subsets; at most 8 edges.
    """
    if len(edges) > 8:
        raise InstanceTooLargeError("eulerian_sum handles at most 8 edges")
    lam = rational(lam)
    verts = sorted({v for e in edges for v in e})
    index = {v: i for i, v in enumerate(verts)}
    nv = len(verts)
    total = mpq(0)
    for mask in range(1 << len(edges)):
        deg = [0] * nv
        size = 0
        m = mask
        for e_idx, (a, b) in enumerate(edges):
            if m & (1 << e_idx):
                size += 1
                if a != b:
                    deg[index[a]] += 1
                    deg[index[b]] += 1
        if all(d % 2 == 0 for d in deg):
            total += lam ** size
    return total


def _canonical_multigraph(edges: List[Tuple[int, int]], n_vertices: int) -> Tuple:
    """Canonical form of a small multigraph under vertex relabeling."""
    best = None
    for perm in permutations(range(n_vertices)):
        relab = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
        if best is None or relab < best:
            best = relab
    return best


def regular_monochrome_classes(
    s: int, degree: int
) -> List[Tuple[Tuple[Tuple[int, int], ...], Rational]]:
    """Isomorphism classes of single-color regular graphs with s edges.

    Enumerates all labeled (V, E_S) pairs on 2s red half-edges whose
    vertices all have degree ``degree``, groups them by the quotient
    multigraph up to relabeling, and returns one representative edge
    list per class together with its weight 1/|Aut| (labeled count
    divided by (2s)!).
    """
    if 2 * s > MAX_HALF_EDGES:
        raise InstanceTooLargeError(
            f"{2 * s} half-edges exceed the guard of {MAX_HALF_EDGES}"
        )
    if (2 * s) % degree != 0:
        return []
    counts: Dict[Tuple, int] = {}
    labels = list(range(2 * s))
    for blocks in _labeled_partitions(labels, degree):
        where = {}
        for b_idx, block in enumerate(blocks):
            for lab in block:
                where[lab] = b_idx
        for matching in perfect_matchings(labels):
            edges = [tuple(sorted((where[a], where[b]))) for a, b in matching]
            key = _canonical_multigraph(edges, len(blocks))
            counts[key] = counts.get(key, 0) + 1
    denom = factorial(2 * s)
    # the canonical form is itself a valid representative edge list
    return [(key, mpq(counts[key], denom)) for key in sorted(counts)]


def _labeled_partitions(labels: Sequence[int], block_size: int) -> List[List[List[int]]]:
    """All set partitions of ``labels`` into blocks of exactly block_size."""
    out: List[List[List[int]]] = []

    def rec(remaining: List[int], acc: List[List[int]]) -> None:
        if not remaining:
            out.append([list(b) for b in acc])
            return
        first = remaining[0]
        rest = remaining[1:]
        for others in combinations(rest, block_size - 1):
            block = [first, *others]
            chosen = set(others)
            left = [x for x in rest if x not in chosen]
            acc.append(block)
            rec(left, acc)
            acc.pop()

    rec(list(labels), [])
    return out
