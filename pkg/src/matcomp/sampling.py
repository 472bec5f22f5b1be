"""Enumeration and random generation of matroids and exchange relations.

Exhaustive enumeration walks every family of equal-size subsets, so it is
meant for ground sets of at most five points.  Random matroids mix linear
matroids over small prime fields, sparse paving matroids and direct sums, to
cover loops, coloops, parallel classes and non-representable cases.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterator

from .core import GroundSet, Matroid, SubsetRelation, is_basis_family, masks_of_size

MAX_ENUMERATION_POINTS = 5


def all_basis_families(n: int, include_zero: bool = True) -> Iterator[frozenset[int]]:
    """Every basis family on ``n`` points, rank by rank."""
    if n > MAX_ENUMERATION_POINTS:
        raise ValueError(f"exhaustive enumeration is limited to {MAX_ENUMERATION_POINTS} points")
    if include_zero:
        yield frozenset()
    for r in range(n + 1):
        layer = masks_of_size(n, r)
        for choice in range(1, 1 << len(layer)):
            fam = frozenset(layer[i] for i in range(len(layer)) if choice >> i & 1)
            if is_basis_family(fam, n):
                yield fam


def all_matroids(ground: GroundSet, include_zero: bool = False) -> Iterator[Matroid]:
    for fam in all_basis_families(len(ground), include_zero):
        yield Matroid(ground, fam, check=False)


def relation_from_combined(a: GroundSet, b: GroundSet, family) -> SubsetRelation:
    """Relation whose associated basis family is ``family`` over positions of ``a`` then ``b``."""
    na, full = len(a), a.full
    return SubsetRelation(a, b, ((full & ~(m & full), m >> na) for m in family))


def all_exchange_relations(a: GroundSet, b: GroundSet, include_zero: bool = True) -> Iterator[SubsetRelation]:
    for fam in all_basis_families(len(a) + len(b), include_zero):
        yield relation_from_combined(a, b, fam)


def _inverse(v: int, p: int) -> int:
    return pow(v, p - 2, p)


def _reduce(vec: list[int], basis: list[tuple[int, list[int]]], p: int) -> list[int]:
    vec = list(vec)
    for piv, row in basis:
        c = vec[piv]
        if c:
            vec = [(x - c * y) % p for x, y in zip(vec, row)]
    return vec


def linear_bases(columns: list[list[int]], p: int) -> list[int]:
    """Basis masks of the column matroid of an integer matrix over GF(p)."""
    basis: list[tuple[int, list[int]]] = []
    for col in columns:
        v = _reduce(col, basis, p)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is not None:
            inv = _inverse(v[piv], p)
            basis.append((piv, [(x * inv) % p for x in v]))
    rank = len(basis)
    n = len(columns)
    out: list[int] = []

    def walk(start: int, mask: int, current: list[tuple[int, list[int]]]) -> None:
        if len(current) == rank:
            out.append(mask)
            return
        for j in range(start, n):
            if n - j < rank - len(current):
                break
            v = _reduce(columns[j], current, p)
            piv = next((i for i, x in enumerate(v) if x), None)
            if piv is None:
                continue
            inv = _inverse(v[piv], p)
            walk(j + 1, mask | 1 << j, current + [(piv, [(x * inv) % p for x in v])])

    walk(0, 0, [])
    return out


def random_linear_family(n: int, rng: random.Random, p: int | None = None, rank: int | None = None) -> list[int]:
    p = p or rng.choice((2, 3, 5))
    r = rng.randint(0, n) if rank is None else rank
    zero_bias = rng.random() * 0.6
    cols = [[0 if rng.random() < zero_bias else rng.randrange(p) for _ in range(r)] for _ in range(n)]
    return linear_bases(cols, p)


def random_sparse_paving_family(n: int, rng: random.Random, rank: int | None = None) -> list[int]:
    """Uniform matroid minus a random family of pairwise far-apart ``rank``-sets."""
    r = rng.randint(0, n) if rank is None else rank
    layer = list(masks_of_size(n, r))
    rng.shuffle(layer)
    removed: list[int] = []
    target = rng.randint(0, len(layer) // 3)
    for m in layer:
        if len(removed) >= target:
            break
        if all((m ^ h).bit_count() >= 4 for h in removed):
            removed.append(m)
    keep = set(layer) - set(removed)
    return sorted(keep)


def random_family(n: int, rng: random.Random, depth: int = 0) -> list[int]:
    """A random nonempty basis family on ``n`` points."""
    if n == 0:
        return [0]
    kind = rng.random()
    if kind < 0.45:
        fam = random_linear_family(n, rng)
    elif kind < 0.7:
        fam = random_sparse_paving_family(n, rng)
    elif kind < 0.8:
        fam = list(masks_of_size(n, rng.randint(0, n)))
    else:
        if depth > 2 or n < 2:
            return random_linear_family(n, rng)
        cut = rng.randint(1, n - 1)
        positions = list(range(n))
        rng.shuffle(positions)
        left_pos, right_pos = sorted(positions[:cut]), sorted(positions[cut:])
        left = random_family(len(left_pos), rng, depth + 1)
        right = random_family(len(right_pos), rng, depth + 1)
        fam = []
        for lm in left:
            lifted = sum(1 << left_pos[i] for i in range(len(left_pos)) if lm >> i & 1)
            for rm in right:
                fam.append(lifted | sum(1 << right_pos[i] for i in range(len(right_pos)) if rm >> i & 1))
    return sorted(set(fam))


def random_matroid(ground: GroundSet, rng: random.Random) -> Matroid:
    return Matroid(ground, random_family(len(ground), rng), check=False)


def random_exchange_relation(a: GroundSet, b: GroundSet, rng: random.Random) -> SubsetRelation:
    """A random nonzero exchange relation from ``a`` to ``b``."""
    return relation_from_combined(a, b, random_family(len(a) + len(b), rng))


def labels(prefix: str, n: int) -> GroundSet:
    return GroundSet(f"{prefix}{i}" for i in range(n))


def pairs_of(n: int) -> Iterator[tuple[int, int]]:
    return combinations(range(n), 2)
