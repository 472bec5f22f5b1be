"""Bounded M-convex sets and relations over integer vectors.

Vectors are plain tuples of ints indexed by a ``GroundSet``; ``IntegerVector``
wraps one with its index set for callers that want labels.  A relation holds
a finite set of ``(p, q)`` pairs and is M-convex when the vectors ``(-p, q)``
form an M-convex set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .compose import DefiniteTypeViolation
from .core import CompositionType, GroundSet, SubsetRelation
from .matroid_ops import is_symmetric

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntegerVector:
    index: GroundSet
    values: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) != len(self.index):
            raise ValueError("an integer vector needs one value per index")

    @classmethod
    def from_mapping(cls, index: GroundSet, values: Mapping[str, int]) -> IntegerVector:
        if set(values) != set(index.points):
            raise ValueError("assignment must be total on the index set")
        return cls(index, tuple(values[p] for p in index.points))

    @classmethod
    def indicator(cls, index: GroundSet, labels: Iterable[str]) -> IntegerVector:
        mask = index.mask(labels)
        return cls(index, tuple(mask >> i & 1 for i in range(len(index))))

    def __getitem__(self, label: str) -> int:
        return self.values[self.index.index(label)]

    def _check(self, other: IntegerVector) -> None:
        if self.index != other.index:
            raise ValueError("index mismatch")

    def __add__(self, other: IntegerVector) -> IntegerVector:
        self._check(other)
        return IntegerVector(self.index, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: IntegerVector) -> IntegerVector:
        self._check(other)
        return IntegerVector(self.index, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> IntegerVector:
        return IntegerVector(self.index, tuple(-a for a in self.values))

    def positive_part(self) -> IntegerVector:
        return IntegerVector(self.index, tuple(max(a, 0) for a in self.values))

    def negative_part(self) -> IntegerVector:
        return IntegerVector(self.index, tuple(min(a, 0) for a in self.values))

    def norm1(self) -> int:
        return sum(abs(a) for a in self.values)

    def norm_inf(self) -> int:
        return max((abs(a) for a in self.values), default=0)


def is_mconvex(gamma: Iterable[Sequence[int] | IntegerVector]) -> bool:
    """Exchange axiom: ``p(e) > q(e)`` admits ``f`` with ``p(f) < q(f)`` and ``p - e + f`` in the set."""
    vectors = [tuple(v.values) if isinstance(v, IntegerVector) else tuple(v) for v in gamma]
    if len({len(v) for v in vectors}) > 1:
        raise ValueError("index mismatch")
    members = set(vectors)
    for p in members:
        for q in members:
            ups = [f for f in range(len(p)) if p[f] < q[f]]
            for e in range(len(p)):
                if p[e] <= q[e]:
                    continue
                ok = False
                for f in ups:
                    moved = list(p)
                    moved[e] -= 1
                    moved[f] += 1
                    if tuple(moved) in members:
                        ok = True
                        break
                if not ok:
                    return False
    return True


class BoundedMConvexRelation:
    """Finite relation between integer vectors over ``domain`` and ``codomain``."""

    def __init__(self, domain: GroundSet, codomain: GroundSet, pairs: Iterable[tuple[Sequence[int], Sequence[int]]] = ()):
        self.domain = domain
        self.codomain = codomain
        clean = set()
        for p, q in pairs:
            p, q = tuple(int(v) for v in p), tuple(int(v) for v in q)
            if len(p) != len(domain) or len(q) != len(codomain):
                raise ValueError("vector length does not match its index set")
            clean.add((p, q))
        self.pairs: tuple[tuple[Vector, Vector], ...] = tuple(sorted(clean))

    @property
    def is_zero(self) -> bool:
        return not self.pairs

    @property
    def bounds(self) -> tuple[int, int]:
        """Smallest ``(k, l)`` with every ``|p|`` at most ``k`` and ``|q|`` at most ``l`` entrywise."""
        k = max((abs(v) for p, _ in self.pairs for v in p), default=0)
        l = max((abs(v) for _, q in self.pairs for v in q), default=0)
        return k, l

    def gamma(self) -> list[Vector]:
        return [tuple(-v for v in p) + q for p, q in self.pairs]

    def is_mconvex(self) -> bool:
        return is_mconvex(self.gamma())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BoundedMConvexRelation)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.pairs == other.pairs
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.pairs))

    def __repr__(self) -> str:
        return f"BoundedMConvexRelation({list(self.domain.points)} -> {list(self.codomain.points)}, {len(self.pairs)} pairs)"

    def to_json(self) -> dict:
        return {
            "domain": list(self.domain.points),
            "codomain": list(self.codomain.points),
            "pairs": [[list(p), list(q)] for p, q in self.pairs],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> BoundedMConvexRelation:
        return cls(GroundSet(doc["domain"]), GroundSet(doc["codomain"]), [(p, q) for p, q in doc["pairs"]])


def translate(lam: BoundedMConvexRelation, p0: Sequence[int], q0: Sequence[int]) -> BoundedMConvexRelation:
    """Shift every pair by ``(p0, q0)``."""
    if len(p0) != len(lam.domain) or len(q0) != len(lam.codomain):
        raise ValueError("translation vector has the wrong length")
    return BoundedMConvexRelation(
        lam.domain,
        lam.codomain,
        ((tuple(a + b for a, b in zip(p, p0)), tuple(a + b for a, b in zip(q, q0))) for p, q in lam.pairs),
    )


def truncate(lam: BoundedMConvexRelation, k: int, l: int) -> BoundedMConvexRelation:
    """Pairs with ``|p|`` at most ``k`` and ``|q|`` at most ``l`` entrywise."""
    return BoundedMConvexRelation(
        lam.domain,
        lam.codomain,
        ((p, q) for p, q in lam.pairs if all(abs(v) <= k for v in p) and all(abs(v) <= l for v in q)),
    )


def _blocks(ground: GroundSet, blocks: Sequence[Iterable[str]]) -> list[list[str]]:
    out = [list(b) for b in blocks]
    flat = [p for b in out for p in b]
    if sorted(flat) != sorted(ground.points) or len(set(flat)) != len(flat):
        raise ValueError("blocks must partition the ground set")
    return out


def skeleton(
    mu: SubsetRelation,
    domain_blocks: Sequence[Iterable[str]],
    codomain_blocks: Sequence[Iterable[str]],
) -> BoundedMConvexRelation:
    """Block cardinality profiles of the pairs of a block-symmetric relation.

    The index sets are ``"1".."n"`` and ``"1".."m"`` in block order.
    """
    dblocks = _blocks(mu.domain, domain_blocks)
    cblocks = _blocks(mu.codomain, codomain_blocks)
    for b in dblocks + cblocks:
        if not is_symmetric(mu, b):
            raise ValueError(f"relation is not symmetric on block {b}")
    dmasks = [mu.domain.mask(b) for b in dblocks]
    cmasks = [mu.codomain.mask(b) for b in cblocks]
    pairs = {
        (tuple((x & m).bit_count() for m in dmasks), tuple((y & m).bit_count() for m in cmasks))
        for x, y in mu.pairs
    }
    return BoundedMConvexRelation(
        GroundSet(str(i + 1) for i in range(len(dblocks))),
        GroundSet(str(j + 1) for j in range(len(cblocks))),
        pairs,
    )


def from_subset_relation(lam: SubsetRelation) -> BoundedMConvexRelation:
    """Characteristic-vector encoding over the same labels."""
    na, nb = len(lam.domain), len(lam.codomain)
    return BoundedMConvexRelation(
        lam.domain,
        lam.codomain,
        ((tuple(x >> i & 1 for i in range(na)), tuple(y >> j & 1 for j in range(nb))) for x, y in lam.pairs),
    )


def to_subset_relation(lam: BoundedMConvexRelation) -> SubsetRelation:
    """Inverse of the characteristic-vector encoding; entries must be 0 or 1."""
    pairs = []
    for p, q in lam.pairs:
        if any(v not in (0, 1) for v in p + q):
            raise ValueError("only 0/1 vectors encode subsets")
        pairs.append((sum(v << i for i, v in enumerate(p)), sum(v << j for j, v in enumerate(q))))
    return SubsetRelation(lam.domain, lam.codomain, pairs)


def compose_mconvex(
    lam: BoundedMConvexRelation, theta: BoundedMConvexRelation
) -> tuple[BoundedMConvexRelation, CompositionType]:
    """Lowest nonzero level of the lax composite over the stored supports.

    Middle vectors ``q'`` (from ``lam``) and ``q`` (into ``theta``) at minimal
    l1 distance define the composite; the type is the positive and negative
    mass of ``q - q'``, which must agree across all minimizing middles.
    """
    if lam.codomain != theta.domain:
        raise ValueError("middle index sets differ")
    if lam.is_zero or theta.is_zero:
        raise ValueError("lax composition is undefined on the zero relation")
    left: dict[Vector, list[Vector]] = {}
    for p, q in lam.pairs:
        left.setdefault(q, []).append(p)
    right: dict[Vector, list[Vector]] = {}
    for q, r in theta.pairs:
        right.setdefault(q, []).append(r)
    best = None
    hits: list[tuple[Vector, Vector]] = []
    for q_left, q_right in product(left, right):
        d = sum(abs(a - b) for a, b in zip(q_right, q_left))
        if best is None or d < best:
            best, hits = d, [(q_left, q_right)]
        elif d == best:
            hits.append((q_left, q_right))
    types = set()
    pairs = set()
    for q_left, q_right in hits:
        diff = [b - a for a, b in zip(q_left, q_right)]
        types.add((sum(v for v in diff if v > 0), -sum(v for v in diff if v < 0)))
        pairs.update((p, r) for p in left[q_left] for r in right[q_right])
    if len(types) != 1:
        raise DefiniteTypeViolation(f"minimizing middles disagree on the type: {sorted(types)}")
    (k, l), = types
    return BoundedMConvexRelation(lam.domain, theta.codomain, pairs), CompositionType(k, l)
