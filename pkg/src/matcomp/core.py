"""Ground sets, subsets, matroids and relations between subset lattices.

Subsets are ``int`` bitmasks over a ground set's canonical label order.  A
relation stores only its realized ``(domain mask, codomain mask)`` pairs, in
sorted order, so iteration and serialization are deterministic.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

MAX_GROUND_ENV = "MATCOMP_MAX_GROUND"
DEFAULT_MAX_GROUND = 16

DOMAIN_TAG = "/d"
CODOMAIN_TAG = "/c"
TENSOR_TAGS = ("/1", "/2")


def max_ground_size() -> int:
    """Largest side of a relation; read from ``MATCOMP_MAX_GROUND`` on every call."""
    raw = os.environ.get(MAX_GROUND_ENV)
    if raw is None:
        return DEFAULT_MAX_GROUND
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{MAX_GROUND_ENV} must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ValueError(f"{MAX_GROUND_ENV} must be nonnegative")
    return value


class GroundSizeError(ValueError):
    """A ground set or relation side is larger than the configured cap."""


_DIGITS = re.compile(r"(\d+)")


def natural_key(label: str) -> tuple:
    """Sort key placing ``e2`` before ``e10``."""
    parts = _DIGITS.split(label)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts)) + (label,)


@lru_cache(maxsize=None)
def masks_of_size(n: int, k: int) -> tuple[int, ...]:
    """All ``k``-element masks over ``n`` positions, in increasing order."""
    if k < 0 or k > n:
        return ()
    out = []
    for combo in combinations(range(n), k):
        m = 0
        for i in combo:
            m |= 1 << i
        out.append(m)
    return tuple(sorted(out))


def bits(mask: int) -> Iterator[int]:
    """Positions of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class GroundSet:
    """A finite set of distinct string labels in canonical (natural-sort) order."""

    __slots__ = ("points", "_index")

    def __init__(self, points: Iterable[str] = ()):
        labels = [str(p) for p in points]
        if len(set(labels)) != len(labels):
            seen: set[str] = set()
            dup = next(p for p in labels if p in seen or seen.add(p))
            raise ValueError(f"duplicate label {dup!r} in ground set")
        if len(labels) > 2 * max_ground_size():
            raise GroundSizeError(
                f"ground set of size {len(labels)} exceeds the cap {2 * max_ground_size()}"
            )
        self.points: tuple[str, ...] = tuple(sorted(labels, key=natural_key))
        self._index = {p: i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[str]:
        return iter(self.points)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroundSet) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"GroundSet({list(self.points)!r})"

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"label {label!r} not in {self!r}") from None

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for p in labels:
            m |= 1 << self.index(p)
        return m

    def labels(self, mask: int) -> tuple[str, ...]:
        if mask >> len(self.points):
            raise ValueError(f"mask {mask:#b} exceeds ground set of size {len(self)}")
        return tuple(self.points[i] for i in bits(mask))

    def subset(self, labels: Iterable[str]) -> Subset:
        return Subset(self, self.mask(labels))

    def union(self, other: GroundSet) -> GroundSet:
        return GroundSet(set(self.points) | set(other.points))

    def without(self, labels: Iterable[str]) -> GroundSet:
        drop = set(labels)
        missing = drop - set(self.points)
        if missing:
            raise KeyError(f"labels {sorted(missing)} not in {self!r}")
        return GroundSet(p for p in self.points if p not in drop)

    def restrict(self, labels: Iterable[str]) -> GroundSet:
        keep = set(labels)
        missing = keep - set(self.points)
        if missing:
            raise KeyError(f"labels {sorted(missing)} not in {self!r}")
        return GroundSet(p for p in self.points if p in keep)


@dataclass(frozen=True)
class Subset:
    """A subset of a ground set, stored as a bitmask."""

    ground: GroundSet
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> len(self.ground):
            raise ValueError("subset mask indexes positions outside the ground set")

    @property
    def labels(self) -> tuple[str, ...]:
        return self.ground.labels(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, label: object) -> bool:
        return label in self.ground and bool(self.mask >> self.ground.index(label) & 1)

    def complement(self) -> Subset:
        return Subset(self.ground, self.ground.full & ~self.mask)


class Transport:
    """Maps masks over ``source`` to masks over ``target`` through a label map.

    Uses per-byte lookup tables, so mapping a mask costs a few table reads.
    """

    __slots__ = ("_tables", "source", "target")

    def __init__(self, source: GroundSet, target: GroundSet, labels: Mapping[str, str] | None = None):
        self.source = source
        self.target = target
        positions = []
        for p in source.points:
            q = labels[p] if labels is not None else p
            positions.append(target.index(q))
        self._tables = []
        for start in range(0, len(positions), 8):
            chunk = positions[start:start + 8]
            table = [0] * 256
            for v in range(1, 256):
                low = v & -v
                i = low.bit_length() - 1
                table[v] = table[v ^ low] | (1 << chunk[i] if i < len(chunk) else 0)
            self._tables.append(table)

    def __call__(self, mask: int) -> int:
        out = 0
        for table in self._tables:
            out |= table[mask & 255]
            mask >>= 8
        return out


def disjoint_union(
    first: GroundSet, second: GroundSet, tags: tuple[str, str] = TENSOR_TAGS
) -> tuple[GroundSet, dict[str, str], dict[str, str]]:
    """Union of two ground sets, suffix-tagging labels that occur in both.

    Returns the union together with the label maps from each input.
    """
    clash = set(first.points) & set(second.points)
    left = {p: (p + tags[0] if p in clash else p) for p in first.points}
    right = {p: (p + tags[1] if p in clash else p) for p in second.points}
    labels = list(left.values()) + list(right.values())
    if len(set(labels)) != len(labels):
        raise ValueError(f"label collision unresolved after tagging {sorted(clash)}")
    return GroundSet(labels), left, right


# --------------------------------------------------------------------------- matroids


def _pairwise_exchange(family: frozenset[int]) -> bool:
    for b1 in family:
        for b2 in family:
            d1 = b1 & ~b2
            if not d1:
                continue
            d2 = b2 & ~b1
            while d1:
                x = d1 & -d1
                d1 ^= x
                base = b1 ^ x
                rest = d2
                while rest:
                    y = rest & -rest
                    rest ^= y
                    if base | y in family:
                        break
                else:
                    return False
    return True


def _submodular_rank(family: frozenset[int], n: int) -> bool:
    # max-intersection rank is submodular iff the equicardinal family is a basis family
    bases = np.fromiter(family, dtype=np.int64, count=len(family))
    subsets = np.arange(1 << n, dtype=np.int64)
    rank = np.empty(1 << n, dtype=np.int64)
    step = max(1, (1 << 20) // max(1, len(bases)))
    for start in range(0, 1 << n, step):
        block = subsets[start:start + step, None] & bases[None, :]
        rank[start:start + step] = np.bitwise_count(block).max(axis=1)
    for a in range(n):
        for b in range(a + 1, n):
            ma, mb = 1 << a, 1 << b
            s = subsets[(subsets & (ma | mb)) == 0]
            if np.any(rank[s | ma] + rank[s | mb] < rank[s | ma | mb] + rank[s]):
                return False
    return True


def is_basis_family(family: Iterable[int], n: int) -> bool:
    """Basis-exchange test on raw masks over ``n`` points; the empty family passes."""
    fam = frozenset(family)
    if not fam:
        return True
    if any(m < 0 or m >> n for m in fam):
        raise ValueError("basis mask outside the ground set")
    r = next(iter(fam)).bit_count()
    if any(m.bit_count() != r for m in fam):
        return False
    if len(fam) >= 64 and n <= 12:
        return _submodular_rank(fam, n)
    return _pairwise_exchange(fam)


def _as_masks(bases: Iterable, ground: GroundSet) -> list[int]:
    out = []
    for b in bases:
        if isinstance(b, Subset):
            if b.ground != ground:
                raise ValueError("subset over a different ground set")
            out.append(b.mask)
        elif isinstance(b, int):
            if b < 0 or b >> len(ground):
                raise ValueError("basis mask outside the ground set")
            out.append(b)
        else:
            out.append(ground.mask(b))
    return out


def is_matroid(bases: Iterable, ground: GroundSet) -> bool:
    """True iff ``bases`` (Subsets, masks or label collections) is a basis family.

    The empty family counts: it is the zero matroid.
    """
    return is_basis_family(_as_masks(bases, ground), len(ground))


class Matroid:
    """A ground set together with a basis family; the empty family is the zero matroid."""

    __slots__ = ("ground", "bases")

    def __init__(self, ground: GroundSet | Iterable[str], bases: Iterable, check: bool = True):
        self.ground = ground if isinstance(ground, GroundSet) else GroundSet(ground)
        masks = _as_masks(bases, self.ground)
        self.bases: tuple[int, ...] = tuple(sorted(set(masks)))
        if check and not is_basis_family(self.bases, len(self.ground)):
            raise ValueError("basis family violates the exchange axiom")

    @classmethod
    def from_labels(cls, ground: Iterable[str], bases: Iterable[Iterable[str]]) -> Matroid:
        g = GroundSet(ground)
        return cls(g, [g.mask(b) for b in bases])

    @classmethod
    def uniform(cls, rank: int, ground: GroundSet | Iterable[str]) -> Matroid:
        g = ground if isinstance(ground, GroundSet) else GroundSet(ground)
        return cls(g, masks_of_size(len(g), rank), check=False)

    @classmethod
    def zero(cls, ground: GroundSet | Iterable[str]) -> Matroid:
        return cls(ground, [], check=False)

    @property
    def is_zero(self) -> bool:
        return not self.bases

    @property
    def rank(self) -> int | None:
        return self.bases[0].bit_count() if self.bases else None

    def basis_labels(self) -> list[tuple[str, ...]]:
        return [self.ground.labels(b) for b in self.bases]

    def dual(self) -> Matroid:
        full = self.ground.full
        return Matroid(self.ground, [full & ~b for b in self.bases], check=False)

    def as_relation(self) -> SubsetRelation:
        """The matroid as a morphism from the empty ground set."""
        return SubsetRelation(GroundSet(), self.ground, [(0, b) for b in self.bases])

    def relabel(self, mapping: Mapping[str, str]) -> Matroid:
        target = GroundSet(mapping.get(p, p) for p in self.ground.points)
        move = Transport(self.ground, target, {p: mapping.get(p, p) for p in self.ground.points})
        return Matroid(target, [move(b) for b in self.bases], check=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Matroid) and self.ground == other.ground and self.bases == other.bases

    def __hash__(self) -> int:
        return hash((self.ground, self.bases))

    def __repr__(self) -> str:
        return f"Matroid({list(self.ground.points)!r}, {[list(b) for b in self.basis_labels()]!r})"


# --------------------------------------------------------------------------- relations


class SubsetRelation:
    """A relation between the subset lattices of ``domain`` and ``codomain``.

    ``pairs`` holds the related ``(X, Y)`` masks, sorted and deduplicated.
    Values are treated as immutable.
    """

    def __init__(self, domain: GroundSet, codomain: GroundSet, pairs: Iterable[tuple[int, int]] = ()):
        cap = max_ground_size()
        if len(domain) > cap or len(codomain) > cap:
            raise GroundSizeError(
                f"relation side exceeds the cap {cap} (set {MAX_GROUND_ENV} to raise it)"
            )
        self.domain = domain
        self.codomain = codomain
        self.pairs: tuple[tuple[int, int], ...] = tuple(sorted(set(pairs)))
        na, nb = len(domain), len(codomain)
        for x, y in self.pairs:
            if x < 0 or y < 0 or x >> na or y >> nb:
                raise ValueError("relation pair indexes positions outside its ground sets")

    @classmethod
    def from_labels(
        cls,
        domain: Iterable[str],
        codomain: Iterable[str],
        pairs: Iterable[tuple[Iterable[str], Iterable[str]]],
    ) -> SubsetRelation:
        a, b = GroundSet(domain), GroundSet(codomain)
        return cls(a, b, [(a.mask(x), b.mask(y)) for x, y in pairs])

    @cached_property
    def pair_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.pairs)

    @cached_property
    def by_domain(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for x, y in self.pairs:
            out.setdefault(x, []).append(y)
        return {x: tuple(ys) for x, ys in out.items()}

    @cached_property
    def by_codomain(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for x, y in self.pairs:
            out.setdefault(y, []).append(x)
        return {y: tuple(xs) for y, xs in out.items()}

    @property
    def is_zero(self) -> bool:
        return not self.pairs

    def __contains__(self, pair: object) -> bool:
        return pair in self.pair_set

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SubsetRelation)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.pairs == other.pairs
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.pairs))

    def __repr__(self) -> str:
        shown = [
            (list(self.domain.labels(x)), list(self.codomain.labels(y))) for x, y in self.pairs[:6]
        ]
        more = ", ..." if len(self.pairs) > 6 else ""
        return (
            f"SubsetRelation({list(self.domain.points)!r} -> {list(self.codomain.points)!r}, "
            f"{len(self.pairs)} pairs: {shown!r}{more})"
        )

    def labelled_pairs(self) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
        return [(self.domain.labels(x), self.codomain.labels(y)) for x, y in self.pairs]


# --------------------------------------------------------------------------- exchange


def _combined_masks(lam: SubsetRelation) -> frozenset[int]:
    full = lam.domain.full
    na = len(lam.domain)
    return frozenset((full & ~x) | (y << na) for x, y in lam.pairs)


def exchangeable(lam: SubsetRelation, x: int, y: int, u: tuple[str, int], v: tuple[str, int]) -> bool:
    """Whether points ``u`` and ``v`` are exchangeable in ``x lam y``.

    Points are ``("d", i)`` for domain position ``i`` or ``("c", j)`` for
    codomain position ``j``.  The eight membership cases are spelled out.
    """
    if u == v:
        return True
    rel = lam.pair_set
    (su, iu), (sv, iv) = u, v
    bu, bv = 1 << iu, 1 << iv

    def inx(side: str, b: int) -> bool:
        return side == "d" and bool(x & b)

    def notx(side: str, b: int) -> bool:
        return side == "d" and not x & b

    def iny(side: str, b: int) -> bool:
        return side == "c" and bool(y & b)

    def noty(side: str, b: int) -> bool:
        return side == "c" and not y & b

    if inx(su, bu) and iny(sv, bv) and (x & ~bu, y & ~bv) in rel:
        return True
    if notx(su, bu) and noty(sv, bv) and (x | bu, y | bv) in rel:
        return True
    if iny(su, bu) and inx(sv, bv) and (x & ~bv, y & ~bu) in rel:
        return True
    if noty(su, bu) and notx(sv, bv) and (x | bv, y | bu) in rel:
        return True
    if inx(su, bu) and notx(sv, bv) and ((x & ~bu) | bv, y) in rel:
        return True
    if notx(su, bu) and inx(sv, bv) and ((x | bu) & ~bv, y) in rel:
        return True
    if iny(su, bu) and noty(sv, bv) and (x, (y & ~bu) | bv) in rel:
        return True
    if noty(su, bu) and iny(sv, bv) and (x, (y | bu) & ~bv) in rel:
        return True
    return False


def _outside_or_in(lam: SubsetRelation, x: int, y: int) -> list[tuple[str, int]]:
    """Points of the complement of ``x`` (domain) together with points of ``y``."""
    pts = [("d", i) for i in range(len(lam.domain)) if not x >> i & 1]
    pts += [("c", j) for j in bits(y)]
    return pts


def exchange_check_direct(lam: SubsetRelation) -> bool:
    """Relational exchange axiom, checked over all quadruples (slow reference form)."""
    for x, y in lam.pairs:
        candidates_u = _outside_or_in(lam, x, y)
        for x2, y2 in lam.pairs:
            targets = _outside_or_in(lam, x2, y2)
            for u in candidates_u:
                if not any(exchangeable(lam, x, y, u, v) for v in targets):
                    return False
    return True


def exchange_check(lam: SubsetRelation, method: str = "matroid") -> bool:
    """Whether ``lam`` satisfies the relational exchange axiom.

    ``method="matroid"`` tests the associated basis family; ``"direct"`` runs
    the quadruple-by-quadruple definition.
    """
    if method == "direct":
        return exchange_check_direct(lam)
    if method != "matroid":
        raise ValueError(f"unknown method {method!r}")
    return is_basis_family(_combined_masks(lam), len(lam.domain) + len(lam.codomain))


def associated_matroid(lam: SubsetRelation) -> Matroid:
    """Bases are complement-of-X joined with Y over related pairs.

    Labels shared by domain and codomain are tagged ``/d`` and ``/c``.
    """
    ground, left, right = disjoint_union(lam.domain, lam.codomain, (DOMAIN_TAG, CODOMAIN_TAG))
    from_a = Transport(lam.domain, ground, left)
    from_b = Transport(lam.codomain, ground, right)
    full = lam.domain.full
    return Matroid(ground, [from_a(full & ~x) | from_b(y) for x, y in lam.pairs], check=False)


def degree(lam: SubsetRelation) -> int | None:
    """Common value of ``|Y| - |X|``; ``None`` for the zero relation."""
    if not exchange_check(lam):
        raise ValueError("degree is only defined for exchange relations")
    if lam.is_zero:
        return None
    x, y = lam.pairs[0]
    return y.bit_count() - x.bit_count()


# --------------------------------------------------------------------------- constructors


def _ground(g: GroundSet | Iterable[str]) -> GroundSet:
    return g if isinstance(g, GroundSet) else GroundSet(g)


def _subset_mask(g: GroundSet, s: Subset | Iterable[str] | int) -> int:
    if isinstance(s, Subset):
        if s.ground != g:
            raise ValueError("subset over a different ground set")
        return s.mask
    if isinstance(s, int):
        if s < 0 or s >> len(g):
            raise ValueError("mask outside the ground set")
        return s
    return g.mask(s)


def zero_relation(a, b) -> SubsetRelation:
    return SubsetRelation(_ground(a), _ground(b), ())


def identity_relation(a) -> SubsetRelation:
    g = _ground(a)
    return SubsetRelation(g, g, ((m, m) for m in range(1 << len(g))))


def elementary_relation(a, b, p, q) -> SubsetRelation:
    """The single pair ``(p, q)``."""
    ga, gb = _ground(a), _ground(b)
    return SubsetRelation(ga, gb, [(_subset_mask(ga, p), _subset_mask(gb, q))])


def covering_relation(a) -> SubsetRelation:
    """Pairs ``X`` contained in ``Y`` with ``|Y| = |X| + 1``."""
    g = _ground(a)
    pairs = []
    for m in range(1 << len(g)):
        for i in bits(g.full & ~m):
            pairs.append((m, m | 1 << i))
    return SubsetRelation(g, g, pairs)


def partial_identity_relation(a, p, q) -> SubsetRelation:
    """Pairs with ``Y`` minus ``X`` equal to ``p`` and ``X`` minus ``Y`` equal to ``q``."""
    g = _ground(a)
    pm, qm = _subset_mask(g, p), _subset_mask(g, q)
    if pm & qm:
        raise ValueError("partial identity needs disjoint sets")
    pairs = []
    for x in range(1 << len(g)):
        if x & pm or (x & qm) != qm:
            continue
        pairs.append((x, (x | pm) & ~qm))
    return SubsetRelation(g, g, pairs)


def uniform_relation(a, b, k: int) -> SubsetRelation:
    """Pairs with ``|Y| - |X| = k``."""
    ga, gb = _ground(a), _ground(b)
    pairs = []
    for i in range(len(ga) + 1):
        ys = masks_of_size(len(gb), i + k)
        if not ys:
            continue
        for x in masks_of_size(len(ga), i):
            pairs.extend((x, y) for y in ys)
    return SubsetRelation(ga, gb, pairs)


def basic_relation(kind: str, a, b=None, *, p=(), q=(), k: int = 0) -> SubsetRelation:
    """Dispatch over the named constructors.

    ``kind`` is one of ``zero``, ``identity``, ``elementary``, ``covering``,
    ``partial_identity``, ``uniform``.
    """
    ga = _ground(a)
    gb = ga if b is None else _ground(b)
    if kind in ("identity", "covering", "partial_identity") and ga != gb:
        raise ValueError(f"{kind} relation needs equal domain and codomain")
    if kind == "zero":
        return zero_relation(ga, gb)
    if kind == "identity":
        return identity_relation(ga)
    if kind == "elementary":
        return elementary_relation(ga, gb, p, q)
    if kind == "covering":
        return covering_relation(ga)
    if kind == "partial_identity":
        return partial_identity_relation(ga, p, q)
    if kind == "uniform":
        return uniform_relation(ga, gb, k)
    raise ValueError(f"unknown relation kind {kind!r}")


# --------------------------------------------------------------------------- structure


def adjoint(lam: SubsetRelation) -> SubsetRelation:
    return SubsetRelation(lam.codomain, lam.domain, ((y, x) for x, y in lam.pairs))


def complement(lam: SubsetRelation) -> SubsetRelation:
    fa, fb = lam.domain.full, lam.codomain.full
    return SubsetRelation(lam.domain, lam.codomain, ((fa & ~x, fb & ~y) for x, y in lam.pairs))


def relabel(
    lam: SubsetRelation,
    domain: Mapping[str, str] | None = None,
    codomain: Mapping[str, str] | None = None,
) -> SubsetRelation:
    """Rename points; labels missing from a mapping keep their name."""
    dmap = {p: (domain or {}).get(p, p) for p in lam.domain.points}
    cmap = {p: (codomain or {}).get(p, p) for p in lam.codomain.points}
    ga, gb = GroundSet(dmap.values()), GroundSet(cmap.values())
    ma, mb = Transport(lam.domain, ga, dmap), Transport(lam.codomain, gb, cmap)
    return SubsetRelation(ga, gb, ((ma(x), mb(y)) for x, y in lam.pairs))


def tensor(lam: SubsetRelation, mu: SubsetRelation, tags: tuple[str, str] = TENSOR_TAGS) -> SubsetRelation:
    """Componentwise product on disjoint unions; shared labels are tagged."""
    ga, la, lc = disjoint_union(lam.domain, mu.domain, tags)
    gb, lb, ld = disjoint_union(lam.codomain, mu.codomain, tags)
    ta, tc = Transport(lam.domain, ga, la), Transport(mu.domain, ga, lc)
    tb, td = Transport(lam.codomain, gb, lb), Transport(mu.codomain, gb, ld)
    left = [(ta(x), tb(y)) for x, y in lam.pairs]
    right = [(tc(x), td(y)) for x, y in mu.pairs]
    return SubsetRelation(ga, gb, ((x1 | x2, y1 | y2) for x1, y1 in left for x2, y2 in right))


def transfer_points(
    lam: SubsetRelation,
    from_domain: Iterable[str] = (),
    from_codomain: Iterable[str] = (),
) -> SubsetRelation:
    """Move points across the relation without changing its associated matroid.

    A point leaving the domain enters the codomain complemented, and vice
    versa.  Labels that then clash are tagged ``/d`` (moved from the domain)
    or ``/c`` (moved from the codomain).
    """
    s = list(from_domain)
    t = list(from_codomain)
    if s and t:
        raise ValueError("transfer points from one side at a time")
    if t:
        return adjoint(transfer_points(adjoint(lam), from_domain=t))
    if not s:
        return lam
    if any(p not in lam.domain for p in s):
        raise ValueError(f"points {s} not all in the domain")
    sg = lam.domain.restrict(s)
    rest = lam.domain.without(s)
    gb, ls, lb = disjoint_union(sg, lam.codomain, (DOMAIN_TAG, CODOMAIN_TAG))
    keep_positions = [lam.domain.index(p) for p in rest.points]
    move_positions = [lam.domain.index(p) for p in sg.points]
    ts = Transport(sg, gb, ls)
    tb = Transport(lam.codomain, gb, lb)
    pairs = []
    for x, y in lam.pairs:
        xr = 0
        for i, pos in enumerate(keep_positions):
            if x >> pos & 1:
                xr |= 1 << i
        moved = 0
        for i, pos in enumerate(move_positions):
            if not x >> pos & 1:
                moved |= 1 << i
        pairs.append((xr, ts(moved) | tb(y)))
    return SubsetRelation(rest, gb, pairs)


def transversal_relation(phi: Mapping[str, str], a=None, b=None) -> SubsetRelation:
    """Pairs where ``phi`` restricts to a bijection from ``X`` onto ``Y``.

    ``a`` defaults to the keys of ``phi`` and ``b`` to its values.
    """
    ga = _ground(a) if a is not None else GroundSet(phi)
    gb = _ground(b) if b is not None else GroundSet(set(phi.values()))
    if set(phi) != set(ga.points):
        raise ValueError("map must be total on the domain")
    image = [1 << gb.index(phi[p]) for p in ga.points]
    pairs = []
    for x in range(1 << len(ga)):
        y = 0
        ok = True
        for i in bits(x):
            if y & image[i]:
                ok = False
                break
            y |= image[i]
        if ok:
            pairs.append((x, y))
    return SubsetRelation(ga, gb, pairs)


def leq(lam: SubsetRelation, other: SubsetRelation) -> bool:
    """Containment of pair sets over the same interface."""
    if lam.domain != other.domain or lam.codomain != other.codomain:
        raise ValueError("relations over different ground sets")
    return lam.pair_set <= other.pair_set


def relation_range(lam: SubsetRelation) -> list[Subset]:
    return [Subset(lam.codomain, y) for y in sorted(lam.by_codomain)]


def corange(lam: SubsetRelation) -> list[Subset]:
    return [Subset(lam.domain, x) for x in sorted(lam.by_domain)]


def is_bimatroid(lam: SubsetRelation) -> bool:
    return (0, 0) in lam.pair_set and exchange_check(lam)


def is_isomorphism(lam: SubsetRelation) -> dict[str, str] | None:
    """The bijection ``phi`` with ``X lam Y`` iff ``Y = phi(X)``, or ``None``."""
    n = len(lam.domain)
    if n != len(lam.codomain) or len(lam.pairs) != 1 << n:
        return None
    images = lam.by_domain
    phi: dict[str, str] = {}
    for i, p in enumerate(lam.domain.points):
        ys = images.get(1 << i, ())
        if len(ys) != 1 or ys[0].bit_count() != 1:
            return None
        phi[p] = lam.codomain.points[ys[0].bit_length() - 1]
    if len(set(phi.values())) != n:
        return None
    image = [1 << lam.codomain.index(phi[p]) for p in lam.domain.points]
    for x, y in lam.pairs:
        if sum(image[i] for i in bits(x)) != y:
            return None
    return phi


# --------------------------------------------------------------------------- json


def matroid_to_json(m: Matroid) -> dict:
    return {"ground": list(m.ground.points), "bases": [list(b) for b in m.basis_labels()]}


def matroid_from_json(doc: Mapping) -> Matroid:
    ground = GroundSet(doc["ground"])
    return Matroid(ground, [ground.mask(b) for b in doc["bases"]], check=False)


def relation_to_json(lam: SubsetRelation) -> dict:
    return {
        "domain": list(lam.domain.points),
        "codomain": list(lam.codomain.points),
        "pairs": [[list(x), list(y)] for x, y in lam.labelled_pairs()],
    }


def relation_from_json(doc: Mapping) -> SubsetRelation:
    a, b = GroundSet(doc["domain"]), GroundSet(doc["codomain"])
    return SubsetRelation(a, b, [(a.mask(x), b.mask(y)) for x, y in doc["pairs"]])


def subsets_of(ground: GroundSet) -> Sequence[int]:
    return range(1 << len(ground))


@dataclass(frozen=True, order=True)
class CompositionType:
    """A pair ``(k, l)`` of nonnegative integers, ordered componentwise by ``dominates``."""

    k: int = 0
    l: int = 0

    def __post_init__(self) -> None:
        if self.k < 0 or self.l < 0:
            raise ValueError("composition type entries must be nonnegative")

    @property
    def total(self) -> int:
        return self.k + self.l

    def dominates(self, other: CompositionType) -> bool:
        return self.k >= other.k and self.l >= other.l

    def __add__(self, other: CompositionType) -> CompositionType:
        return CompositionType(self.k + other.k, self.l + other.l)

    def __sub__(self, other: CompositionType) -> tuple[int, int]:
        return (self.k - other.k, self.l - other.l)

    def as_list(self) -> list[int]:
        return [self.k, self.l]
