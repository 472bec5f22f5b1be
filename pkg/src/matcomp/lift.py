"""Dominant morphisms, projections and general lifts.

These are verification instruments: they let the definite-type and type
formula claims for lax composition be checked through an independent route.
Auxiliary sets ``S`` and ``T`` sit beside the domain and codomain, so their
labels must not clash with the base ground sets.
"""

from __future__ import annotations

from .compose import compose_strict
from .core import (
    CompositionType,
    GroundSet,
    SubsetRelation,
    Transport,
    bits,
    exchangeable,
    identity_relation,
    tensor,
    uniform_relation,
)


def is_dominant(mu: SubsetRelation) -> bool:
    """Every codomain point has a domain partner it is exchangeable with, at every pair."""
    na, nb = len(mu.domain), len(mu.codomain)
    for x, y in mu.pairs:
        for j in range(nb):
            if not any(exchangeable(mu, x, y, ("d", i), ("c", j)) for i in range(na)):
                return False
    return True


def make_dominant(mu: SubsetRelation, prefix: str = "dom") -> SubsetRelation:
    """``mu`` followed by a uniform relation of degree ``-m`` onto ``n - m`` fresh points.

    ``m`` and ``n`` are the smallest and largest codomain set sizes of ``mu``.
    """
    if mu.is_zero:
        raise ValueError("make_dominant needs a nonzero relation")
    sizes = [y.bit_count() for y in mu.by_codomain]
    m, n = min(sizes), max(sizes)
    taken = set(mu.domain.points) | set(mu.codomain.points)
    names = []
    i = 0
    while len(names) < n - m:
        name = f"{prefix}{i}"
        if name not in taken:
            names.append(name)
        i += 1
    return compose_strict(mu, uniform_relation(mu.codomain, GroundSet(names), -m))


def _split(big: GroundSet, base: GroundSet, aux: GroundSet) -> tuple[list[int], list[int]]:
    if set(base.points) & set(aux.points):
        raise ValueError("auxiliary labels must differ from the base labels")
    if set(big.points) != set(base.points) | set(aux.points):
        raise ValueError("shape mismatch between the lift and its base and auxiliary sets")
    return [big.index(p) for p in base.points], [big.index(p) for p in aux.points]


def _gather(mask: int, positions: list[int]) -> int:
    out = 0
    for i, pos in enumerate(positions):
        if mask >> pos & 1:
            out |= 1 << i
    return out


def _bases(lifted: SubsetRelation, s: GroundSet, t: GroundSet) -> tuple[GroundSet, GroundSet]:
    if any(p not in lifted.domain for p in s.points) or any(p not in lifted.codomain for p in t.points):
        raise ValueError("shape mismatch between the lift and its auxiliary sets")
    return lifted.domain.without(s.points), lifted.codomain.without(t.points)


def projection(lifted: SubsetRelation, s: GroundSet, t: GroundSet, k: int, l: int) -> SubsetRelation:
    """Pin ``k`` auxiliary domain points on and ``l`` auxiliary codomain points off by composition."""
    a, b = _bases(lifted, s, t)
    _split(lifted.domain, a, s)
    _split(lifted.codomain, b, t)
    left = tensor(identity_relation(a), uniform_relation(GroundSet(), s, k))
    right = tensor(identity_relation(b), uniform_relation(t, GroundSet(), -l))
    return compose_strict(compose_strict(left, lifted), right)


def projection_direct(lifted: SubsetRelation, s: GroundSet, t: GroundSet, k: int, l: int) -> SubsetRelation:
    """Pairs ``(X, Y)`` with some ``(X + U, Y + V)`` in ``lifted`` where ``|U| = k`` and ``|V| = l``."""
    a, b = _bases(lifted, s, t)
    pa, ps = _split(lifted.domain, a, s)
    pb, pt = _split(lifted.codomain, b, t)
    pairs = set()
    for x, y in lifted.pairs:
        if _gather(x, ps).bit_count() == k and _gather(y, pt).bit_count() == l:
            pairs.add((_gather(x, pa), _gather(y, pb)))
    return SubsetRelation(a, b, pairs)


def size_profile(lifted: SubsetRelation, s: GroundSet, t: GroundSet) -> set[tuple[int, int]]:
    """The ``(|U|, |V|)`` values realised by pairs of ``lifted``."""
    a, b = _bases(lifted, s, t)
    _, ps = _split(lifted.domain, a, s)
    _, pt = _split(lifted.codomain, b, t)
    return {(_gather(x, ps).bit_count(), _gather(y, pt).bit_count()) for x, y in lifted.pairs}


def lift_type(lifted: SubsetRelation, s: GroundSet, t: GroundSet) -> tuple[CompositionType, SubsetRelation] | None:
    """Type and base of ``lifted`` as a lift, or ``None`` if it is not a lift of anything.

    A lift needs a unique minimal size profile that every other profile dominates.
    """
    profile = size_profile(lifted, s, t)
    if not profile:
        return None
    minimal = [(k, l) for k, l in profile if not any((k2, l2) != (k, l) and k2 <= k and l2 <= l for k2, l2 in profile)]
    if len(minimal) != 1:
        return None
    k, l = minimal[0]
    return CompositionType(k, l), projection_direct(lifted, s, t, k, l)


def general_lift(lam: SubsetRelation, s: GroundSet, t: GroundSet, k: int, l: int) -> SubsetRelation:
    """The smallest lift of type ``(k, l)`` in which every auxiliary point is general.

    ``(X, U)`` relates to ``(Y, V)`` when some ``X' lam Y'`` and ``c >= 0`` give
    ``|U| = |X' - X| + |Y - Y'| + k + c`` and ``|V| = |X - X'| + |Y' - Y| + l + c``.
    """
    if lam.is_zero:
        raise ValueError("general_lift needs a nonzero relation")
    a, b = lam.domain, lam.codomain
    if set(a.points) & set(s.points) or set(b.points) & set(t.points):
        raise ValueError("auxiliary labels must differ from the base labels")
    dom = GroundSet(list(a.points) + list(s.points))
    cod = GroundSet(list(b.points) + list(t.points))
    ta, ts = Transport(a, dom), Transport(s, dom)
    tb, tt = Transport(b, cod), Transport(t, cod)
    ns, nt = len(s), len(t)
    u_by_size = [[ts(m) for m in range(1 << ns) if m.bit_count() == i] for i in range(ns + 1)]
    v_by_size = [[tt(m) for m in range(1 << nt) if m.bit_count() == j] for j in range(nt + 1)]
    pairs = []
    for x in range(1 << len(a)):
        for y in range(1 << len(b)):
            sizes = set()
            for x2, y2 in lam.pairs:
                du = (x2 & ~x).bit_count() + (y & ~y2).bit_count() + k
                dv = (x & ~x2).bit_count() + (y2 & ~y).bit_count() + l
                c = 0
                while du + c <= ns and dv + c <= nt:
                    sizes.add((du + c, dv + c))
                    c += 1
            if not sizes:
                continue
            xm, ym = ta(x), tb(y)
            for du, dv in sizes:
                for um in u_by_size[du]:
                    for vm in v_by_size[dv]:
                        pairs.append((xm | um, ym | vm))
    return SubsetRelation(dom, cod, pairs)


def _general_points_matroid(family: frozenset[int], n: int, positions_out: list[int], positions_in: list[int]) -> bool:
    # out: points that may enter any basis missing them; in: points that may leave any basis holding them
    for basis in family:
        for pos in positions_out:
            bit = 1 << pos
            if basis & bit:
                continue
            for z in bits(basis):
                if (basis & ~(1 << z)) | bit not in family:
                    return False
        for pos in positions_in:
            bit = 1 << pos
            if not basis & bit:
                continue
            for z in range(n):
                if basis >> z & 1:
                    continue
                if (basis & ~bit) | (1 << z) not in family:
                    return False
    return True


def is_general(lifted: SubsetRelation, s: GroundSet, t: GroundSet, method: str = "matroid") -> bool:
    """Nonzero, and every point of ``s`` and ``t`` is general.

    ``method="pointwise"`` checks exchangeability pair by pair; ``"matroid"``
    checks the same condition on the associated basis family.
    """
    if lifted.is_zero:
        return False
    ps = [lifted.domain.index(p) for p in s.points]
    pt = [lifted.codomain.index(p) for p in t.points]
    if method == "pointwise":
        na, nb = len(lifted.domain), len(lifted.codomain)
        for x, y in lifted.pairs:
            for j in pt:
                if y >> j & 1:
                    continue
                others = [("d", i) for i in range(na) if not x >> i & 1] + [("c", c) for c in bits(y)]
                if not all(exchangeable(lifted, x, y, ("c", j), z) for z in others):
                    return False
            for i in ps:
                if x >> i & 1:
                    continue
                # general in the adjoint: z runs over the complement of Y and over X
                others = [("c", c) for c in range(nb) if not y >> c & 1] + [("d", d) for d in bits(x)]
                if not all(exchangeable(lifted, x, y, ("d", i), z) for z in others):
                    return False
        return True
    if method != "matroid":
        raise ValueError(f"unknown method {method!r}")
    na = len(lifted.domain)
    full = lifted.domain.full
    family = frozenset((full & ~x) | (y << na) for x, y in lifted.pairs)
    n = na + len(lifted.codomain)
    return _general_points_matroid(family, n, [na + j for j in pt], ps)


def dominant_lift_check(
    lam: SubsetRelation, mu: SubsetRelation, s: GroundSet, t: GroundSet, k: int, l: int
) -> tuple[bool, SubsetRelation | None, CompositionType | None]:
    """Compose the general lift of ``lam`` with ``mu`` on the base and read off the result.

    Returns whether the composite is an ``(S, T)``-general lift, its base and
    its type relative to ``(k, l)``.
    """
    lifted = general_lift(lam, s, t, k, l)
    composite = compose_strict(lifted, tensor(mu, identity_relation(t)))
    if not is_general(composite, s, t):
        return False, None, None
    found = lift_type(composite, s, t)
    if found is None:
        return False, None, None
    kind, base = found
    dk, dl = kind - CompositionType(k, l)
    if dk < 0 or dl < 0:
        return False, base, None
    return True, base, CompositionType(dk, dl)
