"""Strict, lax and multifold composition of subset relations.

Composition is written in diagrammatic order: ``compose_strict(lam, mu)``
first applies ``lam`` and then ``mu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .core import (
    TENSOR_TAGS,
    CompositionType,
    GroundSet,
    Subset,
    SubsetRelation,
    Transport,
    adjoint,
    complement,
    covering_relation,
    disjoint_union,
    identity_relation,
    masks_of_size,
    partial_identity_relation,
    relabel,
    relation_to_json,
    tensor,
)


class DefiniteTypeViolation(AssertionError):
    """Two different types share the minimal total; this signals a defect."""


def _check_interface(lam: SubsetRelation, mu: SubsetRelation) -> None:
    if lam.codomain != mu.domain:
        raise ValueError(
            f"cannot compose: codomain {list(lam.codomain.points)} "
            f"differs from domain {list(mu.domain.points)}"
        )


def compose_strict(lam: SubsetRelation, mu: SubsetRelation) -> SubsetRelation:
    """Relational composite: ``X`` to ``Z`` iff some ``Y`` has ``X lam Y`` and ``Y mu Z``."""
    _check_interface(lam, mu)
    index = mu.by_domain
    pairs = set()
    for x, y in lam.pairs:
        zs = index.get(y)
        if zs:
            pairs.update((x, z) for z in zs)
    return SubsetRelation(lam.domain, mu.codomain, pairs)


def compose_many(*relations: SubsetRelation) -> SubsetRelation:
    out = relations[0]
    for r in relations[1:]:
        out = compose_strict(out, r)
    return out


# --------------------------------------------------------------------------- rigid structure


def evaluation(a: GroundSet) -> SubsetRelation:
    """Evaluation on two tagged copies of ``a``: the copies are complementary."""
    ground, left, right = disjoint_union(a, a, TENSOR_TAGS)
    tl, tr = Transport(a, ground, left), Transport(a, ground, right)
    full = a.full
    return SubsetRelation(ground, GroundSet(), ((tl(x) | tr(full & ~x), 0) for x in range(1 << len(a))))


def coevaluation(a: GroundSet) -> SubsetRelation:
    return adjoint(evaluation(a))


def snake(a: GroundSet, side: str = "left") -> SubsetRelation:
    """One of the two zigzag composites, which should both equal the identity on ``a``.

    ``side="left"`` wires ``1 (x) coev`` into ``ev (x) 1``; ``side="right"``
    wires ``coev (x) 1`` into ``1 (x) ev``.  The middle object is three copies
    of ``a`` matched by position, not by label.
    """
    one = identity_relation(a)
    ev, coev = evaluation(a), coevaluation(a)
    first_tag, second_tag = TENSOR_TAGS
    if side == "left":
        top = tensor(one, coev)
        bottom = tensor(ev, one)
        # positions (a, a/1, a/2) feed (a/1, a/2, a)
        shift = {p: p + first_tag for p in a.points}
        shift.update({p + first_tag: p + second_tag for p in a.points})
        shift.update({p + second_tag: p for p in a.points})
    elif side == "right":
        top = tensor(coev, one)
        bottom = tensor(one, ev)
        # positions (a/1, a/2, a) feed (a, a/1, a/2)
        shift = {p + first_tag: p for p in a.points}
        shift.update({p + second_tag: p + first_tag for p in a.points})
        shift.update({p: p + second_tag for p in a.points})
    else:
        raise ValueError("side must be 'left' or 'right'")
    return compose_strict(relabel(top, codomain=shift), bottom)


# --------------------------------------------------------------------------- lax composition


@dataclass(frozen=True)
class LaxResult:
    relation: SubsetRelation
    type: CompositionType

    @property
    def total_type(self) -> int:
        return self.type.total

    def to_json(self) -> dict:
        return {"type": self.type.as_list(), "relation": relation_to_json(self.relation)}


def _middle_hits(lam: SubsetRelation, mu: SubsetRelation) -> tuple[int, dict[tuple[int, int], list]]:
    """Minimal ``|Y xor Y'|`` over range/corange and the middle pairs achieving it, by type."""
    best = None
    hits: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for yp in lam.by_codomain:
        for y in mu.by_domain:
            d = (yp ^ y).bit_count()
            if best is None or d < best:
                best = d
                hits = {}
            if d == best:
                key = ((y & ~yp).bit_count(), (yp & ~y).bit_count())
                hits.setdefault(key, []).append((yp, y))
    return (best if best is not None else 0), hits


def _level_from_middles(lam: SubsetRelation, mu: SubsetRelation, middles) -> SubsetRelation:
    xs, zs = lam.by_codomain, mu.by_domain
    pairs = set()
    for yp, y in middles:
        for x in xs[yp]:
            pairs.update((x, z) for z in zs[y])
    return SubsetRelation(lam.domain, mu.codomain, pairs)


def bullet_level(lam: SubsetRelation, mu: SubsetRelation, k: int, l: int) -> SubsetRelation:
    """Pairs ``(X, Z)`` joined through ``X lam Y'`` and ``Y mu Z`` with ``|Y - Y'| = k``, ``|Y' - Y| = l``."""
    _check_interface(lam, mu)
    middles = [
        (yp, y)
        for yp in lam.by_codomain
        for y in mu.by_domain
        if (y & ~yp).bit_count() == k and (yp & ~y).bit_count() == l
    ]
    return _level_from_middles(lam, mu, middles)


def lax_levels(lam: SubsetRelation, mu: SubsetRelation) -> dict[CompositionType, SubsetRelation]:
    """All nonzero levels at the minimal total ``k + l``."""
    _check_interface(lam, mu)
    if lam.is_zero or mu.is_zero:
        raise ValueError("lax composition is undefined on the zero relation")
    _, hits = _middle_hits(lam, mu)
    return {CompositionType(k, l): _level_from_middles(lam, mu, m) for (k, l), m in sorted(hits.items())}


def compose_lax(lam: SubsetRelation, mu: SubsetRelation) -> LaxResult:
    """Lowest nonzero level of the lax composite, with its type.

    Raises ``ValueError`` on zero inputs and ``DefiniteTypeViolation`` if two
    types tie at the minimal total.
    """
    levels = lax_levels(lam, mu)
    if len(levels) != 1:
        raise DefiniteTypeViolation(
            f"types {[t.as_list() for t in levels]} share the minimal total"
        )
    (kind, rel), = levels.items()
    return LaxResult(rel, kind)


def covering_power(b: GroundSet, k: int, l: int, order: Sequence[str] | None = None) -> SubsetRelation:
    """Composite of ``k`` covering and ``l`` co-covering relations on ``b``.

    ``order`` lists ``"up"`` / ``"down"`` factors; the default puts coverings first.
    """
    if order is None:
        order = ["up"] * k + ["down"] * l
    if sorted(order) != sorted(["up"] * k + ["down"] * l):
        raise ValueError("order must contain k 'up' and l 'down' factors")
    eta = covering_relation(b)
    co = adjoint(eta)
    out = identity_relation(b)
    for step in order:
        out = compose_strict(out, eta if step == "up" else co)
    return out


def covering_composite(
    lam: SubsetRelation, mu: SubsetRelation, k: int, l: int, order: Sequence[str] | None = None
) -> SubsetRelation:
    """``lam`` then ``k`` coverings and ``l`` co-coverings then ``mu``."""
    _check_interface(lam, mu)
    return compose_many(lam, covering_power(lam.codomain, k, l, order), mu)


# --------------------------------------------------------------------------- partial-identity factorization


def _disjoint_pairs(n: int, k: int, l: int) -> Iterator[tuple[int, int]]:
    for kmask in masks_of_size(n, k):
        for lmask in masks_of_size(n, l):
            if not kmask & lmask:
                yield kmask, lmask


def structure_factor(
    lam: SubsetRelation, mu: SubsetRelation, verify_converse: bool = False
) -> tuple[Subset, Subset]:
    """Disjoint ``K``, ``L`` in the middle with ``lam . iota(K, L) . mu`` equal to the lax composite.

    Returns the first witness in lexicographic mask order.  With
    ``verify_converse`` every disjoint pair of the right sizes and nonzero
    composite is also checked to reproduce the lax composite.
    """
    result = compose_lax(lam, mu)
    b = lam.codomain
    k, l = result.type.k, result.type.l
    witness = None
    for kmask, lmask in _disjoint_pairs(len(b), k, l):
        composite = compose_many(lam, partial_identity_relation(b, kmask, lmask), mu)
        if composite == result.relation:
            if witness is None:
                witness = (kmask, lmask)
                if not verify_converse:
                    break
        elif verify_converse and not composite.is_zero:
            raise AssertionError(
                f"partial identity {b.labels(kmask)}, {b.labels(lmask)} gives a different nonzero composite"
            )
    if witness is None:
        raise AssertionError("no partial-identity factorization found")
    return Subset(b, witness[0]), Subset(b, witness[1])


# --------------------------------------------------------------------------- multifold


@dataclass(frozen=True)
class MultifoldPlan:
    """Ground sets ``E_0 .. E_{m+1}`` and stages ``mu_i`` from ``E_i - E_{i+1}`` to ``E_{i+1} - E_i``."""

    grounds: tuple[GroundSet, ...]
    morphisms: tuple[SubsetRelation, ...]

    def __post_init__(self) -> None:
        if len(self.grounds) != len(self.morphisms) + 1:
            raise ValueError("a plan with m+1 stages needs m+2 ground sets")
        for i, mu in enumerate(self.morphisms):
            here, there = set(self.grounds[i].points), set(self.grounds[i + 1].points)
            if set(mu.domain.points) != here - there:
                raise ValueError(f"stage {i} domain must be E_{i} minus E_{i + 1}")
            if set(mu.codomain.points) != there - here:
                raise ValueError(f"stage {i} codomain must be E_{i + 1} minus E_{i}")

    def stage(self, i: int) -> SubsetRelation:
        """Stage ``i`` padded with the identity on ``E_i`` meet ``E_{i+1}``."""
        here, there = self.grounds[i], self.grounds[i + 1]
        shared = GroundSet(set(here.points) & set(there.points))
        return tensor(self.morphisms[i], identity_relation(shared))


def multifold(plan: MultifoldPlan, mode: str = "lax") -> tuple[SubsetRelation, CompositionType]:
    """Left-to-right fold of the padded stages, strict or lax, with the accumulated type."""
    out = plan.stage(0)
    total = CompositionType()
    for i in range(1, len(plan.morphisms)):
        step = plan.stage(i)
        if mode == "strict":
            out = compose_strict(out, step)
        elif mode == "lax":
            r = compose_lax(out, step)
            out, total = r.relation, total + r.type
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return out, total


def multifold_structure(
    plan: MultifoldPlan, verify_converse: bool = False
) -> list[tuple[Subset, Subset]]:
    """Per-stage partial identities turning the strict fold into the lax one.

    Entry ``i - 1`` holds ``(K_i, L_i)`` inside the domain of stage ``i``.
    """
    target, kind = multifold(plan, "lax")
    m = len(plan.morphisms) - 1
    doms = [plan.morphisms[i].domain for i in range(1, m + 1)]
    choices = []
    for d in doms:
        n = len(d)
        opts = []
        for kk in range(min(n, kind.k) + 1):
            for ll in range(min(n - kk, kind.l) + 1):
                opts.extend((kk, ll, km, lm) for km, lm in _disjoint_pairs(n, kk, ll))
        choices.append(opts)
    witness = None
    for combo in product(*choices):
        if sum(c[0] for c in combo) != kind.k or sum(c[1] for c in combo) != kind.l:
            continue
        stages = [plan.morphisms[0]]
        for i, (_, _, km, lm) in enumerate(combo, start=1):
            iota = partial_identity_relation(doms[i - 1], km, lm)
            stages.append(compose_strict(iota, plan.morphisms[i]))
        strict, _ = multifold(MultifoldPlan(plan.grounds, tuple(stages)), "strict")
        if strict == target:
            if witness is None:
                witness = combo
                if not verify_converse:
                    break
        elif verify_converse and not strict.is_zero:
            raise AssertionError("a per-stage partial identity choice gives a different nonzero fold")
    if witness is None:
        raise AssertionError("no per-stage partial-identity factorization found")
    return [(Subset(d, c[2]), Subset(d, c[3])) for d, c in zip(doms, witness)]


def evaluation_plan(lam: SubsetRelation, mu: SubsetRelation) -> tuple[MultifoldPlan, dict[str, str], dict[str, str]]:
    """Rewrite ``lam`` then ``mu`` as a fold over one evaluation per middle point.

    Stage 0 runs ``lam`` and ``mu`` side by side, joined through a
    coevaluation on the middle set; each later stage evaluates one middle
    point against its partner copy.  Returns the plan and the label maps that
    undo the renaming of the outer ground sets.
    """
    _check_interface(lam, mu)
    a, b, c = lam.domain, lam.codomain, mu.codomain
    amap = {p: "in:" + p for p in a.points}
    cmap = {p: "out:" + p for p in c.points}
    b0 = {p: "mid0:" + p for p in b.points}
    b1 = {p: "mid1:" + p for p in b.points}
    b2 = {p: "mid2:" + p for p in b.points}
    first, second = TENSOR_TAGS

    lam_r = relabel(lam, amap, b0)
    mu_r = relabel(mu, b2, cmap)
    coev = relabel(
        coevaluation(b),
        codomain={**{p + first: b1[p] for p in b.points}, **{p + second: b2[p] for p in b.points}},
    )
    a_r = GroundSet(amap.values())
    top = tensor(identity_relation(a_r), coev)
    bottom = tensor(tensor(lam_r, identity_relation(GroundSet(b1.values()))), mu_r)
    stage0 = compose_strict(top, bottom)

    grounds = [a_r, stage0.codomain]
    stages = [stage0]
    current = set(stage0.codomain.points)
    for p in b.points:
        ev = relabel(evaluation(GroundSet([p])), domain={p + first: b0[p], p + second: b1[p]})
        stages.append(ev)
        current -= {b0[p], b1[p]}
        grounds.append(GroundSet(current))
    plan = MultifoldPlan(tuple(grounds), tuple(stages))
    return plan, {v: k for k, v in amap.items()}, {v: k for k, v in cmap.items()}


def lax_via_evaluations(lam: SubsetRelation, mu: SubsetRelation) -> LaxResult:
    """Lax composite recomputed as a fold of per-point evaluations."""
    plan, back_a, back_c = evaluation_plan(lam, mu)
    rel, kind = multifold(plan, "lax")
    return LaxResult(relabel(rel, back_a, back_c), kind)


# --------------------------------------------------------------------------- hom functor and base change


def hom_apply(mu: SubsetRelation, lam: SubsetRelation, mode: str = "strict") -> SubsetRelation:
    """Push ``mu`` (an object over its domain) forward along ``lam``."""
    if mode == "strict":
        return compose_strict(mu, lam)
    if mode == "lax":
        return compose_lax(mu, lam).relation
    raise ValueError(f"unknown mode {mode!r}")


def base_change(kappa: SubsetRelation, mu: SubsetRelation, mode: str = "strict") -> SubsetRelation:
    """Move ``mu`` from base ``S`` to base ``T`` along ``kappa`` from ``S`` to ``T``.

    The result is the adjoint complement of ``kappa`` followed by ``mu``.
    """
    pull = adjoint(complement(kappa))
    if mode == "strict":
        return compose_strict(pull, mu)
    if mode == "lax":
        return compose_lax(pull, mu).relation
    raise ValueError(f"unknown mode {mode!r}")


def meet_relation(s: GroundSet) -> SubsetRelation:
    """From two tagged copies of ``s`` to ``s``: the copies cover ``s`` and meet in ``Z``."""
    ground, left, right = disjoint_union(s, s, TENSOR_TAGS)
    tl, tr = Transport(s, ground, left), Transport(s, ground, right)
    full = s.full
    pairs = []
    for x in range(1 << len(s)):
        for y in range(1 << len(s)):
            if x | y == full:
                pairs.append((tl(x) | tr(y), x & y))
    return SubsetRelation(ground, s, pairs)


def tensor_over_s(mu: SubsetRelation, nu: SubsetRelation, variant: str = "meet", mode: str = "strict") -> SubsetRelation:
    """Monoidal product of two objects over the common base ``S``.

    ``variant="meet"`` uses the covering-meet relation on ``S``; ``"join"``
    uses its complement.
    """
    if mu.domain != nu.domain:
        raise ValueError("both morphisms must share the base")
    rho = meet_relation(mu.domain)
    if variant == "join":
        rho = complement(rho)
    elif variant != "meet":
        raise ValueError(f"unknown variant {variant!r}")
    return base_change(rho, tensor(mu, nu), mode)
