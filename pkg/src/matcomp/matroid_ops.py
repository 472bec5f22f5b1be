"""Classical matroid constructions routed through composition.

Deletion and contraction are compositions with the morphisms ``delta^e`` and
``chi^e``; connections of pointed matroids are compositions with small
uniform relations on the two basepoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .compose import base_change, compose_lax, compose_strict, tensor_over_s
from .core import (
    GroundSet,
    Matroid,
    Subset,
    SubsetRelation,
    identity_relation,
    tensor,
    transfer_points,
    uniform_relation,
)


@dataclass(frozen=True)
class PointedMatroid:
    matroid: Matroid
    basepoint: str

    def __post_init__(self) -> None:
        if self.basepoint not in self.matroid.ground:
            raise ValueError(f"basepoint {self.basepoint!r} not in the ground set")

    def as_morphism(self) -> SubsetRelation:
        """The matroid seen as a relation from the basepoint to the other points."""
        return transfer_points(self.matroid.as_relation(), from_codomain=[self.basepoint])


def as_matroid(rel: SubsetRelation) -> Matroid:
    """Read a relation with empty domain as a matroid on its codomain."""
    if len(rel.domain):
        raise ValueError("only relations with empty domain are matroids")
    return Matroid(rel.codomain, [y for _, y in rel.pairs], check=False)


def _require_nonzero(alpha: Matroid) -> None:
    if alpha.is_zero:
        raise ValueError("operation undefined on the zero matroid")


def loops(alpha: Matroid) -> Subset:
    _require_nonzero(alpha)
    used = 0
    for b in alpha.bases:
        used |= b
    return Subset(alpha.ground, alpha.ground.full & ~used)


def coloops(alpha: Matroid) -> Subset:
    _require_nonzero(alpha)
    common = alpha.ground.full
    for b in alpha.bases:
        common &= b
    return Subset(alpha.ground, common)


def deletion_morphism(ground: GroundSet, e: str) -> SubsetRelation:
    """``delta^e``: identity away from ``e``, and ``e`` must be absent."""
    return tensor(identity_relation(ground.without([e])), uniform_relation(GroundSet([e]), GroundSet(), 0))


def contraction_morphism(ground: GroundSet, e: str) -> SubsetRelation:
    """``chi^e``: identity away from ``e``, and ``e`` must be present."""
    return tensor(identity_relation(ground.without([e])), uniform_relation(GroundSet([e]), GroundSet(), -1))


def _apply(alpha: Matroid, morphism: SubsetRelation, mode: str) -> Matroid:
    rel = alpha.as_relation()
    if mode == "strict":
        return as_matroid(compose_strict(rel, morphism))
    if mode == "lax":
        _require_nonzero(alpha)
        return as_matroid(compose_lax(rel, morphism).relation)
    raise ValueError(f"unknown mode {mode!r}")


def delete(alpha: Matroid, e: str, mode: str = "lax") -> Matroid:
    """Delete ``e``; the strict form gives the zero matroid when ``e`` is a coloop."""
    if e not in alpha.ground:
        raise ValueError(f"point {e!r} not in the ground set")
    return _apply(alpha, deletion_morphism(alpha.ground, e), mode)


def contract(alpha: Matroid, e: str, mode: str = "lax") -> Matroid:
    """Contract ``e``; the strict form gives the zero matroid when ``e`` is a loop."""
    if e not in alpha.ground:
        raise ValueError(f"point {e!r} not in the ground set")
    return _apply(alpha, contraction_morphism(alpha.ground, e), mode)


def minor(
    alpha: Matroid,
    delete_set: Iterable[str] = (),
    contract_set: Iterable[str] = (),
    order: Sequence[str] | None = None,
) -> Matroid:
    """Fold lax deletions and contractions; ``order`` fixes the point sequence."""
    dels, cons = list(delete_set), list(contract_set)
    if set(dels) & set(cons):
        raise ValueError("delete and contract sets overlap")
    seq = list(order) if order is not None else dels + cons
    if sorted(seq) != sorted(dels + cons):
        raise ValueError("order must list exactly the deleted and contracted points")
    out = alpha
    drop = set(dels)
    for p in seq:
        out = delete(out, p) if p in drop else contract(out, p)
    return out


# --------------------------------------------------------------------------- connections


def _prepare(alpha_p: PointedMatroid, beta_p: PointedMatroid):
    a_rest = alpha_p.matroid.ground.without([alpha_p.basepoint])
    b_rest = beta_p.matroid.ground.without([beta_p.basepoint])
    clash = set(a_rest.points) & set(b_rest.points)
    if clash:
        raise ValueError(f"label collision unresolved: {sorted(clash)}")
    rest = set(a_rest.points) | set(b_rest.points)
    x0, y0 = "x0", "y0"
    while x0 in rest or y0 in rest:
        x0, y0 = x0 + "'", y0 + "'"
    alpha = alpha_p.matroid.relabel({alpha_p.basepoint: x0})
    beta = beta_p.matroid.relabel({beta_p.basepoint: y0})
    return alpha, beta, x0, y0, GroundSet(rest)


def _connect(alpha_p, beta_p, k: int, with_basepoint: bool, basepoint: str | None):
    alpha, beta, x0, y0, c = _prepare(alpha_p, beta_p)
    z0 = basepoint if basepoint is not None else alpha_p.basepoint
    if with_basepoint and z0 in c:
        raise ValueError(f"basepoint label {z0!r} collides with the ground set")
    joint = tensor(alpha.as_relation(), beta.as_relation())
    target = GroundSet([z0]) if with_basepoint else GroundSet()
    glue = tensor(identity_relation(c), uniform_relation(GroundSet([x0, y0]), target, k))
    return as_matroid(compose_strict(joint, glue)), z0


def two_sum(alpha_p: PointedMatroid, beta_p: PointedMatroid) -> Matroid:
    """Glue along the basepoints and forget them."""
    return _connect(alpha_p, beta_p, -1, False, None)[0]


def parallel_connection(alpha_p: PointedMatroid, beta_p: PointedMatroid, basepoint: str | None = None) -> PointedMatroid:
    m, z0 = _connect(alpha_p, beta_p, -1, True, basepoint)
    return PointedMatroid(m, z0)


def series_connection(alpha_p: PointedMatroid, beta_p: PointedMatroid, basepoint: str | None = None) -> PointedMatroid:
    m, z0 = _connect(alpha_p, beta_p, 0, True, basepoint)
    return PointedMatroid(m, z0)


def _shared_base(alpha_p: PointedMatroid, beta_p: PointedMatroid, basepoint: str | None):
    z0 = basepoint if basepoint is not None else alpha_p.basepoint
    mu = PointedMatroid(alpha_p.matroid.relabel({alpha_p.basepoint: z0}), z0).as_morphism()
    nu = PointedMatroid(beta_p.matroid.relabel({beta_p.basepoint: z0}), z0).as_morphism()
    if set(mu.codomain.points) & set(nu.codomain.points):
        raise ValueError("label collision unresolved")
    return mu, nu, z0


def connection_over_base(
    alpha_p: PointedMatroid, beta_p: PointedMatroid, variant: str, basepoint: str | None = None
) -> SubsetRelation:
    """Parallel (``meet``) or series (``join``) connection as a morphism from the basepoint."""
    mu, nu, _ = _shared_base(alpha_p, beta_p, basepoint)
    return tensor_over_s(mu, nu, variant)


def two_sum_over_base(alpha_p: PointedMatroid, beta_p: PointedMatroid, variant: str = "meet") -> Matroid:
    """Two-sum by base change: strict deletion after ``meet``, strict contraction after ``join``."""
    mu, nu, z0 = _shared_base(alpha_p, beta_p, None)
    point = GroundSet([z0])
    joined = tensor_over_s(mu, nu, variant)
    kappa = uniform_relation(point, GroundSet(), 0 if variant == "meet" else -1)
    return as_matroid(base_change(kappa, joined))


def pointed_from_morphism(mu: SubsetRelation) -> PointedMatroid:
    """Inverse of ``PointedMatroid.as_morphism``."""
    if len(mu.domain) != 1:
        raise ValueError("expected a morphism from a single basepoint")
    z0 = mu.domain.points[0]
    return PointedMatroid(as_matroid(transfer_points(mu, from_domain=[z0])), z0)


# --------------------------------------------------------------------------- symmetry


def symmetrization_morphism(ground: GroundSet, s: Iterable[str], t: GroundSet, k: int) -> SubsetRelation:
    """Identity off ``s`` tensored with the uniform relation of degree ``k`` from ``s`` to ``t``."""
    s_ground = ground.restrict(s)
    rest = ground.without(s_ground.points)
    if set(rest.points) & set(t.points):
        raise ValueError("target labels collide with the untouched points")
    return tensor(identity_relation(rest), uniform_relation(s_ground, t, k))


def symmetrize(
    target: Matroid | SubsetRelation, s: Iterable[str], t: GroundSet | Iterable[str] | None = None, k: int = 0
) -> Matroid | SubsetRelation:
    """Compose with the symmetrizing morphism on ``s`` (a part of the codomain).

    With ``t`` equal to ``s`` and ``k = 0`` this is the smallest relation
    above the input that is symmetric on ``s``.
    """
    rel = target.as_relation() if isinstance(target, Matroid) else target
    s = list(s)
    if any(p not in rel.codomain for p in s):
        raise ValueError("symmetrized points must lie in the codomain")
    if t is None:
        t = GroundSet(s)
    elif not isinstance(t, GroundSet):
        t = GroundSet(t)
    out = compose_strict(rel, symmetrization_morphism(rel.codomain, s, t, k))
    return as_matroid(out) if isinstance(target, Matroid) else out


def _swap(mask: int, i: int, j: int) -> int:
    if (mask >> i & 1) != (mask >> j & 1):
        mask ^= (1 << i) | (1 << j)
    return mask


def is_symmetric(rel: Matroid | SubsetRelation, s: Iterable[str]) -> bool:
    """Whether every permutation of ``s`` preserves the pairs; ``s`` must lie on one side."""
    rel = rel.as_relation() if isinstance(rel, Matroid) else rel
    s = list(s)
    if not s:
        return True
    if all(p in rel.domain for p in s):
        pos = sorted(rel.domain.index(p) for p in s)
        moves = [lambda x, y, i=i, j=j: (_swap(x, i, j), y) for i, j in zip(pos, pos[1:])]
    elif all(p in rel.codomain for p in s):
        pos = sorted(rel.codomain.index(p) for p in s)
        moves = [lambda x, y, i=i, j=j: (x, _swap(y, i, j)) for i, j in zip(pos, pos[1:])]
    else:
        raise ValueError("symmetry set must lie inside the domain or inside the codomain")
    pairs = rel.pair_set
    # adjacent transpositions generate the symmetric group
    return all(move(x, y) in pairs for move in moves for x, y in rel.pairs)

