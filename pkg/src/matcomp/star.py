"""Semiring-weighted composition, trace and the Tutte polynomial."""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Iterable, Mapping

from .compose import coevaluation, compose_lax, evaluation
from .core import (
    GroundSet,
    Matroid,
    SubsetRelation,
    elementary_relation,
    exchange_check,
    identity_relation,
    tensor,
)
from .matroid_ops import contraction_morphism, deletion_morphism


class BivariatePolynomial:
    """Integer polynomial in ``x`` and ``y`` keyed by exponent pairs; zero terms are never stored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], int] | None = None):
        self.coeffs: dict[tuple[int, int], int] = {
            (int(i), int(j)): int(c) for (i, j), c in (coeffs or {}).items() if c
        }

    @classmethod
    def constant(cls, c: int) -> BivariatePolynomial:
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> BivariatePolynomial:
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> BivariatePolynomial:
        return cls({(0, 1): 1})

    def _lift(self, other) -> BivariatePolynomial:
        return other if isinstance(other, BivariatePolynomial) else BivariatePolynomial.constant(other)

    def __add__(self, other) -> BivariatePolynomial:
        other = self._lift(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        return BivariatePolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> BivariatePolynomial:
        return BivariatePolynomial({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other) -> BivariatePolynomial:
        return self + -self._lift(other)

    def __rsub__(self, other) -> BivariatePolynomial:
        return self._lift(other) - self

    def __mul__(self, other) -> BivariatePolynomial:
        other = self._lift(other)
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return BivariatePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> BivariatePolynomial:
        out = BivariatePolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = BivariatePolynomial.constant(other)
        return isinstance(other, BivariatePolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __call__(self, x: int, y: int) -> int:
        return sum(c * x**i * y**j for (i, j), c in self.coeffs.items())

    def terms(self) -> list[tuple[int, int, int]]:
        """``(coefficient, x-power, y-power)`` triples, highest degree first."""
        keys = sorted(self.coeffs, key=lambda k: (-(k[0] + k[1]), -k[0]))
        return [(self.coeffs[k], k[0], k[1]) for k in keys]

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for c, i, j in self.terms():
            mono = " ".join(
                s for s in (
                    "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                    "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
                ) if s
            )
            mag = abs(c)
            body = mono if mono and mag == 1 else (f"{mag} * {mono}" if mono else str(mag))
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"BivariatePolynomial({self.to_text()!r})"


@dataclass(frozen=True, eq=False)
class SemiringSpec:
    """Commutative semiring operations plus the two distinguished elements."""

    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    x: Any
    y: Any
    eq: Callable[[Any, Any], bool] = field(default=operator.eq)

    def is_zero(self, value: Any) -> bool:
        return self.eq(value, self.zero)

    def power(self, base: Any, n: int) -> Any:
        out = self.one
        for _ in range(n):
            out = self.mul(out, base)
        return out

    def weight(self, k: int, l: int) -> Any:
        return self.mul(self.power(self.x, k), self.power(self.y, l))


def boolean_semiring(x: bool, y: bool) -> SemiringSpec:
    return SemiringSpec(f"bool{int(x)}{int(y)}", False, True, operator.or_, operator.and_, bool(x), bool(y))


def polynomial_semiring(x: BivariatePolynomial | None = None, y: BivariatePolynomial | None = None, name: str = "zxy") -> SemiringSpec:
    px = BivariatePolynomial.x() if x is None else x
    py = BivariatePolynomial.y() if y is None else y
    return SemiringSpec(name, BivariatePolynomial(), BivariatePolynomial.constant(1), operator.add, operator.mul, px, py)


BOOL00 = boolean_semiring(False, False)
BOOL11 = boolean_semiring(True, True)
ZXY = polynomial_semiring()
TUTTE = polynomial_semiring(BivariatePolynomial.x() - 1, BivariatePolynomial.y() - 1, name="zxy-shifted")


class WeightedMorphism:
    """A finite semiring-linear combination of nonzero exchange relations with one interface."""

    def __init__(
        self,
        domain: GroundSet,
        codomain: GroundSet,
        semiring: SemiringSpec,
        terms: Mapping[SubsetRelation, Any] | Iterable[tuple[SubsetRelation, Any]] = (),
        check: bool = True,
    ):
        self.domain = domain
        self.codomain = codomain
        self.semiring = semiring
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[SubsetRelation, Any] = {}
        for rel, coef in items:
            if rel.domain != domain or rel.codomain != codomain:
                raise ValueError("term relation has the wrong interface")
            if rel.is_zero:
                raise ValueError("terms must be nonzero relations")
            if check and not exchange_check(rel):
                raise ValueError("terms must be exchange relations")
            acc[rel] = semiring.add(acc[rel], coef) if rel in acc else coef
        self.terms: dict[SubsetRelation, Any] = {
            r: c for r, c in sorted(acc.items(), key=lambda rc: rc[0].pairs) if not semiring.is_zero(c)
        }

    @classmethod
    def single(cls, rel: SubsetRelation, semiring: SemiringSpec, coef: Any = None) -> WeightedMorphism:
        if rel.is_zero:
            return cls(rel.domain, rel.codomain, semiring)
        return cls(rel.domain, rel.codomain, semiring, [(rel, semiring.one if coef is None else coef)], check=False)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, rel: SubsetRelation) -> Any:
        return self.terms.get(rel, self.semiring.zero)

    def _same(self, other: WeightedMorphism) -> None:
        if self.semiring is not other.semiring:
            raise ValueError("semiring mismatch")

    def __add__(self, other: WeightedMorphism) -> WeightedMorphism:
        self._same(other)
        if self.domain != other.domain or self.codomain != other.codomain:
            raise ValueError("interface mismatch")
        return WeightedMorphism(
            self.domain, self.codomain, self.semiring,
            list(self.terms.items()) + list(other.terms.items()), check=False,
        )

    def scale(self, coef: Any) -> WeightedMorphism:
        mul = self.semiring.mul
        return WeightedMorphism(
            self.domain, self.codomain, self.semiring,
            [(r, mul(coef, c)) for r, c in self.terms.items()], check=False,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedMorphism) or self.semiring is not other.semiring:
            return False
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.semiring.eq(c, other.terms[r]) for r, c in self.terms.items())

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"WeightedMorphism({list(self.domain.points)} -> {list(self.codomain.points)}, {len(self.terms)} terms)"


def star_compose(lam: WeightedMorphism, mu: WeightedMorphism) -> WeightedMorphism:
    """Bilinear extension of the lax composite, each term weighted by ``x^k y^l``."""
    lam._same(mu)
    if lam.codomain != mu.domain:
        raise ValueError("interface mismatch")
    ring = lam.semiring
    weights: dict[tuple[int, int], Any] = {}
    out = []
    for r1, c1 in lam.terms.items():
        for r2, c2 in mu.terms.items():
            res = compose_lax(r1, r2)
            key = (res.type.k, res.type.l)
            if key not in weights:
                weights[key] = ring.weight(*key)
            coef = ring.mul(ring.mul(c1, c2), weights[key])
            if not ring.is_zero(coef):
                out.append((res.relation, coef))
    return WeightedMorphism(lam.domain, mu.codomain, ring, out, check=False)


def star_tensor(lam: WeightedMorphism, mu: WeightedMorphism) -> WeightedMorphism:
    lam._same(mu)
    ring = lam.semiring
    out = [
        (tensor(r1, r2), ring.mul(c1, c2))
        for r1, c1 in lam.terms.items()
        for r2, c2 in mu.terms.items()
    ]
    if not out:
        probe_a = tensor(SubsetRelation(lam.domain, lam.codomain), SubsetRelation(mu.domain, mu.codomain))
        return WeightedMorphism(probe_a.domain, probe_a.codomain, ring)
    return WeightedMorphism(out[0][0].domain, out[0][0].codomain, ring, out, check=False)


def trace(lam: WeightedMorphism) -> Any:
    """Closing the endomorphism ``lam`` into a loop; returns a semiring element."""
    if lam.domain != lam.codomain:
        raise ValueError("trace needs an endomorphism")
    ring = lam.semiring
    a = lam.domain
    coev = WeightedMorphism.single(coevaluation(a), ring)
    ev = WeightedMorphism.single(evaluation(a), ring)
    middle = star_tensor(lam, WeightedMorphism.single(identity_relation(a), ring))
    closed = star_compose(star_compose(coev, middle), ev)
    unit = identity_relation(GroundSet())
    return closed.coefficient(unit)


def tau_sum(ground: GroundSet, semiring: SemiringSpec) -> WeightedMorphism:
    """Sum of the elementary relations from each subset to the empty set."""
    empty = GroundSet()
    return WeightedMorphism(
        ground, empty, semiring,
        [(elementary_relation(ground, empty, x, 0), semiring.one) for x in range(1 << len(ground))],
        check=False,
    )


def tau_product(ground: GroundSet, semiring: SemiringSpec) -> WeightedMorphism:
    """Star product over the points of (deletion + contraction)."""
    out = WeightedMorphism.single(identity_relation(ground), semiring)
    current = ground
    for p in ground.points:
        step = WeightedMorphism.single(deletion_morphism(current, p), semiring) + WeightedMorphism.single(
            contraction_morphism(current, p), semiring
        )
        out = star_compose(out, step)
        current = current.without([p])
    return out


def tau(ground: GroundSet, semiring: SemiringSpec = TUTTE, check: bool = True) -> WeightedMorphism:
    """The Tutte morphism; with ``check`` both expansions are built and compared."""
    summed = tau_sum(ground, semiring)
    if check and tau_product(ground, semiring) != summed:
        raise AssertionError("the two expansions of tau disagree")
    return summed


@lru_cache(maxsize=64)
def _cached_tau(ground: GroundSet) -> WeightedMorphism:
    return tau(ground, TUTTE)


def tutte(alpha: Matroid) -> BivariatePolynomial:
    """Tutte polynomial by applying tau; a lone loop gives ``x`` and a lone coloop ``y``."""
    if alpha.is_zero:
        raise ValueError("Tutte polynomial of the zero matroid is undefined")
    state = WeightedMorphism.single(alpha.as_relation(), TUTTE)
    closed = star_compose(state, _cached_tau(alpha.ground))
    return closed.coefficient(identity_relation(GroundSet()))
