"""Directed graphs with half-edges and the relations they induce.

A ``Digraph`` over ``(A, B)`` has source half-edges labelled by ``A`` and
sink half-edges labelled by ``B``.  Each half-edge either attaches to a
vertex or pairs with a half-edge of the other kind as an isolated arrow.
Edges form a multiset and are identified by their position in ``edges``.

``path_relation`` and ``epath_relation`` decide linkages by unit-capacity
maximum flow, one ``(X, Y)`` pair at a time.  ``bpath_relation`` builds the
relation of a bicoloured graph by tensoring one uniform star relation per
vertex and closing every internal edge with an evaluation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Sequence

from .compose import LaxResult, compose_lax, compose_strict, evaluation
from .core import (
    TENSOR_TAGS,
    CompositionType,
    GroundSet,
    SubsetRelation,
    identity_relation,
    masks_of_size,
    relabel,
    tensor,
    transfer_points,
    uniform_relation,
)

WHITE = "white"
BLACK = "black"
COLOURS = (WHITE, BLACK)

EDGE_PREFIX = "edge#"


def _pairs(items: Iterable) -> tuple[tuple[str, str], ...]:
    if isinstance(items, Mapping):
        items = items.items()
    return tuple((str(a), str(b)) for a, b in items)


@dataclass(frozen=True)
class Digraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    sources: tuple[tuple[str, str], ...]
    sinks: tuple[tuple[str, str], ...]
    arrows: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        for name in ("edges", "sources", "sinks", "arrows"):
            object.__setattr__(self, name, _pairs(getattr(self, name)))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        for t, h in self.edges:
            if t not in vs or h not in vs:
                raise ValueError(f"edge ({t}, {h}) leaves the vertex set")
        for label, at in self.sources + self.sinks:
            if at not in vs:
                raise ValueError(f"half-edge {label!r} attaches to unknown vertex {at!r}")
        ins = [a for a, _ in self.sources] + [a for a, _ in self.arrows]
        outs = [b for b, _ in self.sinks] + [b for _, b in self.arrows]
        if len(set(ins)) != len(ins) or len(set(outs)) != len(outs):
            raise ValueError("half-edge labels must be unique on each side")
        if any(p.startswith(EDGE_PREFIX) for p in ins + outs):
            raise ValueError(f"half-edge labels may not start with {EDGE_PREFIX!r}")

    @property
    def domain(self) -> GroundSet:
        return GroundSet([a for a, _ in self.sources] + [a for a, _ in self.arrows])

    @property
    def codomain(self) -> GroundSet:
        return GroundSet([b for b, _ in self.sinks] + [b for _, b in self.arrows])

    def source_at(self) -> dict[str, str]:
        return dict(self.sources)

    def sink_at(self) -> dict[str, str]:
        return dict(self.sinks)

    def reverse(self) -> Digraph:
        """Flip every edge; sources become sinks and arrows turn around."""
        return Digraph(
            self.vertices,
            [(h, t) for t, h in self.edges],
            self.sinks,
            self.sources,
            [(b, a) for a, b in self.arrows],
        )

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "sources": [{"label": a, "at": v} for a, v in self.sources],
            "sinks": [{"label": b, "at": v} for b, v in self.sinks],
            "arrows": [list(p) for p in self.arrows],
        }

    def to_dot(self) -> str:
        lines = ["digraph G {"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for t, h in self.edges:
            lines.append(f'  "{t}" -> "{h}";')
        for a, v in self.sources:
            lines.append(f'  "in:{a}" [shape=plaintext,label="{a}"];')
            lines.append(f'  "in:{a}" -> "{v}";')
        for b, v in self.sinks:
            lines.append(f'  "out:{b}" [shape=plaintext,label="{b}"];')
            lines.append(f'  "{v}" -> "out:{b}";')
        for a, b in self.arrows:
            lines.append(f'  "in:{a}" [shape=plaintext,label="{a}"];')
            lines.append(f'  "out:{b}" [shape=plaintext,label="{b}"];')
            lines.append(f'  "in:{a}" -> "out:{b}";')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class BicoloredDigraph(Digraph):
    colours: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        super().__post_init__()
        colours = {str(v): c for v, c in dict(self.colours).items()}
        if set(colours) != set(self.vertices):
            raise ValueError("every vertex needs exactly one colour")
        if any(c not in COLOURS for c in colours.values()):
            raise ValueError(f"colours must be one of {COLOURS}")
        object.__setattr__(self, "colours", colours)

    @classmethod
    def from_digraph(cls, g: Digraph, colours: Mapping[str, str]) -> BicoloredDigraph:
        return cls(g.vertices, g.edges, g.sources, g.sinks, g.arrows, colours)

    def underlying(self) -> Digraph:
        return Digraph(self.vertices, self.edges, self.sources, self.sinks, self.arrows)

    def with_structure(self, edges=None, sources=None, sinks=None) -> BicoloredDigraph:
        return BicoloredDigraph(
            self.vertices,
            self.edges if edges is None else edges,
            self.sources if sources is None else sources,
            self.sinks if sinks is None else sinks,
            self.arrows,
            self.colours,
        )

    def to_json(self) -> dict:
        doc = super().to_json()
        doc["colours"] = {v: self.colours[v] for v in self.vertices}
        return doc

    def to_dot(self) -> str:
        lines = super().to_dot().splitlines()
        for i, v in enumerate(self.vertices, start=1):
            fill = "white" if self.colours[v] == WHITE else "black"
            font = "black" if fill == "white" else "white"
            lines[i] = f'  "{v}" [style=filled,fillcolor={fill},fontcolor={font}];'
        return "\n".join(lines)


@dataclass(frozen=True)
class ExtendedDigraph:
    """A digraph whose half-edges include extra sources and extra sinks."""

    graph: Digraph
    extra_sources: tuple[str, ...]
    extra_sinks: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "extra_sources", tuple(self.extra_sources))
        object.__setattr__(self, "extra_sinks", tuple(self.extra_sinks))
        if any(p not in self.graph.domain for p in self.extra_sources):
            raise ValueError("extra sources must be source half-edges of the graph")
        if any(p not in self.graph.codomain for p in self.extra_sinks):
            raise ValueError("extra sinks must be sink half-edges of the graph")
        if set(self.extra_sources) & set(self.extra_sinks):
            raise ValueError("extra sources and extra sinks must be disjoint")

    @property
    def domain(self) -> GroundSet:
        return self.graph.domain.without(self.extra_sources)

    @property
    def codomain(self) -> GroundSet:
        return self.graph.codomain.without(self.extra_sinks)


def digraph_from_json(doc: Mapping) -> Digraph:
    args = (
        doc["vertices"],
        doc.get("edges", []),
        [(s["label"], s["at"]) for s in doc.get("sources", [])],
        [(s["label"], s["at"]) for s in doc.get("sinks", [])],
        doc.get("arrows", []),
    )
    if "colours" in doc:
        return BicoloredDigraph(*args, colours=doc["colours"])
    return Digraph(*args)


# --------------------------------------------------------------------------- gluing


def glue_graphs(g: Digraph, h: Digraph) -> Digraph:
    """Fuse the sinks of ``g`` with the equally labelled sources of ``h``."""
    if g.codomain != h.domain:
        raise ValueError(
            f"polarity mismatch: sinks {list(g.codomain.points)} vs sources {list(h.domain.points)}"
        )
    clash = set(g.vertices) & set(h.vertices)
    gv = {v: (v + TENSOR_TAGS[0] if v in clash else v) for v in g.vertices}
    hv = {v: (v + TENSOR_TAGS[1] if v in clash else v) for v in h.vertices}
    if len(set(gv.values()) | set(hv.values())) != len(g.vertices) + len(h.vertices):
        raise ValueError("vertex label collision unresolved")

    g_sink = {b: ("vertex", gv[v]) for b, v in g.sinks}
    g_sink.update({b: ("arrow", a) for a, b in g.arrows})
    h_source = {b: ("vertex", hv[v]) for b, v in h.sources}
    h_source.update({b: ("arrow", c) for b, c in h.arrows})

    edges = [(gv[t], gv[u]) for t, u in g.edges] + [(hv[t], hv[u]) for t, u in h.edges]
    sources = [(a, gv[v]) for a, v in g.sources]
    sinks = [(c, hv[v]) for c, v in h.sinks]
    arrows = []
    for b in g.codomain.points:
        (lk, left), (rk, right) = g_sink[b], h_source[b]
        if lk == "vertex" and rk == "vertex":
            edges.append((left, right))
        elif lk == "vertex":
            sinks.append((right, left))
        elif rk == "vertex":
            sources.append((left, right))
        else:
            arrows.append((left, right))
    return Digraph(list(gv.values()) + list(hv.values()), edges, sources, sinks, arrows)


def identity_digraph(a: GroundSet | Iterable[str]) -> Digraph:
    """Isolated arrows, one per point."""
    a = a if isinstance(a, GroundSet) else GroundSet(a)
    return Digraph((), (), (), (), [(p, p) for p in a.points])


# --------------------------------------------------------------------------- flow


class _FlowNetwork:
    """Residual graph for breadth-first augmenting paths."""

    def __init__(self) -> None:
        self.cap: dict = {}

    def add(self, u, v, c: int) -> None:
        if c <= 0:
            return
        self.cap.setdefault(u, {})
        self.cap.setdefault(v, {})
        self.cap[u][v] = self.cap[u].get(v, 0) + c
        self.cap[v].setdefault(u, 0)

    def max_flow(self, s, t, limit: int) -> int:
        flow = 0
        if s not in self.cap or t not in self.cap:
            return 0
        while flow < limit:
            parent = {s: None}
            queue = deque([s])
            while queue and t not in parent:
                u = queue.popleft()
                for v, c in self.cap[u].items():
                    if c > 0 and v not in parent:
                        parent[v] = u
                        queue.append(v)
            if t not in parent:
                break
            v = t
            while parent[v] is not None:
                u = parent[v]
                self.cap[u][v] -= 1
                self.cap[v][u] += 1
                v = u
            flow += 1
        return flow


def _linked(g: Digraph, xs: Sequence[str], ys: Sequence[str], vertex_disjoint: bool) -> bool:
    src, snk = g.source_at(), g.sink_at()
    net = _FlowNetwork()
    s, t = ("s",), ("t",)
    if vertex_disjoint:
        for v in g.vertices:
            net.add(("in", v), ("out", v), 1)
        for a, b in g.edges:
            net.add(("out", a), ("in", b), 1)
        for x in xs:
            net.add(s, ("in", src[x]), 1)
        for y in ys:
            net.add(("out", snk[y]), t, 1)
    else:
        for a, b in g.edges:
            if a != b:
                net.add(("v", a), ("v", b), 1)
        for x in xs:
            net.add(s, ("v", src[x]), 1)
        for y in ys:
            net.add(("v", snk[y]), t, 1)
    return net.max_flow(s, t, len(xs)) == len(xs)


def _linkage_relation(g: Digraph, vertex_disjoint: bool) -> SubsetRelation:
    a, b = g.domain, g.codomain
    arrow_in = a.mask(p for p, _ in g.arrows)
    arrow_out = b.mask(q for _, q in g.arrows)
    partner = {a.index(p): b.index(q) for p, q in g.arrows}
    pairs = []
    for x in range(1 << len(a)):
        need = 0
        for i, j in partner.items():
            if x >> i & 1:
                need |= 1 << j
        xs = a.labels(x & ~arrow_in)
        for y in masks_of_size(len(b), x.bit_count()):
            if y & arrow_out != need:
                continue
            if _linked(g, xs, b.labels(y & ~arrow_out), vertex_disjoint):
                pairs.append((x, y))
    return SubsetRelation(a, b, pairs)


def path_relation(g: Digraph) -> SubsetRelation:
    """``X`` to ``Y`` iff vertex-disjoint directed paths join ``X`` to ``Y`` bijectively."""
    return _linkage_relation(g, True)


def epath_relation(g: Digraph) -> SubsetRelation:
    """As ``path_relation`` with edge-disjoint paths; vertices may be shared."""
    return _linkage_relation(g, False)


# --------------------------------------------------------------------------- bicoloured graphs


def _edge_label(i: int) -> str:
    return f"{EDGE_PREFIX}{i}"


def incident_ends(g: Digraph, v: str) -> tuple[list[str], list[str]]:
    """Labels of the ends entering and leaving ``v``; edge ends are named by edge index."""
    ins = [a for a, at in g.sources if at == v]
    outs = [b for b, at in g.sinks if at == v]
    for i, (t, h) in enumerate(g.edges):
        if h == v:
            ins.append(_edge_label(i))
        if t == v:
            outs.append(_edge_label(i))
    return ins, outs


def star_relation(g: BicoloredDigraph, v: str) -> SubsetRelation:
    """Uniform relation at ``v``: degree ``1 - |in|`` if white, ``|out| - 1`` if black."""
    ins, outs = incident_ends(g, v)
    a, b = GroundSet(ins), GroundSet(outs)
    k = 1 - len(ins) if g.colours[v] == WHITE else len(outs) - 1
    return uniform_relation(a, b, k)


def _close_edge(rel: SubsetRelation, label: str, mode: str) -> tuple[SubsetRelation, CompositionType]:
    """Feed the tail end of an edge into its head end through an evaluation."""
    moved = transfer_points(rel, from_domain=[label])
    rest = moved.codomain.without([label + "/d", label + "/c"])
    first, second = TENSOR_TAGS
    ev = relabel(evaluation(GroundSet([label])), domain={label + first: label + "/d", label + second: label + "/c"})
    closing = tensor(identity_relation(rest), ev)
    if mode == "strict":
        return compose_strict(moved, closing), CompositionType()
    res = compose_lax(moved, closing)
    return res.relation, res.type


def _vertex_order(g: Digraph) -> list[str]:
    """Breadth-first over the undirected graph, to keep the open frontier small."""
    nbrs: dict[str, list[str]] = {v: [] for v in g.vertices}
    for t, h in g.edges:
        nbrs[t].append(h)
        nbrs[h].append(t)
    seen: set[str] = set()
    order = []
    for root in g.vertices:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in nbrs[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def _bpath(g: BicoloredDigraph, mode: str, order: Sequence[str] | None) -> tuple[SubsetRelation, CompositionType]:
    if mode == "lax" and any(not any(incident_ends(g, v)) for v in g.vertices):
        raise ValueError("lax evaluation needs a graph without isolated vertices")
    order = list(order) if order is not None else _vertex_order(g)
    if sorted(order) != sorted(g.vertices):
        raise ValueError("order must list every vertex once")
    head_of = {_edge_label(i): h for i, (_, h) in enumerate(g.edges)}
    tail_of = {_edge_label(i): t for i, (t, _) in enumerate(g.edges)}
    arrows = [SubsetRelation(GroundSet([p]), GroundSet([q]), [(0, 0), (1, 1)]) for p, q in g.arrows]
    out = identity_relation(GroundSet())
    for r in arrows:
        out = tensor(out, r)
    total = CompositionType()
    placed: set[str] = set()
    for v in order:
        out = tensor(out, star_relation(g, v))
        placed.add(v)
        if out.is_zero and mode == "strict":
            return SubsetRelation(g.domain, g.codomain), total
        ready = [
            p for p in out.domain.points
            if p.startswith(EDGE_PREFIX) and tail_of[p] in placed and head_of[p] in placed
        ]
        for p in sorted(ready, key=lambda s: int(s[len(EDGE_PREFIX):])):
            out, kind = _close_edge(out, p, mode)
            total = total + kind
    if out.is_zero:
        return SubsetRelation(g.domain, g.codomain), total
    return out, total


def bpath_relation(g: BicoloredDigraph, order: Sequence[str] | None = None) -> SubsetRelation:
    """Strict relation of a bicoloured graph; ``order`` fixes the vertex processing sequence."""
    return _bpath(g, "strict", order)[0]


def bpath_lax(g: BicoloredDigraph, order: Sequence[str] | None = None) -> LaxResult:
    """Same plan as ``bpath_relation`` with each edge closed laxly; types accumulate."""
    rel, kind = _bpath(g, "lax", order)
    return LaxResult(rel, kind)


def _counts(g: BicoloredDigraph) -> dict[str, int]:
    """Incoming ends at white vertices plus outgoing ends at black vertices."""
    n = {v: 0 for v in g.vertices}
    for t, h in g.edges:
        if g.colours[t] == BLACK:
            n[t] += 1
        if g.colours[h] == WHITE:
            n[h] += 1
    for _, v in g.sources:
        if g.colours[v] == WHITE:
            n[v] += 1
    for _, v in g.sinks:
        if g.colours[v] == BLACK:
            n[v] += 1
    return n


def is_perfectly_oriented(g: BicoloredDigraph) -> bool:
    """White vertices have one incoming end and black vertices one outgoing end."""
    return all(c == 1 for c in _counts(g).values())


def _orientation_search(g: BicoloredDigraph, flippable_half_edges: bool) -> Iterator[BicoloredDigraph]:
    colour = g.colours
    # each item: (u, v) meaning "as given, counts for u?" and "flipped, counts for v?"
    items: list[tuple[str, tuple[str, ...], tuple[str, ...]]] = []
    for t, h in g.edges:
        keep = tuple(x for x, ok in ((t, colour[t] == BLACK), (h, colour[h] == WHITE)) if ok)
        flip = tuple(x for x, ok in ((h, colour[h] == BLACK), (t, colour[t] == WHITE)) if ok)
        items.append(("edge", keep, flip))
    for _, v in g.sources:
        keep = (v,) if colour[v] == WHITE else ()
        flip = (v,) if colour[v] == BLACK else ()
        items.append(("source", keep, flip if flippable_half_edges else None))
    for _, v in g.sinks:
        keep = (v,) if colour[v] == BLACK else ()
        flip = (v,) if colour[v] == WHITE else ()
        items.append(("sink", keep, flip if flippable_half_edges else None))

    remaining = {v: 0 for v in g.vertices}
    for _, keep, flip in items:
        for x in set(keep) | set(flip or ()):
            remaining[x] += 1
    count = {v: 0 for v in g.vertices}
    choice: list[bool] = []

    def feasible() -> bool:
        return all(count[v] <= 1 and count[v] + remaining[v] >= 1 for v in g.vertices)

    def walk(i: int) -> Iterator[list[bool]]:
        if i == len(items):
            if all(c == 1 for c in count.values()):
                yield list(choice)
            return
        _, keep, flip = items[i]
        touched = set(keep) | set(flip or ())
        for x in touched:
            remaining[x] -= 1
        for flipped, hits in ((False, keep), (True, flip)):
            if hits is None:
                continue
            for x in hits:
                count[x] += 1
            choice.append(flipped)
            if feasible():
                yield from walk(i + 1)
            choice.pop()
            for x in hits:
                count[x] -= 1
        for x in touched:
            remaining[x] += 1

    n_edges, n_src = len(g.edges), len(g.sources)
    for flips in walk(0):
        edges = [(h, t) if f else (t, h) for (t, h), f in zip(g.edges, flips[:n_edges])]
        src_flags = flips[n_edges:n_edges + n_src]
        snk_flags = flips[n_edges + n_src:]
        sources = [s for s, f in zip(g.sources, src_flags) if not f] + [s for s, f in zip(g.sinks, snk_flags) if f]
        sinks = [s for s, f in zip(g.sinks, snk_flags) if not f] + [s for s, f in zip(g.sources, src_flags) if f]
        yield g.with_structure(edges, sources, sinks)


def find_perfect_orientation(g: BicoloredDigraph, flip_half_edges: bool = True) -> BicoloredDigraph | None:
    """A reorientation that is perfect, or ``None``; a flipped half-edge changes side."""
    return next(_orientation_search(g, flip_half_edges), None)


def to_bicolored(g: Digraph) -> BicoloredDigraph:
    """Split each vertex into a black vertex taking the incoming ends and a white one emitting the outgoing ends."""
    black = {v: f"{v}:black" for v in g.vertices}
    white = {v: f"{v}:white" for v in g.vertices}
    vertices = [x for v in g.vertices for x in (black[v], white[v])]
    edges = [(black[v], white[v]) for v in g.vertices] + [(white[t], black[h]) for t, h in g.edges]
    colours = {**{b: BLACK for b in black.values()}, **{w: WHITE for w in white.values()}}
    return BicoloredDigraph(
        vertices,
        edges,
        [(a, black[v]) for a, v in g.sources],
        [(b, white[v]) for b, v in g.sinks],
        g.arrows,
        colours,
    )


# --------------------------------------------------------------------------- extra half-edges


def path_lax(g: ExtendedDigraph) -> LaxResult:
    """Lax linkage relation: extra sources should be used and extra sinks should be used.

    The type counts how far the best linkages fall short of that.
    """
    base = path_relation(g.graph)
    moved = transfer_points(base, from_codomain=g.extra_sinks)
    a = g.domain
    plus = GroundSet(g.extra_sources)
    minus = GroundSet(g.extra_sinks)
    factor = tensor(tensor(identity_relation(a), uniform_relation(GroundSet(), plus, len(plus))),
                    uniform_relation(GroundSet(), minus, 0))
    if factor.codomain != moved.domain:
        raise ValueError("extra half-edge labels collide with the remaining half-edges")
    return compose_lax(factor, moved)


# --------------------------------------------------------------------------- edge breaking


def _fresh(taken: set[str], base: str) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def break_edge(g: BicoloredDigraph, edge: int, colour: str) -> BicoloredDigraph:
    """Replace edge ``u -> v`` by ``u -> w1`` and ``w2 -> v`` with new vertices of ``colour``."""
    if not 0 <= edge < len(g.edges):
        raise ValueError(f"no edge with index {edge}")
    if colour not in COLOURS:
        raise ValueError(f"colour must be one of {COLOURS}")
    return break_edges(g, {edge: colour})


def break_edges(g: BicoloredDigraph, choice: Mapping[int, str]) -> BicoloredDigraph:
    taken = set(g.vertices)
    vertices = list(g.vertices)
    colours = dict(g.colours)
    edges = []
    for i, (t, h) in enumerate(g.edges):
        if i not in choice:
            edges.append((t, h))
            continue
        w1 = _fresh(taken, f"break{i}:tail")
        w2 = _fresh(taken, f"break{i}:head")
        vertices += [w1, w2]
        colours[w1] = colours[w2] = choice[i]
        edges += [(t, w1), (w2, h)]
    return BicoloredDigraph(vertices, edges, g.sources, g.sinks, g.arrows, colours)


def minimum_breakings(g: BicoloredDigraph, max_breaks: int | None = None) -> list[dict[int, str]]:
    """All smallest edge-breakings (with colours) after which a perfect orientation exists."""
    limit = len(g.edges) if max_breaks is None else max_breaks
    for size in range(limit + 1):
        found = []
        for idx in combinations(range(len(g.edges)), size):
            for cols in product(COLOURS, repeat=size):
                choice = dict(zip(idx, cols))
                if find_perfect_orientation(break_edges(g, choice)) is not None:
                    found.append(choice)
        if found:
            return found
    return []
