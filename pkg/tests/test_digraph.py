import json
import random

import pytest

from matcomp.compose import compose_strict
from matcomp.core import (
    GroundSet,
    adjoint,
    associated_matroid,
    exchange_check,
    identity_relation,
    is_bimatroid,
    uniform_relation,
)
from matcomp.digraph import (
    BLACK,
    WHITE,
    BicoloredDigraph,
    Digraph,
    ExtendedDigraph,
    bpath_lax,
    bpath_relation,
    break_edge,
    break_edges,
    digraph_from_json,
    epath_relation,
    find_perfect_orientation,
    glue_graphs,
    identity_digraph,
    is_perfectly_oriented,
    minimum_breakings,
    path_lax,
    path_relation,
    star_relation,
    to_bicolored,
)
from matcomp.matroid_ops import as_matroid, minor

from graphs import random_bicolored, random_connected_bicolored, random_digraph, random_glue_pair
from oracles import edge_linkages, label_bases, label_pairs, vertex_linkages

B, W = BLACK, WHITE

GLUE_LEFT = Digraph(
    ["a", "b", "c", "d"],
    [("a", "b"), ("c", "a"), ("b", "d"), ("d", "c")],
    [("1", "b"), ("2", "a")],
    [("3", "d"), ("4", "d"), ("5", "c")],
)
GLUE_RIGHT = Digraph(
    ["e", "f"],
    [("e", "f"), ("f", "e")],
    [("4", "f"), ("5", "e")],
    [("7", "e")],
    [("3", "6")],
)

MIXED_COLOURS = {"a": B, "b": W, "c": B, "d": B, "e": W, "f": B, "g": B, "h": B, "i": W}
REORIENTABLE = BicoloredDigraph(
    list("abcdefghi"),
    [
        ("a", "b"), ("c", "b"), ("a", "d"), ("f", "c"), ("c", "i"), ("f", "b"), ("e", "a"), ("f", "e"),
        ("e", "d"), ("i", "f"), ("h", "e"), ("g", "h"), ("g", "d"), ("e", "g"), ("h", "i"),
    ],
    [("1", "c"), ("2", "b"), ("3", "b")],
    [("4", "i"), ("5", "h"), ("6", "h"), ("7", "g")],
    colours=MIXED_COLOURS,
)
PERFECT = BicoloredDigraph(
    list("abcdefghi"),
    [
        ("b", "a"), ("b", "c"), ("d", "a"), ("f", "c"), ("c", "i"), ("b", "f"), ("a", "e"), ("e", "f"),
        ("e", "d"), ("i", "f"), ("e", "h"), ("h", "g"), ("g", "d"), ("e", "g"), ("i", "h"),
    ],
    [("1", "c"), ("3", "b"), ("5", "h"), ("6", "h"), ("7", "g")],
    [("2", "b"), ("4", "i")],
    colours=MIXED_COLOURS,
)


def single_vertex(ins, outs, colour=None):
    g = Digraph(["v"], [], [(a, "v") for a in ins], [(b, "v") for b in outs])
    return g if colour is None else BicoloredDigraph.from_digraph(g, {"v": colour})


# --------------------------------------------------------------------------- construction and gluing


def test_digraph_validation():
    with pytest.raises(ValueError):
        Digraph(["v"], [("v", "w")], [], [])
    with pytest.raises(ValueError):
        Digraph(["v"], [], [("a", "v"), ("a", "v")], [])
    with pytest.raises(ValueError):
        BicoloredDigraph(["v"], [], [], [], colours={})


def test_json_round_trip():
    doc = json.loads(json.dumps(REORIENTABLE.to_json()))
    assert digraph_from_json(doc) == REORIENTABLE
    plain = json.loads(json.dumps(GLUE_RIGHT.to_json()))
    assert digraph_from_json(plain) == GLUE_RIGHT


def test_dot_mentions_every_vertex():
    dot = REORIENTABLE.to_dot()
    assert dot.startswith("digraph G {") and all(f'"{v}"' in dot for v in REORIENTABLE.vertices)


def test_glue_identity_is_neutral():
    glued = glue_graphs(GLUE_LEFT, identity_digraph(GLUE_LEFT.codomain))
    assert path_relation(glued) == path_relation(GLUE_LEFT)
    assert sorted(glued.edges) == sorted(GLUE_LEFT.edges)


def test_glue_two_arrows_chain():
    g = Digraph([], [], [], [], [("a", "m")])
    h = Digraph([], [], [], [], [("m", "c")])
    assert glue_graphs(g, h).arrows == (("a", "c"),)


def test_glue_polarity_mismatch():
    with pytest.raises(ValueError):
        glue_graphs(GLUE_LEFT, GLUE_LEFT)


def test_glue_example_shape():
    glued = glue_graphs(GLUE_LEFT, GLUE_RIGHT)
    assert len(glued.vertices) == 6
    assert len(glued.edges) == 8
    assert glued.domain.points == ("1", "2")
    assert glued.codomain.points == ("6", "7")
    assert glued.arrows == ()
    assert dict(glued.sinks)["6"] == "d"
    assert path_relation(glued) == compose_strict(path_relation(GLUE_LEFT), path_relation(GLUE_RIGHT))


# --------------------------------------------------------------------------- linkages


def test_single_vertex_path():
    rel = path_relation(single_vertex(["1", "2"], ["3"]))
    assert label_pairs(rel) == {
        (frozenset(), frozenset()),
        (frozenset({"1"}), frozenset({"3"})),
        (frozenset({"2"}), frozenset({"3"})),
    }
    assert rel == compose_strict(uniform_relation(["1", "2"], ["v"], 0), uniform_relation(["v"], ["3"], 0))


def test_identity_digraph_path():
    a = GroundSet(["x", "y"])
    assert path_relation(identity_digraph(a)) == identity_relation(a)
    assert epath_relation(identity_digraph(a)) == identity_relation(a)


def test_single_vertex_epath_is_uniform():
    g = single_vertex(["1", "2"], ["3", "4", "5"])
    assert epath_relation(g) == uniform_relation(g.domain, g.codomain, 0)


def test_multigraph_path_is_bimatroid():
    g = Digraph(
        list("abcdefgh"),
        [
            ("a", "c"), ("d", "b"), ("a", "d"), ("c", "d"), ("e", "c"), ("d", "e"), ("e", "f"), ("b", "g"),
            ("b", "g"), ("g", "d"), ("g", "h"), ("f", "h"), ("d", "f"), ("f", "d"),
        ],
        [("1", "b"), ("2", "b"), ("3", "a")],
        [("5", "h"), ("6", "f"), ("7", "f"), ("8", "e")],
        [("4", "9")],
    )
    rel = path_relation(g)
    assert is_bimatroid(rel)
    assert label_pairs(rel) == vertex_linkages(g)
    assert label_pairs(epath_relation(g)) == edge_linkages(g)


def test_path_and_epath_match_enumeration():
    rng = random.Random(1)
    for _ in range(150):
        nv = rng.randint(1, 5)
        g = random_digraph(rng, nv, rng.randint(0, 6), rng.randint(0, 3), rng.randint(0, 3), arrows=rng.randint(0, 1))
        vp, ep = path_relation(g), epath_relation(g)
        assert label_pairs(vp) == vertex_linkages(g)
        assert label_pairs(ep) == edge_linkages(g)
        assert exchange_check(vp) and exchange_check(ep)
        assert is_bimatroid(vp)


def test_vertex_free_graphs_agree():
    # with every vertex of degree at most one in each direction, paths never share vertices
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(1, 4)
        vs = [f"v{i}" for i in range(n)]
        g = Digraph(vs, [], [(f"a{i}", v) for i, v in enumerate(vs)], [(f"b{i}", v) for i, v in enumerate(vs)])
        assert path_relation(g) == epath_relation(g)


def test_reverse_gives_adjoint():
    rng = random.Random(3)
    for _ in range(60):
        g = random_digraph(rng, rng.randint(1, 5), rng.randint(0, 7), rng.randint(0, 3), rng.randint(0, 3), arrows=1)
        assert path_relation(g.reverse()) == adjoint(path_relation(g))


def test_path_functorial_on_random_pairs():
    rng = random.Random(4)
    for _ in range(150):
        g, h = random_glue_pair(rng)
        assert path_relation(glue_graphs(g, h)) == compose_strict(path_relation(g), path_relation(h))


# --------------------------------------------------------------------------- stars


def test_star_relations():
    assert star_relation(single_vertex(["1", "2"], ["3", "4"], W), "v") == uniform_relation(["1", "2"], ["3", "4"], -1)
    assert star_relation(single_vertex(["1", "2"], ["3", "4"], B), "v") == uniform_relation(["1", "2"], ["3", "4"], 1)
    assert star_relation(single_vertex(["1"], ["3", "4"], W), "v") == uniform_relation(["1"], ["3", "4"], 0)


def test_single_vertex_bpath_is_star():
    g = single_vertex(["1", "2"], ["3"], B)
    assert bpath_relation(g) == star_relation(g, "v")


# --------------------------------------------------------------------------- perfect orientations


def test_single_white_two_incoming_not_perfect():
    assert not is_perfectly_oriented(single_vertex(["1", "2"], [], W))


def test_mixed_example_orientations():
    assert is_perfectly_oriented(PERFECT)
    assert not is_perfectly_oriented(REORIENTABLE)
    found = find_perfect_orientation(REORIENTABLE)
    assert found is not None and is_perfectly_oriented(found)
    assert find_perfect_orientation(REORIENTABLE, flip_half_edges=False) is None


def test_perfect_example_bpath_equals_path():
    assert bpath_relation(PERFECT) == path_relation(PERFECT)


def test_reorientable_example_has_nonzero_bpath():
    # reorientable but not perfectly oriented, yet the strict value is nonzero
    rel = bpath_relation(REORIENTABLE)
    assert not rel.is_zero
    assert len(rel) == 11
    found = find_perfect_orientation(REORIENTABLE)
    assert label_bases(associated_matroid(rel)) == label_bases(associated_matroid(path_relation(found)))


def test_two_white_vertices_counterexample():
    # flipping the single full edge makes this perfect, so the value equals a nonzero Path
    g = BicoloredDigraph(["u", "v"], [("v", "u")], [("1", "u")], [("2", "v")], colours={"u": W, "v": W})
    assert not is_perfectly_oriented(g)
    flipped = g.with_structure(edges=[("u", "v")])
    assert is_perfectly_oriented(flipped)
    assert bpath_relation(g) == bpath_relation(flipped) == path_relation(flipped)
    assert not bpath_relation(g).is_zero


def test_bpath_properties_on_random_graphs():
    rng = random.Random(5)
    counts = {"perfect": 0, "reorientable": 0, "none": 0}
    for _ in range(120):
        g = random_bicolored(rng, rng.randint(1, 5), rng.randint(0, 7), rng.randint(0, 3), rng.randint(0, 3))
        rel = bpath_relation(g)
        assert exchange_check(rel)
        # (a) flipping a full edge changes nothing
        if g.edges:
            i = rng.randrange(len(g.edges))
            edges = list(g.edges)
            edges[i] = edges[i][::-1]
            assert bpath_relation(g.with_structure(edges=edges)) == rel
        # the gluing order is immaterial
        order = list(g.vertices)
        rng.shuffle(order)
        assert bpath_relation(g, order=order) == rel
        found = find_perfect_orientation(g)
        if is_perfectly_oriented(g):
            counts["perfect"] += 1
            assert rel == path_relation(g)
        elif found is None:
            counts["none"] += 1
            assert rel.is_zero
        else:
            counts["reorientable"] += 1
            assert label_bases(associated_matroid(rel)) == label_bases(associated_matroid(path_relation(found)))
    assert all(counts.values())


def test_half_edge_flip_preserves_associated_matroid():
    rng = random.Random(6)
    for _ in range(80):
        g = random_bicolored(rng, rng.randint(1, 4), rng.randint(0, 6), rng.randint(1, 3), rng.randint(0, 2))
        label, v = g.sources[0]
        flipped = g.with_structure(sources=g.sources[1:], sinks=list(g.sinks) + [(label, v)])
        assert label_bases(associated_matroid(bpath_relation(flipped))) == label_bases(
            associated_matroid(bpath_relation(g))
        )


# --------------------------------------------------------------------------- conversion


def test_to_bicolored_single_vertex_shape():
    g = single_vertex(["1", "2", "3"], ["4", "5"])
    bic = to_bicolored(g)
    assert len(bic.vertices) == 2 and len(bic.edges) == 1
    assert bic.colours["v:black"] == B and bic.colours["v:white"] == W
    assert is_perfectly_oriented(bic)
    assert bpath_relation(bic) == path_relation(g)


def test_to_bicolored_empty_and_doubling():
    empty = Digraph([], [], [], [], [("a", "b")])
    assert to_bicolored(empty).vertices == ()
    assert bpath_relation(to_bicolored(empty)) == path_relation(empty)
    g = random_digraph(random.Random(7), 4, 5, 2, 2)
    assert len(to_bicolored(g).vertices) == 8


def test_to_bicolored_random():
    rng = random.Random(8)
    for _ in range(80):
        g = random_digraph(rng, rng.randint(1, 4), rng.randint(0, 6), rng.randint(0, 3), rng.randint(0, 3), arrows=rng.randint(0, 1))
        bic = to_bicolored(g)
        assert is_perfectly_oriented(bic)
        assert bpath_relation(bic) == path_relation(g)


# --------------------------------------------------------------------------- extra half-edges


def test_path_lax_without_extras():
    r = path_lax(ExtendedDigraph(GLUE_LEFT, (), ()))
    assert r.relation == path_relation(GLUE_LEFT)
    assert r.type.total == 0


def test_path_lax_gammoid():
    # domain empty after removing the extra sources: the classical gammoid on the sinks
    g = Digraph(
        ["u", "v", "w"],
        [("u", "w"), ("v", "w")],
        [("s1", "u"), ("s2", "v")],
        [("t1", "u"), ("t2", "w"), ("t3", "w")],
    )
    r = path_lax(ExtendedDigraph(g, ("s1", "s2"), ()))
    assert len(r.relation.domain) == 0
    bases = {frozenset(y) for _, y in label_pairs(r.relation)}
    # two sources, but w is a bottleneck for t2 and t3
    assert bases == {frozenset({"t1", "t2"}), frozenset({"t1", "t3"})}
    assert r.type.total == 0


def test_path_lax_saturation_count():
    # one source feeding one vertex with no sink: the source cannot be linked
    g = Digraph(["u"], [], [("s", "u")], [])
    r = path_lax(ExtendedDigraph(g, ("s",), ()))
    assert r.type.total == 1


def test_path_lax_is_minor():
    rng = random.Random(9)
    for _ in range(80):
        g = random_digraph(rng, rng.randint(1, 4), rng.randint(0, 6), rng.randint(1, 3), rng.randint(1, 3))
        plus = tuple(p for p in g.domain.points if rng.random() < 0.5)
        minus = tuple(p for p in g.codomain.points if rng.random() < 0.5)
        r = path_lax(ExtendedDigraph(g, plus, minus))
        assert exchange_check(r.relation)
        full = associated_matroid(path_relation(g))
        tag = {p: p for p in full.ground.points}
        expected = minor(full, [tag[p] for p in plus], [tag[p] for p in minus])
        assert label_bases(associated_matroid(r.relation)) == label_bases(expected)


# --------------------------------------------------------------------------- breaking edges


def test_break_edge_shape():
    g = REORIENTABLE
    broken = break_edge(g, 0, W)
    assert len(broken.vertices) == len(g.vertices) + 2
    assert len(broken.edges) == len(g.edges) + 1
    assert broken.colours["break0:tail"] == W
    with pytest.raises(ValueError):
        break_edge(g, 99, W)
    with pytest.raises(ValueError):
        break_edge(g, 0, "green")


def test_perfectly_orientable_needs_no_breaks():
    assert minimum_breakings(PERFECT) == [{}]


def test_two_white_edge_needs_one_break():
    # one of the two white ends always lacks an incoming edge
    g = BicoloredDigraph(["u", "v"], [("u", "v")], [], [], colours={"u": W, "v": W})
    assert find_perfect_orientation(g) is None
    assert minimum_breakings(g) == [{0: B}]
    assert bpath_relation(g).is_zero
    lax = bpath_lax(g)
    assert lax.type.total == 1 and not lax.relation.is_zero


def test_lax_bpath_equals_minimum_breakings():
    rng = random.Random(10)
    checked = 0
    for _ in range(60):
        g = random_connected_bicolored(rng, rng.randint(1, 4), rng.randint(1, 5), rng.randint(0, 2), rng.randint(0, 2))
        lax = bpath_lax(g)
        choices = minimum_breakings(g)
        assert choices
        values = {bpath_relation(break_edges(g, choice)) for choice in choices}
        assert values == {lax.relation}
        assert lax.type.total == len(choices[0])
        checked += 1
    assert checked == 60


def test_lax_bpath_rejects_isolated_vertices():
    g = BicoloredDigraph(["u"], [], [], [], colours={"u": W})
    with pytest.raises(ValueError):
        bpath_lax(g)


def test_as_matroid_of_gammoid_has_no_domain():
    g = Digraph(["u"], [], [], [("t", "u")])
    assert label_bases(as_matroid(path_relation(g))) == {frozenset()}
