"""Diagram structure, linking numbers, conditions and the random generator."""

import pytest

from splicefan import (
    GenerationExhausted,
    SpliceDiagram,
    branches,
    check_conditions,
    edge_determinant,
    end_nodes,
    is_star_full,
    prune_end_node,
    random_diagram,
    semigroup_decompose,
    validate,
)


def test_worked_example_is_valid(d1):
    assert validate(d1) == []


def test_valency_two_rejected():
    path = SpliceDiagram(
        ["l1", "l2", "l3"],
        ["u", "w"],
        [("u", "l1", 2, None), ("u", "l2", 3, None), ("u", "w", 5, 7), ("w", "l3", 11, None)],
    )
    codes = {v.code for v in validate(path)}
    assert "NoValencyTwo" in codes or "NodeValency" in codes


def test_single_edge_rejected():
    bare = SpliceDiagram(["l1", "l2"], [], [("l1", "l2", None, None)])
    assert "AtLeastOneNode" in {v.code for v in validate(bare)}


def test_missing_weight_rejected():
    d = SpliceDiagram(
        ["l1", "l2", "l3"],
        ["u"],
        [("u", "l1", 2, None), ("u", "l2", None, None), ("u", "l3", 3, None)],
    )
    assert "MissingWeight" in {v.code for v in validate(d)}


def test_total_weights_and_linking(d1):
    assert d1.total_weight("u") == 294
    assert d1.total_weight("v") == 770
    assert d1.linking_number("u", "v") == 420
    assert d1.linking_number("v", "u") == 420
    assert d1.linking_number("u", "l1") == 147


def test_star_linking():
    s = SpliceDiagram.star([2, 3, 5])
    assert s.linking_number("n1", "l1") == 15
    assert s.node_weight_vector("n1") == (15, 10, 6)


def test_node_weight_vectors(d1):
    assert d1.node_weight_vector("u") == (147, 98, 60, 84, 210)
    assert d1.node_weight_vector("v") == (210, 140, 110, 154, 385)


def test_edge_determinant(d1):
    assert edge_determinant(d1, ("u", "v")) == 49 * 11 - 420 == 119


def test_edge_determinant_requires_internal(s0):
    with pytest.raises(ValueError):
        edge_determinant(s0, ("n1", "l1"))


def test_negative_determinant():
    d = SpliceDiagram(
        ["l1", "l2", "l3", "l4"],
        ["u", "v"],
        [
            ("u", "l1", 2, None),
            ("u", "l2", 3, None),
            ("u", "v", 1, 1),
            ("v", "l3", 2, None),
            ("v", "l4", 3, None),
        ],
    )
    assert edge_determinant(d, ("u", "v")) == 1 - 36 == -35
    assert not check_conditions(d).edge_determinant


def test_semigroup_decompositions(d1):
    at_u = semigroup_decompose(d1, "u", ("u", "v"))
    assert at_u.coeffs == {"l4": 1, "l5": 1}
    at_v = semigroup_decompose(d1, "v", ("v", "u"))
    # (1, 4) is lex-smaller than the alternative (3, 1)
    assert at_v.coeffs == {"l1": 1, "l2": 4}


def test_semigroup_leaf_edge(d1):
    adm = semigroup_decompose(d1, "u", ("u", "l1"))
    assert adm.coeffs == {"l1": 2}


def test_semigroup_infeasible():
    d = SpliceDiagram(
        ["l1", "l2", "l3", "l4"],
        ["u", "v"],
        [
            ("u", "l1", 2, None),
            ("u", "l2", 3, None),
            ("u", "v", 1, 50),
            ("v", "l3", 2, None),
            ("v", "l4", 3, None),
        ],
    )
    # 1 is not in the semigroup spanned by the reduced linking numbers (2, 3)
    assert semigroup_decompose(d, "u", ("u", "v")) is None
    assert not check_conditions(d).semigroup


def test_check_conditions(d1):
    report = check_conditions(d1)
    assert (report.edge_determinant, report.semigroup, report.coprime) == (True, True, True)


def test_coprime_check_fails_on_shared_factor():
    s = SpliceDiagram.star([2, 4, 3])
    report = check_conditions(s)
    assert report.edge_determinant and report.semigroup and not report.coprime


def test_geodesic_and_branches(d1):
    assert d1.geodesic("l1", "l5") == ["l1", "u", "v", "l5"]
    parts = sorted(sorted(b) for b in branches(d1, "u"))
    assert parts == [["l1"], ["l2"], ["l3", "l4", "l5", "v"]]


def test_star_full_and_pruning(d1):
    whole = frozenset(d1.vertices)
    assert is_star_full(d1, whole)
    assert sorted(end_nodes(d1, whole)) == ["u", "v"]
    pruned = prune_end_node(d1, whole, "u")
    assert pruned == frozenset({"u", "v", "l3", "l4", "l5"})
    assert is_star_full(d1, pruned)
    not_full = frozenset({"u", "v", "l1", "l3"})
    assert not is_star_full(d1, not_full)
    with pytest.raises(ValueError):
        prune_end_node(d1, pruned, "l3")


def test_random_diagram_deterministic_and_valid():
    a = random_diagram(5, 2, seed=7)
    b = random_diagram(5, 2, seed=7)
    assert a.leaves == b.leaves and a._raw_edges == b._raw_edges
    assert a._weights == b._weights
    assert validate(a) == []
    report = check_conditions(a)
    assert report.edge_determinant and report.semigroup and report.coprime


def test_random_star_is_coprime():
    d = random_diagram(3, 1, seed=1)
    assert check_conditions(d).coprime


def test_random_diagram_impossible_shape():
    with pytest.raises(GenerationExhausted):
        random_diagram(3, 2, seed=0)
    with pytest.raises(GenerationExhausted):
        random_diagram(2, 1, seed=0)


def test_random_non_coprime_allowed():
    d = random_diagram(6, 2, seed=3, require_coprime=False)
    report = check_conditions(d)
    assert report.edge_determinant and report.semigroup


# -- weight identities on random diagrams ------------------------------------

def test_linking_symmetry(pool_small):
    for d in pool_small:
        for u in d.vertices:
            for v in d.vertices:
                if u != v:
                    assert d.linking_number(u, v) == d.linking_number(v, u)


def test_geodesic_identity(pool_small):
    for d in pool_small:
        verts = d.vertices
        for v in verts:
            for w in verts:
                if v == w:
                    continue
                for u in d.geodesic(v, w)[1:-1]:
                    assert (
                        d.linking_number(w, u) * d.linking_number(u, v)
                        == d.linking_number(w, v) * d.total_weight(u)
                    )


def test_reduced_linking_identity(pool_small):
    for d in pool_small:
        for v in d.nodes:
            for leaf in d.leaves:
                assert d.linking_number(v, leaf) * d.weight_toward(v, leaf) == (
                    d.reduced_linking(v, leaf) * d.total_weight(v)
                )


def test_cone_decomposition(pool_small, d1):
    """w_u - (link(u,v)/d_v) w_v is supported beyond the edge at v, with
    coefficient det(e) * link(v, leaf) / d_v there."""
    from fractions import Fraction

    for d in [d1] + pool_small[:10]:
        for u, v in d.internal_edges():
            for a, b in ((u, v), (v, u)):
                wa = d.node_weight_vector(a)
                wb = d.node_weight_vector(b)
                factor = Fraction(d.linking_number(a, b), d.total_weight(b))
                diff = [x - factor * y for x, y in zip(wa, wb)]
                det = edge_determinant(d, (a, b))
                beyond = set(d.leaves_beyond(b, a))
                for leaf, value in zip(d.leaves, diff):
                    if leaf in beyond:
                        expected = Fraction(
                            det * d.linking_number(b, leaf), d.total_weight(b)
                        )
                        assert value == expected and value > 0
                    else:
                        assert value == 0
