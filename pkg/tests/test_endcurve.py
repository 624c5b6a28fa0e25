"""End-curves: rooted linking numbers, binomial reduction, parameterization."""

from fractions import Fraction

import pytest

from conftest import system_for
from splicefan import (
    EliminationDegenerate,
    MonomialCurve,
    SpliceDiagram,
    binomial_reduce,
    boundary_trop,
    build_system,
    end_curve_system,
    parameterize,
    root,
    verify_parameterization,
)

F = Fraction


def test_root_linking_numbers(d1):
    rooted = root(d1, "l1")
    assert rooted.links() == (49, 30, 42, 105)


def test_root_of_star(s0):
    assert root(s0, "l1").links() == (5, 3)


def test_root_requires_leaf(d1):
    with pytest.raises(ValueError):
        root(d1, "u")


def test_end_curve_equations(d1_system, d1):
    ecs = end_curve_system(d1_system, root(d1, "l1"))
    polys = {(n, i): p for n, i, p in ecs.equations}
    terms = {m for m, _ in polys[("u", 1)].terms}
    assert terms == {(0, 3, 0, 0, 0), (0, 0, 0, 1, 1)}
    assert all(
        m[0] == 0 for _, _, p in ecs.equations for m in p.support()
    )


def test_binomial_reduction_golden(d1_system, d1):
    """z4^5 = -32 z5^2, z3^7 = 2187 z5^2, z2^3 = (1/2) z4 z5."""
    ecs = end_curve_system(d1_system, root(d1, "l1"))
    relations = {
        (rel.lhs, rel.rhs): rel.const for rel in binomial_reduce(ecs).relations
    }
    assert relations[((0, 0, 0, 5, 0), (0, 0, 0, 0, 2))] == -32
    assert relations[((0, 0, 7, 0, 0), (0, 0, 0, 0, 2))] == 2187
    assert relations[((0, 3, 0, 0, 0), (0, 0, 0, 1, 1))] == F(1, 2)


def test_binomial_star_already_binomial(s0):
    system = build_system(s0)
    relations = binomial_reduce(end_curve_system(system, root(s0, "l1"))).relations
    assert len(relations) == 1
    assert relations[0].lhs == (0, 3, 0) and relations[0].rhs == (0, 0, 5)


def test_binomial_reduction_detects_broken_hamm(d1, d1_system):
    from splicefan.system import CoefficientMatrix, NodeBlock, SpliceSystem

    block = d1_system.blocks["v"]
    bad = CoefficientMatrix(
        "v", ((F(1), F(2)), (F(1), F(2)), (F(3), F(6)), (F(4), F(8)))
    )
    blocks = dict(d1_system.blocks)
    blocks["v"] = NodeBlock("v", block.star, block.exponents, bad)
    broken = SpliceSystem(d1, blocks, d1_system.equations)
    with pytest.raises(EliminationDegenerate):
        binomial_reduce(end_curve_system(broken, root(d1, "l1")))


def test_parameterize_worked_example(d1_system, d1):
    rooted = root(d1, "l1")
    curve = parameterize(end_curve_system(d1_system, rooted), rooted)
    assert curve.exponents == (49, 30, 42, 105)
    assert curve.g == 1 and len(curve.components) == 1


def test_published_parameterization_verifies_exactly(d1_system, d1):
    ecs = end_curve_system(d1_system, root(d1, "l1"))
    reference = MonomialCurve(
        root="l1",
        leaves=("l2", "l3", "l4", "l5"),
        exponents=(49, 30, 42, 105),
        g=1,
        components=((F(-1), F(3), F(-2), F(1)),),
        exact=True,
    )
    assert verify_parameterization(reference, ecs)
    flipped = MonomialCurve(
        root="l1",
        leaves=("l2", "l3", "l4", "l5"),
        exponents=(49, 30, 42, 105),
        g=1,
        components=((F(1), F(3), F(-2), F(1)),),
        exact=True,
    )
    assert not verify_parameterization(flipped, ecs)


def test_verify_vacuous_without_equations(d1_system, d1):
    ecs = end_curve_system(d1_system, root(d1, "l1"))
    empty = ecs.__class__(rooted=ecs.rooted, system=ecs.system, equations=())
    curve = MonomialCurve(
        root="l1", leaves=("l2", "l3", "l4", "l5"), exponents=(49, 30, 42, 105),
        g=1, components=((F(1), F(1), F(1), F(1)),), exact=True,
    )
    assert verify_parameterization(curve, empty)


def test_two_component_star():
    s = SpliceDiagram.star([2, 4, 3])
    rooted = root(s, "l3")
    assert rooted.links() == (4, 2)
    curve = parameterize(end_curve_system(build_system(s), rooted), rooted)
    assert curve.exponents == (2, 1) and curve.g == 2
    assert len(curve.components) == 2


def test_component_count_and_primitivity(pool_small):
    from math import gcd

    for k, d in enumerate(pool_small[:12]):
        system = system_for(d, seed=None if k % 2 else 1000 + k)
        for leaf in d.leaves:
            rooted = root(d, leaf)
            curve = parameterize(end_curve_system(system, rooted), rooted)
            links = rooted.links()
            g = 0
            for value in links:
                g = gcd(g, value)
            assert curve.g == g and len(curve.components) == g
            e_gcd = 0
            for e in curve.exponents:
                e_gcd = gcd(e_gcd, e)
            assert e_gcd == 1


def test_binomials_are_node_weight_homogeneous(pool_small):
    """Both monomials of a relation at v pair with w_v to the total weight,
    and with the root links to the root-to-node linking number."""
    for d in pool_small[:10]:
        system = build_system(d)
        for leaf in d.leaves:
            rooted = root(d, leaf)
            relations = binomial_reduce(end_curve_system(system, rooted)).relations
            for rel in relations:
                wv = d.node_weight_vector(rel.node)
                dv = d.total_weight(rel.node)
                assert sum(a * b for a, b in zip(wv, rel.lhs)) == dv
                assert sum(a * b for a, b in zip(wv, rel.rhs)) == dv
                link = d.linking_number(leaf, rel.node)
                for m in (rel.lhs, rel.rhs):
                    degree = sum(
                        e * d.linking_number(leaf, l)
                        for e, l in zip(m, d.leaves)
                        if e
                    )
                    assert degree == link


def test_boundary_ray_matches_end_curve_exponents(pool_boundary):
    for d in pool_boundary[:10]:
        system = build_system(d)
        for leaf in d.leaves:
            rooted = root(d, leaf)
            curve_exponents = parameterize(
                end_curve_system(system, rooted), rooted
            ).exponents
            ray = boundary_trop(system, [leaf], cross_check=False)
            assert ray == curve_exponents
