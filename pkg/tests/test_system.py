"""Splice type systems: Hamm checks, assembly, initial forms, tails."""

import random
from fractions import Fraction

import pytest

from conftest import system_for
from splicefan import (
    CoefficientMatrix,
    ConditionViolation,
    HammViolation,
    Polynomial,
    SpliceDiagram,
    TailViolation,
    build_system,
    check_hamm,
    default_coefficients,
    initial_form,
    predicted_initial_form,
    random_coefficients,
    tau_truncate,
    validate_tail,
    w_weight,
)

F = Fraction


def poly(*terms):
    return Polynomial(list(terms))


def test_default_coefficients_are_vandermonde(d1):
    cu = default_coefficients(d1, "u")
    assert cu.rows == ((F(1),), (F(1),), (F(1),))
    cv = default_coefficients(d1, "v")
    assert cv.rows == ((F(1), F(1)), (F(1), F(2)), (F(1), F(3)), (F(1), F(4)))
    assert check_hamm(cu) and check_hamm(cv)


def test_check_hamm_worked_example_matrix():
    m = CoefficientMatrix(
        "v", ((F(1), F(33)), (F(1), F(1)), (F(1), F(2)), (F(-2155), F(-2123)))
    )
    assert check_hamm(m)


def test_check_hamm_repeated_row_fails():
    m = CoefficientMatrix("v", ((F(1), F(2)), (F(1), F(2)), (F(3), F(4)), (F(5), F(6))))
    assert not check_hamm(m)


def test_check_hamm_shape_guard():
    with pytest.raises(ValueError):
        check_hamm(CoefficientMatrix("u", ((F(1), F(2)), (F(3), F(4)))))


def test_random_coefficients_pass_hamm(d1):
    rng = random.Random(5)
    for v in d1.nodes:
        assert check_hamm(random_coefficients(d1, v, rng))


def test_build_worked_example_system(d1_system, d1):
    eqs = {(e.node, e.index): e.minimal for e in d1_system.equations}
    assert eqs[("u", 1)] == poly(((2, 0, 0, 0, 0), 1), ((0, 3, 0, 0, 0), -2), ((0, 0, 0, 1, 1), 1))
    assert eqs[("v", 1)] == poly(
        ((1, 4, 0, 0, 0), 1), ((0, 0, 7, 0, 0), 1), ((0, 0, 0, 5, 0), 1), ((0, 0, 0, 0, 2), -2155)
    )
    assert eqs[("v", 2)] == poly(
        ((1, 4, 0, 0, 0), 33), ((0, 0, 7, 0, 0), 1), ((0, 0, 0, 5, 0), 2), ((0, 0, 0, 0, 2), -2123)
    )
    assert len(d1_system.equations) == d1.n - 2


def test_build_star_system():
    s = SpliceDiagram.star([2, 3, 5])
    system = build_system(s)
    assert system.equations[0].minimal == poly(
        ((2, 0, 0), 1), ((0, 3, 0), 1), ((0, 0, 5), 1)
    )


def test_build_with_alternate_decomposition(d1):
    from conftest import worked_coefficients

    system = build_system(
        d1, coeffs=worked_coefficients(), coweights={("v", "u"): {"l1": 3, "l2": 1}}
    )
    eq = next(e for e in system.equations if (e.node, e.index) == ("v", 1))
    assert (3, 1, 0, 0, 0) in eq.minimal.support()
    assert (1, 4, 0, 0, 0) not in eq.minimal.support()


def test_bad_coweight_override_rejected(d1):
    with pytest.raises(ConditionViolation):
        build_system(d1, coweights={("v", "u"): {"l1": 1, "l2": 1}})


def test_build_rejects_hamm_violation(d1):
    bad = CoefficientMatrix("v", ((F(1), F(1)), (F(1), F(1)), (F(2), F(3)), (F(4), F(5))))
    with pytest.raises(HammViolation):
        build_system(d1, coeffs={"v": bad})


def test_build_rejects_failing_diagram():
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
    with pytest.raises(ConditionViolation):
        build_system(d)


# -- tails --------------------------------------------------------------------

def test_tail_golden_cases(d1):
    assert validate_tail(d1, "u", Polynomial.monomial((1, 0, 1, 0, 1)))
    assert not validate_tail(d1, "u", Polynomial.monomial((0, 0, 0, 1, 1)))
    assert validate_tail(d1, "u", Polynomial.zero())


def test_build_rejects_bad_tail(d1):
    with pytest.raises(TailViolation):
        build_system(d1, tails={("u", 1): Polynomial.monomial((0, 0, 0, 1, 1))})


def test_tail_implication(pool_small):
    """Above the node's own bound, every other node's bound follows."""
    rng = random.Random(9)
    for d in pool_small[:15]:
        for v in d.nodes:
            wv = d.node_weight_vector(v)
            dv = d.total_weight(v)
            for _ in range(40):
                m = tuple(rng.randint(0, 6) for _ in range(d.n))
                if sum(a * b for a, b in zip(wv, m)) <= dv:
                    continue
                for u in d.nodes:
                    if u == v:
                        continue
                    wu = d.node_weight_vector(u)
                    assert sum(a * b for a, b in zip(wu, m)) > d.linking_number(u, v)


# -- weights and initial forms --------------------------------------------------

def test_w_weight_and_zero_convention():
    f = poly(((2, 0), 1), ((0, 3), 1))
    assert w_weight(f, (1, 1)) == 2
    assert w_weight(Polynomial.zero(), (1, 1)) == float("inf")
    assert initial_form(Polynomial.zero(), (1, 1)) == Polynomial.zero()


def test_initial_form_golden(d1_system, d1):
    wu = d1.node_weight_vector("u")
    wv = d1.node_weight_vector("v")
    fu1, fv1, fv2 = [e.minimal for e in d1_system.equations]
    drop = Polynomial.monomial((1, 4, 0, 0, 0))
    assert initial_form(fv1, wu) == fv1 - drop
    assert initial_form(fv2, wu) == fv2 - drop.scale(33)
    assert initial_form(fu1, wu) == fu1
    # at the other node the admissible monomial toward it is dropped
    assert initial_form(fu1, wv) == poly(((2, 0, 0, 0, 0), 1), ((0, 3, 0, 0, 0), -2))


def test_initial_form_idempotent(d1_system, d1):
    w = (3, 1, 4, 1, 5)
    for eq in d1_system.equations:
        once = initial_form(eq.minimal, w)
        assert initial_form(once, w) == once


def test_w_weight_is_a_valuation():
    rng = random.Random(2)
    for _ in range(25):
        f = Polynomial(
            [(tuple(rng.randint(0, 4) for _ in range(3)), rng.randint(1, 5)) for _ in range(3)]
        )
        g = Polynomial(
            [(tuple(rng.randint(0, 4) for _ in range(3)), rng.randint(1, 5)) for _ in range(3)]
        )
        if not f or not g:
            continue
        w = tuple(rng.randint(1, 7) for _ in range(3))
        assert w_weight(f * g, w) == w_weight(f, w) + w_weight(g, w)


def test_predicted_initial_forms_match(pool_small):
    """in_w(F) at every node weight equals the drop-one-monomial prediction."""
    for k, d in enumerate(pool_small[:12]):
        system = system_for(d, seed=None if k % 2 else k)
        for u in d.nodes:
            wu = d.node_weight_vector(u)
            for eq in system.equations:
                predicted = predicted_initial_form(system, eq.node, eq.index, u)
                assert initial_form(eq.full, wu) == predicted


def test_predicted_initial_forms_survive_tails(pool_small):
    """Tail terms sit strictly above every node weight bound, so the node
    weight initial forms are unchanged by adding a tail."""
    rng = random.Random(31)
    checked = 0
    for d in pool_small[:8]:
        v = d.nodes[0]
        tail = None
        for _ in range(200):
            m = tuple(rng.randint(0, 5) for _ in range(d.n))
            candidate = Polynomial.monomial(m, F(rng.randint(1, 5), rng.randint(1, 3)))
            if any(m) and validate_tail(d, v, candidate):
                tail = candidate
                break
        if tail is None:
            continue
        system = build_system(d, tails={(v, 1): tail})
        for u in d.nodes:
            wu = d.node_weight_vector(u)
            for eq in system.equations:
                assert initial_form(eq.full, wu) == predicted_initial_form(
                    system, eq.node, eq.index, u
                )
        checked += 1
    assert checked >= 3


def test_predicted_initial_form_golden(d1_system):
    fv2 = next(e.minimal for e in d1_system.equations if (e.node, e.index) == ("v", 2))
    assert predicted_initial_form(d1_system, "v", 2, "u") == fv2 - Polynomial.monomial(
        (1, 4, 0, 0, 0)
    ).scale(33)
    fu1 = next(e.minimal for e in d1_system.equations if (e.node, e.index) == ("u", 1))
    assert predicted_initial_form(d1_system, "u", 1, "u") == fu1


def test_tau_truncate(d1_system, d1):
    fu1 = d1_system.equations[0].minimal
    assert tau_truncate(fu1, d1, ["l4"]) == poly(((2, 0, 0, 0, 0), 1), ((0, 3, 0, 0, 0), -2))
    assert tau_truncate(fu1, d1, ["l1"]) == poly(((0, 3, 0, 0, 0), -2), ((0, 0, 0, 1, 1), 1))
    assert tau_truncate(fu1, d1, []) == fu1


def test_truncation_commutes_when_minimum_survives(d1_system, d1):
    w = (3, 1, 4, 1, 5)
    for eq in d1_system.equations:
        for leaf in d1.leaves:
            inside = initial_form(eq.minimal, w)
            if any(m[d1.leaf_index(leaf)] for m in inside.support()):
                continue
            truncated = tau_truncate(eq.minimal, d1, [leaf])
            if truncated:
                assert tau_truncate(inside, d1, [leaf]) == initial_form(truncated, w)


def test_evaluate(d1_system):
    fu1 = d1_system.equations[0].minimal
    assert fu1.evaluate((1, 1, 1, 1, 1)) == 0
    assert fu1.evaluate((0, 0, 0, 0, 0)) == 0
    assert Polynomial.monomial((2, 0, 0, 0, 0)).evaluate((3, 1, 1, 1, 1)) == 9
    value = fu1.evaluate((1 + 1j, 1.0, 1.0, 2.0, 0.5))
    assert abs(value - ((1 + 1j) ** 2 - 2 + 1)) < 1e-12
