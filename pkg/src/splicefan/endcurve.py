"""End-curves of rooted splice diagrams.

Rooting a diagram at a leaf r and deleting, in every equation, the
admissible monomial pointing toward r cuts out a curve in the remaining
coordinates.  Per node the surviving equations reduce to binomials, and the
curve is a union of torus-translates of one monomial curve whose exponents
are the linking numbers from the root divided by their gcd.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .diagram import SpliceDiagram
from .errors import EliminationDegenerate, SolveFailed
from .exact import gcd_list, nullspace_one, smith_normal_form
from .system import Polynomial, SpliceSystem

NUMERIC_TOL = 1e-9


@dataclass(frozen=True)
class RootedDiagram:
    diagram: SpliceDiagram
    root: str
    others: tuple  # non-root leaves, in declared leaf order

    def link(self, leaf) -> int:
        return self.diagram.linking_number(self.root, leaf)

    def links(self) -> tuple:
        return tuple(self.link(leaf) for leaf in self.others)


def root(diagram: SpliceDiagram, r) -> RootedDiagram:
    if not diagram.is_leaf(r):
        raise ValueError(f"{r!r} is not a leaf")
    others = tuple(l for l in diagram.leaves if l != r)
    return RootedDiagram(diagram=diagram, root=r, others=others)


@dataclass(frozen=True)
class EndCurveSystem:
    rooted: RootedDiagram
    system: SpliceSystem
    equations: tuple  # (node, index, Polynomial) with the root monomial removed


def end_curve_system(system: SpliceSystem, rooted: RootedDiagram) -> EndCurveSystem:
    """Drop, in each minimal equation, the admissible monomial toward the root."""
    diagram = system.diagram
    equations = []
    for eq in system.equations:
        block = system.blocks[eq.node]
        toward = diagram.first_step(eq.node, rooted.root)
        j = block.star.index(toward)
        dropped = Polynomial.monomial(block.exponents[j], block.matrix.rows[j][eq.index - 1])
        equations.append((eq.node, eq.index, eq.minimal - dropped))
    return EndCurveSystem(rooted=rooted, system=system, equations=tuple(equations))


# ---------------------------------------------------------------------------
# Binomial reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Binomial:
    """The relation z^lhs == const * z^rhs (const nonzero)."""

    node: str
    lhs: tuple
    rhs: tuple
    const: Fraction

    def polynomial(self) -> Polynomial:
        """Primitive-integer rendering gamma_l * z^lhs + gamma_r * z^rhs."""
        num = Fraction(self.const)
        # z^lhs - const z^rhs, scaled to coprime integers with the rhs sign
        # chosen so the pair (1, -const) keeps denominator-free entries
        a, b = Fraction(1), -num
        scale = Fraction(a.denominator * b.denominator // gcd(a.denominator, b.denominator))
        a, b = a * scale, b * scale
        g = gcd(int(a), int(b))
        return Polynomial([(self.lhs, a / g), (self.rhs, b / g)])


@dataclass(frozen=True)
class BinomialSystem:
    rooted: RootedDiagram
    relations: tuple


def node_binomials(system: SpliceSystem, v, drop_position):
    """Eliminate node v's equations to two-monomial relations.

    ``drop_position`` indexes the star monomial that has been removed; the
    last surviving monomial in star order is the common reference.  Hamm
    guarantees every relation constant is nonzero.
    """
    block = system.blocks[v]
    count = len(block.star)
    surviving = [j for j in range(count) if j != drop_position]
    ref = surviving[-1]
    out = []
    for j in surviving[:-1]:
        zero_rows = [block.matrix.rows[p] for p in surviving if p not in (j, ref)]
        y = nullspace_one(zero_rows, block.matrix.n_equations)
        gamma_j = sum(c * yc for c, yc in zip(block.matrix.rows[j], y))
        gamma_ref = sum(c * yc for c, yc in zip(block.matrix.rows[ref], y))
        if gamma_j == 0 or gamma_ref == 0:
            raise EliminationDegenerate(
                f"vanishing relation constant at node {v!r}; Hamm condition broken"
            )
        out.append(
            Binomial(
                node=v,
                lhs=block.exponents[j],
                rhs=block.exponents[ref],
                const=-gamma_ref / gamma_j,
            )
        )
    return out


def binomial_reduce(ecs: EndCurveSystem) -> BinomialSystem:
    diagram = ecs.system.diagram
    relations = []
    for v in diagram.nodes:
        block = ecs.system.blocks[v]
        toward = diagram.first_step(v, ecs.rooted.root)
        relations.extend(node_binomials(ecs.system, v, block.star.index(toward)))
    return BinomialSystem(rooted=ecs.rooted, relations=tuple(relations))


# ---------------------------------------------------------------------------
# Torus solutions of binomial systems
# ---------------------------------------------------------------------------

def _reduce_columns(mat, kernels):
    """Shrink each column of an integer matrix by integer kernel shifts."""
    width = len(mat)
    if not width:
        return
    n_cols = len(mat[0])
    for kernel in kernels:
        weight = sum(c * c for c in kernel)
        if weight == 0:
            continue
        for j in range(n_cols):
            guess = -round(sum(mat[k][j] * kernel[k] for k in range(width)) / weight)
            best, best_cost = 0, None
            for t in range(guess - 2, guess + 3):
                cost = sum(abs(mat[k][j] + t * kernel[k]) for k in range(width))
                if best_cost is None or cost < best_cost:
                    best, best_cost = t, cost
            if best:
                for k in range(width):
                    mat[k][j] += best * kernel[k]


def solve_binomial_torus(rows, consts, width):
    """All components of {x in torus^width : x^row == const, row-wise}.

    Returns (solutions, exact): one solution per connected component, found
    through the Smith normal form; principal branch roots throughout, the
    finite component group enumerated by roots of unity.  ``exact`` is True
    when every solution is rational (stored as Fractions).

    Representatives are normalised along the kernel of the exponent matrix
    (integrally in the exact case, by log-centering in the numeric one) so
    coefficients stay small.
    """
    if not rows:
        return [tuple(Fraction(1) for _ in range(width))], True
    u, s, v = smith_normal_form([list(r) for r in rows])
    n_rows = len(rows)
    diag = [s[i][i] for i in range(min(n_rows, width))]
    rank = sum(1 for d in diag if d != 0)
    kappa = [Fraction(c) for c in consts]
    if any(c == 0 for c in kappa):
        raise SolveFailed("zero constant in a binomial relation")
    logk = [cmath.log(complex(c)) for c in kappa]
    for i in range(rank, n_rows):
        if abs(sum(u[i][j] * logk[j] for j in range(n_rows))) > 1e-6:
            raise SolveFailed("inconsistent binomial system")
    kernels = [[v[k][j] for k in range(width)] for j in range(rank, width)]

    if all(d == 1 for d in diag[:rank]):
        # x_k = prod_j kappa_j^(M[k][j]) with M = E . U; reduce M's columns
        # along the kernel before taking any powers
        m = [
            [
                sum(v[k][i] * u[i][j] for i in range(rank))
                for j in range(n_rows)
            ]
            for k in range(width)
        ]
        _reduce_columns(m, kernels)
        kappa_bits = [
            c.numerator.bit_length() + c.denominator.bit_length() for c in kappa
        ]
        load = max(
            sum(abs(m[k][j]) * kappa_bits[j] for j in range(n_rows))
            for k in range(width)
        )
        if load <= 1500:  # keep exact representatives small enough to verify
            solution = []
            for k in range(width):
                value = Fraction(1)
                for j in range(n_rows):
                    if m[k][j]:
                        value *= kappa[j] ** m[k][j]
                solution.append(value)
            return [tuple(solution)], True

    # numeric branch: log space at high precision (the Smith transforms can
    # carry large integer entries that would amplify double-precision noise),
    # with the exponent matrix reduced along the kernel first
    from mpmath import mp, mpc, exp as mp_exp, log as mp_log, pi as mp_pi

    exps = [[v[k][i] for i in range(rank)] for k in range(width)]
    _reduce_columns(exps, kernels)

    old_dps = mp.dps
    mp.dps = 60
    try:
        logk_mp = [
            mp_log(mpc(c.numerator)) - mp_log(mpc(c.denominator)) for c in kappa
        ]
        base_logy = [
            sum(u[i][j] * logk_mp[j] for j in range(n_rows)) / diag[i]
            for i in range(rank)
        ]
        solutions = []
        torsion_ranges = [range(d) for d in diag[:rank]]

        def emit(torsion):
            logy = [
                base_logy[i] + 2 * mp_pi * mpc(0, 1) * torsion[i] / diag[i]
                for i in range(rank)
            ]
            logx = [
                sum(exps[k][i] * logy[i] for i in range(rank)) for k in range(width)
            ]
            for kernel in kernels:
                weight = sum(c * c for c in kernel)
                if weight == 0:
                    continue
                shift = -sum(logx[k].real * kernel[k] for k in range(width)) / weight
                logx = [logx[k] + shift * kernel[k] for k in range(width)]
            solutions.append(tuple(complex(mp_exp(val)) for val in logx))

        def expand(prefix, level):
            if level == rank:
                emit(prefix)
                return
            for t in torsion_ranges[level]:
                expand(prefix + [t], level + 1)

        expand([], 0)
    finally:
        mp.dps = old_dps
    return solutions, False


# ---------------------------------------------------------------------------
# Monomial curve parameterization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialCurve:
    """t -> (c_l * t^(e_l)) with one coefficient vector per component."""

    root: str
    leaves: tuple          # non-root leaves, in order
    exponents: tuple       # primitive: links / g
    g: int                 # component count == gcd of the links
    components: tuple      # coefficient vectors (Fraction or complex entries)
    exact: bool


def parameterize(ecs: EndCurveSystem, rooted: RootedDiagram | None = None) -> MonomialCurve:
    rooted = rooted or ecs.rooted
    links = rooted.links()
    g = gcd_list(links)
    exponents = tuple(l // g for l in links)
    index = {leaf: i for i, leaf in enumerate(rooted.others)}
    binomials = binomial_reduce(ecs)
    rows, consts = [], []
    for rel in binomials.relations:
        row = [0] * len(rooted.others)
        for leaf, i in index.items():
            pos = ecs.system.diagram.leaf_index(leaf)
            row[i] = rel.lhs[pos] - rel.rhs[pos]
        rows.append(row)
        consts.append(rel.const)
    solutions, exact = solve_binomial_torus(rows, consts, len(rooted.others))
    if len(solutions) != g:
        raise SolveFailed(
            f"expected {g} components, binomial system produced {len(solutions)}"
        )
    curve = MonomialCurve(
        root=rooted.root,
        leaves=rooted.others,
        exponents=exponents,
        g=g,
        components=tuple(solutions),
        exact=exact,
    )
    if not verify_parameterization(curve, ecs):
        raise SolveFailed("parameterized components fail substitution")
    return curve


def verify_parameterization(curve: MonomialCurve, ecs: EndCurveSystem) -> bool:
    """Substitute z_l = c_l t^(e_l) and check every equation collapses.

    Terms are grouped by their t-degree, so the check is exact for rational
    coefficient vectors and safely scaled for numeric ones.
    """
    diagram = ecs.system.diagram
    positions = [diagram.leaf_index(leaf) for leaf in curve.leaves]
    for coeffs in curve.components:
        exact = all(isinstance(c, Fraction) for c in coeffs)
        for _, _, poly in ecs.equations:
            degrees = {}
            magnitudes = {}
            for m, c in poly.terms:
                degree = sum(m[p] * e for p, e in zip(positions, curve.exponents))
                value = c if exact else complex(c)
                for p, cf in zip(positions, coeffs):
                    if m[p]:
                        value = value * cf ** m[p]
                degrees[degree] = degrees.get(degree, 0) + value
                if not exact:
                    magnitudes[degree] = max(magnitudes.get(degree, 0.0), abs(value))
            for degree, total in degrees.items():
                if exact:
                    if total != 0:
                        return False
                elif abs(total) > NUMERIC_TOL * max(magnitudes[degree], 1.0):
                    return False
    return True
