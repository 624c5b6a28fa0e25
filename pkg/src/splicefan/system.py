"""Splice type polynomial systems and weighted initial forms.

The system attached to a diagram has, for every node v of valency d, a
family of d-2 lattice polynomials: each is a coefficient row applied to the
admissible monomials of v's incident edges, optionally perturbed by a
higher-weight polynomial tail.  Coefficients are exact rationals and every
predicate here is decided exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .diagram import SpliceDiagram, check_conditions, semigroup_decompose
from .errors import ConditionViolation, HammViolation, TailViolation
from .exact import dot, nullspace_one

INF = math.inf


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

def _term_key(exponent):
    return (sum(exponent), exponent)


class Polynomial:
    """Finite sum of rational-coefficient monomials in the leaf variables.

    Terms are kept in graded-lex order on the exponent tuples (leaf order),
    with no zero coefficients and no duplicate exponents, so equal
    polynomials compare and hash equal.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for exponent, coeff in items:
            exponent = tuple(int(e) for e in exponent)
            c = acc.get(exponent, 0) + Fraction(coeff)
            if c:
                acc[exponent] = c
            else:
                acc.pop(exponent, None)
        self.terms = tuple(sorted(acc.items(), key=lambda t: _term_key(t[0])))

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls([(tuple(exponent), coeff)])

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        return Polynomial(list(self.terms) + list(other.terms))

    def __neg__(self):
        return Polynomial([(m, -c) for m, c in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            out = {}
            for m1, c1 in self.terms:
                for m2, c2 in other.terms:
                    m = tuple(a + b for a, b in zip(m1, m2))
                    out[m] = out.get(m, 0) + c1 * c2
            return Polynomial(out)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, scalar):
        scalar = Fraction(scalar)
        return Polynomial([(m, c * scalar) for m, c in self.terms])

    def support(self):
        return [m for m, _ in self.terms]

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def weight(self, w):
        """min over terms of w . m; infinity for the zero polynomial."""
        if not self.terms:
            return INF
        return min(dot(w, m) for m, _ in self.terms)

    def initial_form(self, w) -> "Polynomial":
        """Sum of the terms of minimal w-weight."""
        if not self.terms:
            return Polynomial.zero()
        weights = [dot(w, m) for m, _ in self.terms]
        lo = min(weights)
        return Polynomial([t for t, wt in zip(self.terms, weights) if wt == lo])

    def truncate(self, kill_indices) -> "Polynomial":
        """Drop every term with a positive exponent at some killed coordinate."""
        kill = set(kill_indices)
        return Polynomial(
            [(m, c) for m, c in self.terms if all(m[i] == 0 for i in kill)]
        )

    def evaluate(self, point):
        total = 0
        for m, c in self.terms:
            prod = c if isinstance(point[0], Fraction) or isinstance(point[0], int) else complex(c)
            for p, e in zip(point, m):
                if e:
                    prod = prod * p ** e
            total = total + prod
        return total

    def partial(self, index) -> "Polynomial":
        out = []
        for m, c in self.terms:
            if m[index]:
                lowered = list(m)
                lowered[index] -= 1
                out.append((tuple(lowered), c * m[index]))
        return Polynomial(out)

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        bits = []
        for m, c in self.terms:
            mono = "*".join(
                f"z{i + 1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(m) if e
            ) or "1"
            bits.append(f"{c}*{mono}")
        return "Polynomial(" + " + ".join(bits) + ")"


def w_weight(poly: Polynomial, w):
    return poly.weight(w)


def initial_form(poly: Polynomial, w) -> Polynomial:
    return poly.initial_form(w)


def tau_truncate(poly: Polynomial, diagram: SpliceDiagram, leaves) -> Polynomial:
    """Set the variables of the given leaves to zero."""
    return poly.truncate(diagram.leaf_index(l) for l in leaves)


def evaluate(poly: Polynomial, point):
    return poly.evaluate(point)


# ---------------------------------------------------------------------------
# Coefficient matrices and the Hamm condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientMatrix:
    """Rows indexed by the node's star (canonical order), one column per equation."""

    node: str
    rows: tuple

    @property
    def n_edges(self):
        return len(self.rows)

    @property
    def n_equations(self):
        return len(self.rows[0]) if self.rows else 0


def _det(rows):
    rows = [list(r) for r in rows]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def check_hamm(matrix: CoefficientMatrix) -> bool:
    """All maximal minors (choose n_equations rows) must be nonzero."""
    k = matrix.n_equations
    if k < 1 or matrix.n_edges != k + 2:
        raise ValueError("matrix must have shape (valency, valency - 2)")
    rows = [tuple(Fraction(x) for x in r) for r in matrix.rows]
    if any(len(r) != k for r in rows):
        raise ValueError("ragged coefficient matrix")
    return all(_det(sel) != 0 for sel in combinations(rows, k))


def default_coefficients(diagram: SpliceDiagram, v) -> CoefficientMatrix:
    """Vandermonde rows (j^0, j^1, ...) for edge index j; every minor is a
    Vandermonde determinant of distinct positive integers, hence nonzero."""
    valency = diagram.valency(v)
    rows = tuple(
        tuple(Fraction(j + 1) ** i for i in range(valency - 2))
        for j in range(valency)
    )
    return CoefficientMatrix(node=v, rows=rows)


def random_coefficients(diagram: SpliceDiagram, v, rng) -> CoefficientMatrix:
    """Small random integer coefficients, redrawn until the Hamm check passes."""
    valency = diagram.valency(v)
    while True:
        rows = tuple(
            tuple(Fraction(rng.randint(-9, 9)) for _ in range(valency - 2))
            for _ in range(valency)
        )
        matrix = CoefficientMatrix(node=v, rows=rows)
        if check_hamm(matrix):
            return matrix


# ---------------------------------------------------------------------------
# The system
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NodeBlock:
    """Per-node data: star order, admissible exponents, coefficient matrix."""

    node: str
    star: tuple            # neighbour ids in canonical star order
    exponents: tuple       # admissible exponent tuple per incident edge
    matrix: CoefficientMatrix


@dataclass(frozen=True)
class Equation:
    node: str
    index: int             # 1-based within the node
    minimal: Polynomial
    tail: Polynomial

    @property
    def full(self) -> Polynomial:
        return self.minimal + self.tail


class SpliceSystem:
    """A splice type system: n - 2 equations grouped by node."""

    def __init__(self, diagram: SpliceDiagram, blocks, equations):
        self.diagram = diagram
        self.blocks = dict(blocks)
        self.equations = tuple(equations)

    def equations_at(self, v):
        return [eq for eq in self.equations if eq.node == v]

    def polynomials(self):
        return [eq.full for eq in self.equations]

    def minimal_parts(self):
        return [eq.minimal for eq in self.equations]

    def __repr__(self):
        return f"SpliceSystem({len(self.equations)} equations on {self.diagram!r})"


def validate_tail(diagram: SpliceDiagram, v, tail: Polynomial) -> bool:
    """Every tail exponent must weigh strictly more than the node's own
    admissible value at v and strictly more than the linking number at every
    other node."""
    if not tail:
        return True
    wv = diagram.node_weight_vector(v)
    dv = diagram.total_weight(v)
    for m in tail.support():
        if dot(wv, m) <= dv:
            return False
        for u in diagram.nodes:
            if u != v and dot(diagram.node_weight_vector(u), m) <= diagram.linking_number(u, v):
                return False
    return True


def build_system(diagram: SpliceDiagram, coeffs=None, tails=None, coweights=None) -> SpliceSystem:
    """Assemble a splice type system from per-node coefficient matrices.

    coeffs: optional dict node -> CoefficientMatrix (default: Vandermonde).
    tails: optional dict (node, index) -> Polynomial.
    coweights: optional dict (node, neighbour) -> {leaf: int} overriding the
    lex-smallest semigroup decomposition (the override must still satisfy the
    defining identity).
    """
    report = check_conditions(diagram)
    if not (report.edge_determinant and report.semigroup):
        raise ConditionViolation(f"diagram fails conditions: {report}")
    coeffs = coeffs or {}
    tails = tails or {}
    coweights = coweights or {}

    blocks = {}
    equations = []
    for v in diagram.nodes:
        star = diagram.neighbors(v)
        matrix = coeffs.get(v) or default_coefficients(diagram, v)
        if matrix.n_edges != len(star) or matrix.n_equations != len(star) - 2:
            raise HammViolation(f"coefficient matrix at {v!r} has the wrong shape")
        if not check_hamm(matrix):
            raise HammViolation(f"coefficient matrix at {v!r} has a zero maximal minor")
        exponents = []
        for u in star:
            override = coweights.get((v, u))
            if override is not None:
                _check_coweight_override(diagram, v, u, override)
                coeff_map = override
            else:
                admissible = semigroup_decompose(diagram, v, (v, u))
                coeff_map = admissible.coeffs
            exponents.append(
                tuple(coeff_map.get(leaf, 0) for leaf in diagram.leaves)
            )
        exponents = tuple(exponents)
        blocks[v] = NodeBlock(node=v, star=star, exponents=exponents, matrix=matrix)
        for i in range(len(star) - 2):
            minimal = Polynomial(
                [(exponents[j], matrix.rows[j][i]) for j in range(len(star))]
            )
            tail = tails.get((v, i + 1), Polynomial.zero())
            if not validate_tail(diagram, v, tail):
                raise TailViolation(f"tail for ({v!r}, {i + 1}) breaks the weight bounds")
            equations.append(Equation(node=v, index=i + 1, minimal=minimal, tail=tail))
    return SpliceSystem(diagram, blocks, equations)


def _check_coweight_override(diagram, v, u, coeff_map):
    beyond = set(diagram.leaves_beyond(v, u))
    if any(leaf not in beyond for leaf in coeff_map):
        raise ConditionViolation(f"override for ({v!r}, {u!r}) leaves its support")
    total = sum(a * diagram.reduced_linking(v, leaf) for leaf, a in coeff_map.items())
    if total != diagram.weight(v, u) or any(a < 0 for a in coeff_map.values()):
        raise ConditionViolation(f"override for ({v!r}, {u!r}) misses the edge weight")


def predicted_initial_form(system: SpliceSystem, v, i, u) -> Polynomial:
    """Initial form of equation (v, i) at a node weight vector: unchanged at
    the node itself, otherwise the admissible monomial toward u is dropped."""
    eq = next(e for e in system.equations if e.node == v and e.index == i)
    if u == v:
        return eq.minimal
    block = system.blocks[v]
    toward = system.diagram.first_step(v, u)
    j = block.star.index(toward)
    dropped = Polynomial.monomial(block.exponents[j], block.matrix.rows[j][i - 1])
    return eq.minimal - dropped


def combination(system: SpliceSystem, v, y) -> Polynomial:
    """The linear combination sum(y_i * F_{v,i}) of the node's equations."""
    out = Polynomial.zero()
    for eq, c in zip(system.equations_at(v), y):
        out = out + eq.full.scale(c)
    return out


def node_certificate_combination(system: SpliceSystem, v, keep):
    """Coefficients y with supp(C @ y) inside ``keep`` (3 star positions).

    The Hamm condition makes the complementary rows independent, so the
    solution line is unique; it is normalised to 1 at keep[0] by the caller.
    """
    block = system.blocks[v]
    others = [j for j in range(len(block.star)) if j not in keep]
    rows = [block.matrix.rows[j] for j in others]
    return nullspace_one(rows, block.matrix.n_equations)
