"""Splice fans, membership certificates and balancing.

The splice fan of a diagram is the cone over the diagram embedded in the
standard simplex: one ray per vertex (unit vectors at leaves, primitive node
weight vectors at nodes), one two-dimensional cone per edge, each cone
carrying a tropical multiplicity.  A strictly positive weight vector either
lands on the fan (locate) or is certified off the local tropicalization by a
node whose equations combine to a single lowest-weight monomial
(certificate_search); the two routes are mutually exclusive.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diagram import SpliceDiagram
from .endcurve import node_binomials, solve_binomial_torus
from .errors import (
    InconsistentMembership,
    NonIntegralMultiplicity,
    NoTorusPoint,
    VerificationFailed,
)
from .exact import dot, gcd_list, primitive, unimodular_to_unit
from .system import Polynomial, SpliceSystem

RANK_TOL = 1e-9


# ---------------------------------------------------------------------------
# Fan construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ray:
    label: str
    vector: tuple

    def is_unit(self) -> bool:
        return sum(self.vector) == 1 and all(x in (0, 1) for x in self.vector)


@dataclass(frozen=True)
class Cone2:
    rays: tuple  # (label, label)
    multiplicity: int


class SpliceFan:
    def __init__(self, diagram, rays, cones):
        self.diagram = diagram
        self.rays = tuple(rays)
        self.cones = tuple(cones)
        self.ray_by_label = {r.label: r for r in self.rays}

    @property
    def n(self):
        return len(self.rays[0].vector)

    def node_labels(self):
        return [r.label for r in self.rays if not r.is_unit()]

    def cones_at(self, label):
        return [c for c in self.cones if label in c.rays]

    def __repr__(self):
        return f"SpliceFan({len(self.rays)} rays, {len(self.cones)} cones)"


def _exact_div(num, den, what):
    q, r = divmod(num, den)
    if r:
        raise NonIntegralMultiplicity(f"{what}: {num} not divisible by {den}")
    return q


def splice_fan(diagram: SpliceDiagram) -> SpliceFan:
    """Rays for all vertices, one weighted cone per edge of the diagram.

    The multiplicity of a leaf cone [l, u] is gcd(link(u, m) : m != l) over
    the weight at u toward l; for an internal cone [u, v] it is the product
    of the two side gcds over the product of the two edge weights.  Both
    divisions are checked exact.
    """
    rays = [
        Ray(label=leaf, vector=tuple(int(i == k) for i in range(diagram.n)))
        for k, leaf in enumerate(diagram.leaves)
    ]
    rays += [
        Ray(label=v, vector=primitive(diagram.node_weight_vector(v)))
        for v in diagram.nodes
    ]
    cones = []
    for a, b in diagram.edges():
        if diagram.is_leaf(a) or diagram.is_leaf(b):
            leaf, node = (a, b) if diagram.is_leaf(a) else (b, a)
            g = gcd_list(
                diagram.linking_number(node, m)
                for m in diagram.leaves
                if m != leaf
            )
            mult = _exact_div(g, diagram.weight(node, leaf), f"cone [{leaf},{node}]")
        else:
            side_a = [l for l in diagram.leaves if l in _side(diagram, a, b)]
            side_b = [l for l in diagram.leaves if l in _side(diagram, b, a)]
            g = gcd_list(diagram.linking_number(a, l) for l in side_a) * gcd_list(
                diagram.linking_number(b, l) for l in side_b
            )
            mult = _exact_div(
                g,
                diagram.weight(a, b) * diagram.weight(b, a),
                f"cone [{a},{b}]",
            )
        cones.append(Cone2(rays=(a, b), multiplicity=mult))
    return SpliceFan(diagram, rays, cones)


def _side(diagram, u, v):
    """Leaves whose geodesic to v passes through u (u's side of edge [u,v])."""
    return set(diagram.leaves) - set(diagram.leaves_beyond(u, v))


def embed_vertex(diagram: SpliceDiagram, v):
    """Image of a vertex in the standard simplex: weight vector over 1-norm."""
    if diagram.is_leaf(v):
        return tuple(
            Fraction(int(l == v)) for l in diagram.leaves
        )
    w = diagram.node_weight_vector(v)
    total = sum(w)
    return tuple(Fraction(x, total) for x in w)


def barycenter(diagram: SpliceDiagram, v, leaves):
    """Average of the leaf vertices weighted by their linking numbers from v."""
    leaves = list(leaves)
    if not leaves:
        raise ValueError("barycenter needs at least one leaf")
    weights = {l: diagram.linking_number(v, l) for l in leaves}
    total = sum(weights.values())
    return tuple(
        Fraction(weights.get(l, 0), total) for l in diagram.leaves
    )


# ---------------------------------------------------------------------------
# Locating a weight vector on the fan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CellLocation:
    kind: str            # "on_ray" | "in_cone" | "outside"
    label: object = None  # ray label or cone label pair
    coeffs: tuple = ()   # exact coefficients on the primitive ray vectors

    @property
    def inside(self) -> bool:
        return self.kind != "outside"


OUTSIDE = CellLocation(kind="outside")


def locate(fan: SpliceFan, w) -> CellLocation:
    """Exact cell of the fan containing w (ties resolve to rays)."""
    w = tuple(Fraction(x) for x in w)
    if all(x == 0 for x in w) or any(x < 0 for x in w):
        raise ValueError("weight vector must be non-negative and nonzero")
    for ray in fan.rays:
        coeff = _ray_multiple(ray.vector, w)
        if coeff is not None:
            return CellLocation(kind="on_ray", label=ray.label, coeffs=(coeff,))
    for cone in fan.cones:
        r1 = fan.ray_by_label[cone.rays[0]].vector
        r2 = fan.ray_by_label[cone.rays[1]].vector
        coeffs = _cone_coefficients(r1, r2, w)
        if coeffs is not None and coeffs[0] > 0 and coeffs[1] > 0:
            return CellLocation(kind="in_cone", label=cone.rays, coeffs=coeffs)
    return OUTSIDE


def _ray_multiple(ray, w):
    k = next(i for i, x in enumerate(ray) if x)
    coeff = Fraction(w[k], ray[k])
    if coeff > 0 and all(w[i] == coeff * ray[i] for i in range(len(ray))):
        return coeff
    return None


def _cone_coefficients(r1, r2, w):
    i = next(k for k, x in enumerate(r1) if x)
    j = next(
        (k for k in range(len(r1)) if r1[i] * r2[k] - r1[k] * r2[i] != 0), None
    )
    if j is None:
        return None
    det = Fraction(r1[i] * r2[j] - r1[j] * r2[i])
    alpha = (w[i] * r2[j] - w[j] * r2[i]) / det
    beta = (r1[i] * w[j] - r1[j] * w[i]) / det
    for k in range(len(r1)):
        if alpha * r1[k] + beta * r2[k] != w[k]:
            return None
    return (alpha, beta)


# ---------------------------------------------------------------------------
# Certificates of non-membership
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncationContext:
    """Coordinates of these leaves are set to zero before tropicalizing."""

    leaves: frozenset

    def indices(self, diagram):
        return [diagram.leaf_index(l) for l in self.leaves]


@dataclass(frozen=True)
class Certificate:
    """Witness that w is off the local tropicalization.

    ``coefficients`` combine the node's equations into a polynomial whose
    initial form is exactly the monomial with exponent ``monomial``; the
    winning edge beats at least two other incident positions strictly, the
    rest being killed by the truncation.
    """

    node: str
    edge: tuple            # (node, neighbour)
    monomial: tuple
    values: dict           # neighbour -> pairing of w with that admissible exponent
    coefficients: tuple    # one rational per equation (node, i)
    truncated: tuple = ()  # neighbours whose monomials the truncation killed


def certificate_search(system: SpliceSystem, w, truncation: TruncationContext | None = None):
    """Scan nodes in declaration order for a single-monomial combination.

    At a node, the candidate is the surviving admissible monomial of least
    w-weight; it qualifies when the count of strictly heavier surviving
    positions plus truncation-killed slots reaches two (and every surviving
    tail term weighs strictly more).  Coefficients come from exact
    elimination against the Hamm matrix.
    """
    diagram = system.diagram
    kill = set(truncation.indices(diagram)) if truncation else set()
    w = tuple(Fraction(x) for x in w)
    for v in diagram.nodes:
        block = system.blocks[v]
        count = len(block.star)
        killed = [
            j for j, m in enumerate(block.exponents)
            if any(m[i] for i in kill)
        ]
        surviving = [j for j in range(count) if j not in killed]
        if not surviving:
            continue
        values = {j: dot(w, block.exponents[j]) for j in surviving}
        low = min(values.values())
        win = next(j for j in surviving if values[j] == low)
        above = [j for j in surviving if values[j] > low]
        slots = killed[:2] + above[: max(0, 2 - len(killed))]
        if len(slots) < 2:
            continue
        if not _tails_clear(system, v, w, kill, low):
            continue
        y = _combination_coefficients(system, v, [win] + slots)
        cert = Certificate(
            node=v,
            edge=(v, block.star[win]),
            monomial=block.exponents[win],
            values={block.star[j]: dot(w, block.exponents[j]) for j in range(count)},
            coefficients=y,
            truncated=tuple(block.star[j] for j in killed),
        )
        _verify_certificate(system, w, kill, cert)
        return cert
    return None


def _tails_clear(system, v, w, kill, low):
    for eq in system.equations_at(v):
        tail = eq.tail.truncate(kill) if kill else eq.tail
        for m in tail.support():
            if dot(w, m) <= low:
                return False
    return True


def _combination_coefficients(system, v, keep):
    from .system import node_certificate_combination

    block = system.blocks[v]
    y = node_certificate_combination(system, v, set(keep))
    win = keep[0]
    lead = sum(c * yc for c, yc in zip(block.matrix.rows[win], y))
    if lead == 0:
        raise VerificationFailed(f"certificate elimination degenerated at {v!r}")
    return tuple(yc / lead for yc in y)


def _verify_certificate(system, w, kill, cert: Certificate):
    combo = Polynomial.zero()
    for eq, c in zip(system.equations_at(cert.node), cert.coefficients):
        combo = combo + eq.full.scale(c)
    if kill:
        combo = combo.truncate(kill)
    if combo.initial_form(w) != Polynomial.monomial(cert.monomial):
        raise VerificationFailed(
            f"certificate at {cert.node!r} does not reduce to its monomial"
        )


# ---------------------------------------------------------------------------
# Membership dichotomy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MembershipResult:
    status: str                     # "in" | "out"
    cell: CellLocation | None = None
    certificate: Certificate | None = None


def membership(system: SpliceSystem, w, fan: SpliceFan | None = None) -> MembershipResult:
    """Exactly one of locate / certificate_search succeeds for positive w."""
    if any(Fraction(x) <= 0 for x in w):
        raise ValueError("membership requires a strictly positive weight vector")
    fan = fan or splice_fan(system.diagram)
    cell = locate(fan, w)
    cert = certificate_search(system, w)
    if cell.inside and cert is None:
        return MembershipResult(status="in", cell=cell)
    if not cell.inside and cert is not None:
        return MembershipResult(status="out", certificate=cert)
    raise InconsistentMembership(
        f"locate says {cell.kind!r} while certificate is {cert!r}"
    )


# ---------------------------------------------------------------------------
# Brute-force oracle over the span of the generators
# ---------------------------------------------------------------------------

def monomial_in_span_oracle(generators, w):
    """Exponent m such that some constant combination of the generators has
    initial form exactly the monomial z^m; None when no such m exists.

    For each candidate monomial the constraint is linear: all other terms of
    weight <= w(m) must cancel while z^m survives, i.e. the target row must
    leave the span of the constraint rows.  All eliminations are integral.
    """
    w = tuple(Fraction(x) for x in w)
    cols = len(generators)
    rows = {}
    for j, g in enumerate(generators):
        for m, c in g.terms:
            rows.setdefault(m, [Fraction(0)] * cols)[j] += c
    if not rows:
        return None
    scaled = {}
    for m, row in rows.items():
        den = 1
        for c in row:
            den = den * c.denominator // _gcd_int(den, c.denominator)
        scaled[m] = tuple(int(c * den) for c in row)

    order = sorted(scaled, key=lambda m: (dot(w, m), [-e for e in m]))
    groups = []
    for m in order:
        if groups and dot(w, groups[-1][0][0]) == dot(w, m):
            groups[-1].append((m, scaled[m]))
        else:
            groups.append([(m, scaled[m])])

    basis = []
    for group in groups:
        for m, row in group:
            others = [r for m2, r in group if m2 != m]
            if not _in_int_span(row, basis + [_reduce_row(r, basis) for r in others]):
                return m
        for _, row in group:
            reduced = _reduce_row(row, basis)
            if any(reduced):
                basis.append(_primitive_row(reduced))
                basis.sort(key=_lead_index)
    return None


def _gcd_int(a, b):
    from math import gcd

    return gcd(a, b)


def _lead_index(row):
    return next((i for i, x in enumerate(row) if x), len(row))


def _primitive_row(row):
    g = gcd_list(row)
    return tuple(x // g for x in row) if g else tuple(row)


def _reduce_row(row, basis):
    row = list(row)
    for b in basis:
        lead = _lead_index(b)
        if lead < len(row) and row[lead]:
            p, q = b[lead], row[lead]
            row = [x * p - y * q for x, y in zip(row, b)]
    g = gcd_list(row)
    return [x // g for x in row] if g else row


def _in_int_span(target, rows):
    basis = []
    for r in rows:
        reduced = _reduce_row(r, basis)
        if any(reduced):
            basis.append(_primitive_row(reduced))
            basis.sort(key=_lead_index)
    return not any(_reduce_row(list(target), basis))


def initial_ideal_generators(system: SpliceSystem, w):
    """Initial forms of all equations plus a monomial-freeness verdict."""
    gens = [eq.full.initial_form(w) for eq in system.equations]
    monomial_free = not any(g.is_monomial() for g in gens) and (
        monomial_in_span_oracle(system.polynomials(), w) is None
    )
    return gens, monomial_free


# ---------------------------------------------------------------------------
# Boundary tropicalizations
# ---------------------------------------------------------------------------

def boundary_trop(system: SpliceSystem, leaves, samples=6, seed=0, cross_check=True):
    """Tropicalization after setting the given leaf coordinates to zero.

    One killed leaf leaves a single ray, the projected weight vector of the
    adjacent node (primitive); two or more leave nothing.  Both answers are
    cross-checked by certificate searches on sampled vectors.
    """
    leaves = sorted(set(leaves), key=system.diagram.leaf_index)
    diagram = system.diagram
    if not 0 < len(leaves) < diagram.n:
        raise ValueError("need a nonempty proper subset of leaves")
    trunc = TruncationContext(leaves=frozenset(leaves))
    kill = set(trunc.indices(diagram))
    rng = random.Random(seed)
    if len(leaves) >= 2:
        if cross_check:
            for _ in range(samples):
                w = tuple(
                    0 if i in kill else rng.randint(1, 40) for i in range(diagram.n)
                )
                if certificate_search(system, w, trunc) is None:
                    raise VerificationFailed(
                        f"no certificate at {w} though the truncation by "
                        f"{leaves} should be empty"
                    )
        return None

    leaf = leaves[0]
    node = diagram.neighbors(leaf)[0]
    vec = diagram.node_weight_vector(node)
    projected = primitive(
        tuple(x for l, x in zip(diagram.leaves, vec) if l != leaf)
    )
    if cross_check:
        full = _embed_projected(diagram, leaf, projected)
        for t in (1, 2, 3):
            w = tuple(t * x for x in full)
            if certificate_search(system, w, trunc) is not None:
                raise VerificationFailed(f"certificate found on the boundary ray {w}")
        for _ in range(samples):
            w = tuple(
                0 if i in kill else rng.randint(1, 40) for i in range(diagram.n)
            )
            if _is_multiple(w, full):
                continue
            if certificate_search(system, w, trunc) is None:
                raise VerificationFailed(
                    f"missing certificate off the boundary ray at {w}"
                )
    return projected


def _embed_projected(diagram, leaf, projected):
    out = []
    k = 0
    for l in diagram.leaves:
        if l == leaf:
            out.append(0)
        else:
            out.append(projected[k])
            k += 1
    return tuple(out)


def _is_multiple(w, ray):
    pairs = [(a, b) for a, b in zip(w, ray) if a or b]
    return all(
        a1 * b2 == a2 * b1 for (a1, b1), (a2, b2) in zip(pairs, pairs[1:])
    )


# ---------------------------------------------------------------------------
# Balancing
# ---------------------------------------------------------------------------

def check_balancing(fan: SpliceFan) -> bool:
    """At each node ray, the multiplicity-weighted primitive images of the
    adjacent cones must cancel in the quotient lattice by the ray."""
    for label in fan.node_labels():
        t = fan.ray_by_label[label].vector
        u = unimodular_to_unit(t)
        if [sum(r * x for r, x in zip(row, t)) for row in u] != [1] + [0] * (len(t) - 1):
            raise VerificationFailed(f"ray {label!r} is not primitive")
        total = [0] * (len(t) - 1)
        for cone in fan.cones_at(label):
            other = cone.rays[0] if cone.rays[1] == label else cone.rays[1]
            r = fan.ray_by_label[other].vector
            image = [sum(c * x for c, x in zip(row, r)) for row in u[1:]]
            g = gcd_list(image)
            if g == 0:
                return False
            total = [a + cone.multiplicity * b // g for a, b in zip(total, image)]
        if any(total):
            return False
    return True


# ---------------------------------------------------------------------------
# Numeric smoothness smoke test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmokeReport:
    cell: CellLocation
    samples: int
    full_rank: bool
    min_ratio: float
    max_residual: float
    repaired_sampling: bool = False


def smoothness_smoke(system: SpliceSystem, w, samples=10, seed=0) -> SmokeReport:
    """Sample torus points of the initial degeneration at w and check the
    log-Jacobian of the initial forms has full rank n - 2 at each of them.

    Points come from the monomial parameterizations of the degeneration
    (end-curve components glued through a Pham-Brieskorn-Hamm kernel at a
    node ray).  If the system's own matrices degenerate, sampling falls back
    to repaired default coefficients while the rank is still evaluated on
    the original initial forms.
    """
    diagram = system.diagram
    fan = splice_fan(diagram)
    cell = locate(fan, w)
    if not cell.inside:
        raise NoTorusPoint(f"{w} is outside the fan")
    if cell.kind == "on_ray" and diagram.is_leaf(cell.label):
        raise NoTorusPoint("leaf rays are not strictly positive cells")

    gens = [eq.full.initial_form(w) for eq in system.equations]
    rng = random.Random(seed)
    repaired = False
    try:
        points = [_sample_log_point(system, cell, rng) for _ in range(samples)]
    except Exception:
        repaired = True
        fixed = _repaired_system(diagram)
        rng = random.Random(seed)
        points = [_sample_log_point(fixed, cell, rng) for _ in range(samples)]

    min_ratio = float("inf")
    max_residual = 0.0
    for logz in points:
        if not repaired:
            max_residual = max(max_residual, _relative_residual(gens, logz))
        ratios = _log_jacobian_ratio(gens, logz)
        min_ratio = min(min_ratio, ratios)
    return SmokeReport(
        cell=cell,
        samples=samples,
        full_rank=min_ratio > RANK_TOL,
        min_ratio=min_ratio,
        max_residual=max_residual,
        repaired_sampling=repaired,
    )


def _repaired_system(diagram):
    from .system import build_system

    return build_system(diagram)


def _term_logs(poly, logz):
    """log of each term value at the point exp(logz); never overflows."""
    import cmath

    return [
        cmath.log(complex(c)) + sum(e * lz for e, lz in zip(m, logz) if e)
        for m, c in poly.terms
    ]


def _relative_residual(gens, logz):
    import cmath

    worst = 0.0
    for g in gens:
        logs = _term_logs(g, logz)
        top = max(l.real for l in logs)
        vals = [cmath.exp(l - top) for l in logs]  # all magnitudes <= 1
        worst = max(worst, abs(sum(vals)) / max(abs(v) for v in vals))
    return worst


def _log_jacobian_ratio(gens, logz):
    """Singular value ratio of the rows (z_l d/dz_l applied to each form),
    each row rescaled by its largest term so nothing overflows."""
    import cmath

    n = len(logz)
    mat = np.zeros((len(gens), n), dtype=complex)
    for i, g in enumerate(gens):
        logs = _term_logs(g, logz)
        top = max(l.real for l in logs)
        row = np.zeros(n, dtype=complex)
        for (m, _), l in zip(g.terms, logs):
            val = cmath.exp(l - top)
            for k, e in enumerate(m):
                if e:
                    row[k] += e * val
        mat[i] = row
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv[0] == 0:
        return 0.0
    return float(sv[-1] / sv[0])


def _log_of(value):
    """Complex log of a Fraction or complex without float overflow."""
    import cmath
    import math

    if isinstance(value, Fraction):
        real = math.log(value.numerator if value > 0 else -value.numerator)
        real -= math.log(value.denominator)
        return complex(real, 0 if value > 0 else math.pi)
    return cmath.log(complex(value))


def _center_logs(logs, directions):
    """Shift logs by real multiples of the directions to tame magnitudes."""
    for d in directions:
        weight = sum(x * x for x in d)
        if weight:
            shift = -sum(l.real * x for l, x in zip(logs, d)) / weight
            logs = [l + shift * x for l, x in zip(logs, d)]
    return logs


def _random_log_unit(rng):
    import cmath

    return complex(0.2 * (rng.random() - 0.5), 2 * cmath.pi * rng.random())


def _sample_log_point(system: SpliceSystem, cell: CellLocation, rng):
    """Log-coordinates of a torus point of the initial degeneration at the cell."""
    diagram = system.diagram
    if cell.kind == "on_ray":
        logs = _sample_node_ray_logs(system, cell.label, rng)
        direction = [float(x) for x in diagram.node_weight_vector(cell.label)]
        return _center_logs(logs, [direction])
    a, b = cell.label
    point = {}
    if diagram.is_leaf(a) or diagram.is_leaf(b):
        leaf, node = (a, b) if diagram.is_leaf(a) else (b, a)
        point.update(
            _end_curve_logs(
                system, leaf, [l for l in diagram.leaves if l != leaf],
                diagram.nodes, rng,
            )
        )
        point[leaf] = _random_log_unit(rng)
    else:
        for near, far in ((a, b), (b, a)):
            side_nodes = [
                x for x in diagram.nodes if near in diagram.geodesic(x, far)
            ]
            side_leaves = [
                l for l in diagram.leaves if near in diagram.geodesic(l, far)
            ]
            point.update(
                _end_curve_logs(system, far, side_leaves, side_nodes, rng)
            )
    logs = [point[l] for l in diagram.leaves]
    ray_a = (
        [float(x) for x in diagram.node_weight_vector(a)]
        if diagram.is_node(a)
        else [float(l == a) for l in diagram.leaves]
    )
    ray_b = (
        [float(x) for x in diagram.node_weight_vector(b)]
        if diagram.is_node(b)
        else [float(l == b) for l in diagram.leaves]
    )
    return _center_logs(logs, [ray_a, ray_b])


def _end_curve_logs(system, root_vertex, side_leaves, side_nodes, rng):
    """Logs of a torus point on the end-curve toward ``root_vertex``."""
    diagram = system.diagram
    if diagram.is_leaf(root_vertex):
        links = {l: diagram.linking_number(root_vertex, l) for l in side_leaves}
    else:
        links = {l: diagram.reduced_linking(root_vertex, l) for l in side_leaves}
    g = gcd_list(links.values())
    index = {l: i for i, l in enumerate(side_leaves)}
    coeffs = _component_choice(system, root_vertex, side_leaves, side_nodes, rng)
    log_t = _random_log_unit(rng)
    return {
        l: _log_of(coeffs[index[l]]) + (links[l] // g) * log_t for l in side_leaves
    }


def _component_choice(system, root_vertex, side_leaves, side_nodes, rng):
    diagram = system.diagram
    index = {l: i for i, l in enumerate(side_leaves)}
    rows, consts = [], []
    for v in side_nodes:
        block = system.blocks[v]
        drop = block.star.index(diagram.first_step(v, root_vertex))
        for rel in node_binomials(system, v, drop):
            row = [0] * len(side_leaves)
            for l, i in index.items():
                p = diagram.leaf_index(l)
                row[i] = rel.lhs[p] - rel.rhs[p]
            rows.append(row)
            consts.append(rel.const)
    solutions, _ = solve_binomial_torus(rows, consts, len(side_leaves))
    return solutions[rng.randrange(len(solutions))]


def _sample_node_ray_logs(system, node, rng):
    """Glue branch end-curves through the Pham-Brieskorn-Hamm kernel at the node."""
    diagram = system.diagram
    block = system.blocks[node]
    branch_data = {}
    for u in block.star:
        if diagram.is_node(u):
            side_nodes = [
                x for x in diagram.nodes if u in diagram.geodesic(x, node)
            ]
            side_leaves = diagram.leaves_beyond(node, u)
            links = {l: diagram.reduced_linking(node, l) for l in side_leaves}
            g = gcd_list(links.values())
            index = {l: i for i, l in enumerate(side_leaves)}
            coeffs = _component_choice(system, node, side_leaves, side_nodes, rng)
            branch_data[u] = (side_leaves, index, coeffs, g, links)

    # the node's own equations are linear in y_e = z^(admissible exponent);
    # pick a random kernel vector of the transposed coefficient matrix
    count = len(block.star)
    k = block.matrix.n_equations
    for _ in range(40):
        y = _random_kernel_vector(block.matrix.rows, count, k, rng)
        if y is not None and all(abs(c) > 1e-12 for c in y):
            break
    else:
        raise NoTorusPoint(f"no torus kernel vector at node {node!r}")

    point = {}
    for j, u in enumerate(block.star):
        exponent = block.exponents[j]
        if diagram.is_leaf(u):
            point[u] = _log_of(y[j]) / diagram.weight(node, u)
        else:
            side_leaves, index, coeffs, g, links = branch_data[u]
            log_gamma = complex(0)
            for l in side_leaves:
                e = exponent[diagram.leaf_index(l)]
                if e:
                    log_gamma += e * _log_of(coeffs[index[l]])
            n_e = diagram.weight(node, u) // g
            log_t = (_log_of(y[j]) - log_gamma) / n_e
            for l in side_leaves:
                point[l] = _log_of(coeffs[index[l]]) + (links[l] // g) * log_t
    return [point[l] for l in diagram.leaves]


def _random_kernel_vector(rows, count, k, rng):
    """Random element of {y : sum_e y_e * rows[e][i] = 0 for all i}."""
    from .exact import rref

    mat = [[rows[e][i] for e in range(count)] for i in range(k)]
    reduced, pivots = rref(mat)
    free = [c for c in range(count) if c not in pivots]
    y = [Fraction(0)] * count
    for c in free:
        y[c] = Fraction(rng.randint(-9, 9))
    if all(v == 0 for v in y):
        return None
    for row, p in zip(reduced, pivots):
        y[p] = -sum(row[c] * y[c] for c in free)
    return [complex(v) for v in y]
