"""JSON document schemas: diagrams, systems, fans, reports.

Weights, exponents and multiplicities travel as JSON integers; every
rational is a "p/q" or integer string so nothing depends on floating JSON
number ranges.  Parsing is strict: unknown keys are rejected.
"""

from __future__ import annotations

from fractions import Fraction

from .diagram import SpliceDiagram
from .errors import DocumentError
from .fan import Certificate, CellLocation, SpliceFan
from .recover import FanInput
from .system import CoefficientMatrix, Polynomial, SpliceSystem, build_system


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(value) -> Fraction:
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"bad rational {value!r}") from exc
    raise DocumentError(f"bad rational {value!r}")


def format_complex(z) -> list:
    if isinstance(z, (Fraction, int)):
        return [format_rational(z), "0"]
    return [repr(z.real), repr(z.imag)]


def _require_keys(doc, required, optional=(), what="document"):
    if not isinstance(doc, dict):
        raise DocumentError(f"{what} must be an object")
    keys = set(doc)
    missing = set(required) - keys
    unknown = keys - set(required) - set(optional)
    if missing:
        raise DocumentError(f"{what} misses keys {sorted(missing)}")
    if unknown:
        raise DocumentError(f"{what} has unknown keys {sorted(unknown)}")


# ---------------------------------------------------------------------------
# Diagram documents
# ---------------------------------------------------------------------------

def diagram_to_doc(diagram: SpliceDiagram) -> dict:
    edges = []
    for a, b in diagram.edges():
        entry = {"a": a, "b": b}
        if diagram.is_node(a):
            entry["wa"] = diagram.weight(a, b)
        if diagram.is_node(b):
            entry["wb"] = diagram.weight(b, a)
        edges.append(entry)
    return {
        "leaves": list(diagram.leaves),
        "nodes": list(diagram.nodes),
        "edges": edges,
    }


def _parse_weight(value, where):
    if isinstance(value, str):
        if not value.lstrip("-").isdigit():
            raise DocumentError(f"bad weight {value!r} in {where}")
        value = int(value)
    if not isinstance(value, int) or isinstance(value, bool):
        raise DocumentError(f"bad weight {value!r} in {where}")
    return value


def diagram_from_doc(doc) -> SpliceDiagram:
    _require_keys(doc, ("leaves", "nodes", "edges"), what="diagram document")
    leaves, nodes = doc["leaves"], doc["nodes"]
    if not isinstance(leaves, list) or not isinstance(nodes, list):
        raise DocumentError("leaves and nodes must be arrays")
    if not all(isinstance(x, str) for x in leaves + nodes):
        raise DocumentError("vertex ids must be strings")
    node_set = set(nodes)
    edges = []
    for entry in doc["edges"]:
        _require_keys(entry, ("a", "b"), ("wa", "wb"), what="edge")
        a, b = entry["a"], entry["b"]
        wa = wb = None
        if a in node_set:
            if "wa" not in entry:
                raise DocumentError(f"edge ({a},{b}) misses 'wa' at node {a!r}")
            wa = _parse_weight(entry["wa"], f"edge ({a},{b})")
        elif "wa" in entry:
            raise DocumentError(f"edge ({a},{b}) carries 'wa' at leaf {a!r}")
        if b in node_set:
            if "wb" not in entry:
                raise DocumentError(f"edge ({a},{b}) misses 'wb' at node {b!r}")
            wb = _parse_weight(entry["wb"], f"edge ({a},{b})")
        elif "wb" in entry:
            raise DocumentError(f"edge ({a},{b}) carries 'wb' at leaf {b!r}")
        edges.append((a, b, wa, wb))
    return SpliceDiagram(leaves, nodes, edges)


# ---------------------------------------------------------------------------
# Polynomial and system documents
# ---------------------------------------------------------------------------

def polynomial_to_terms(poly: Polynomial) -> list:
    return [{"c": format_rational(c), "m": list(m)} for m, c in poly.terms]


def terms_to_polynomial(terms, n) -> Polynomial:
    out = []
    for entry in terms:
        _require_keys(entry, ("c", "m"), what="term")
        m = entry["m"]
        if not isinstance(m, list) or len(m) != n:
            raise DocumentError(f"exponent vector {m!r} has the wrong length")
        out.append((tuple(int(e) for e in m), parse_rational(entry["c"])))
    return Polynomial(out)


def system_to_doc(system: SpliceSystem) -> dict:
    return {
        "diagram": diagram_to_doc(system.diagram),
        "equations": [
            {
                "node": eq.node,
                "index": eq.index,
                "terms": polynomial_to_terms(eq.minimal),
                "tail": polynomial_to_terms(eq.tail),
            }
            for eq in system.equations
        ],
    }


def system_from_doc(doc) -> SpliceSystem:
    _require_keys(doc, ("diagram", "equations"), what="system document")
    diagram = diagram_from_doc(doc["diagram"])
    # rebuild through build_system so every invariant is re-checked; the
    # coefficient matrices are read back off the serialized minimal parts
    coeffs = {}
    tails = {}
    coweights = {}
    by_node = {}
    for entry in doc["equations"]:
        _require_keys(entry, ("node", "index", "terms"), ("tail",), what="equation")
        by_node.setdefault(entry["node"], []).append(entry)
    for v in diagram.nodes:
        entries = sorted(by_node.get(v, []), key=lambda e: e["index"])
        if [e["index"] for e in entries] != list(range(1, diagram.valency(v) - 1)):
            raise DocumentError(f"equation indices at {v!r} are not 1..valency-2")
        polys = [terms_to_polynomial(e["terms"], diagram.n) for e in entries]
        star = diagram.neighbors(v)
        exponents = _node_exponents_from_polys(diagram, v, star, polys)
        rows = []
        for m in exponents:
            row = []
            for poly in polys:
                coeff = dict(poly.terms).get(m, Fraction(0))
                row.append(coeff)
            rows.append(tuple(row))
        coeffs[v] = CoefficientMatrix(node=v, rows=tuple(rows))
        for u, m in zip(star, exponents):
            coweights[(v, u)] = {
                leaf: m[i] for i, leaf in enumerate(diagram.leaves) if m[i]
            }
        for e in entries:
            tail = terms_to_polynomial(e.get("tail", []), diagram.n)
            if tail:
                tails[(v, e["index"])] = tail
    return build_system(diagram, coeffs=coeffs, tails=tails, coweights=coweights)


def _node_exponents_from_polys(diagram, v, star, polys):
    """Match each incident edge to the admissible exponent used in the doc.

    An admissible exponent for (v, u) is supported on the leaves beyond the
    edge and pairs to the edge weight against the reduced linking numbers;
    beyond-sets of distinct edges are disjoint, so this is unambiguous.
    """
    support = set()
    for poly in polys:
        support.update(poly.support())
    exponents = []
    for u in star:
        beyond = {diagram.leaf_index(l) for l in diagram.leaves_beyond(v, u)}
        matches = [
            m for m in support
            if any(m)
            and all(e == 0 or i in beyond for i, e in enumerate(m))
            and sum(
                m[i] * diagram.reduced_linking(v, diagram.leaves[i]) for i in beyond
            )
            == diagram.weight(v, u)
        ]
        if len(matches) != 1:
            raise DocumentError(
                f"cannot identify the admissible monomial at ({v!r}, {u!r})"
            )
        exponents.append(matches[0])
    return exponents


# ---------------------------------------------------------------------------
# Fan documents
# ---------------------------------------------------------------------------

def fan_to_doc(fan: SpliceFan) -> dict:
    return {
        "n": fan.n,
        "rays": [
            {"label": r.label, "vector": list(r.vector)} for r in fan.rays
        ],
        "cones": [
            {"rays": list(c.rays), "multiplicity": c.multiplicity}
            for c in fan.cones
        ],
    }


def fan_input_from_doc(doc) -> FanInput:
    _require_keys(doc, ("n", "rays", "cones"), what="fan document")
    rays = {}
    for entry in doc["rays"]:
        _require_keys(entry, ("label", "vector"), what="ray")
        rays[entry["label"]] = tuple(int(x) for x in entry["vector"])
    cones = {}
    for entry in doc["cones"]:
        _require_keys(entry, ("rays", "multiplicity"), what="cone")
        pair = entry["rays"]
        if len(pair) != 2:
            raise DocumentError(f"cone {pair!r} must have two rays")
        cones[frozenset(pair)] = int(entry["multiplicity"])
    return FanInput(n=int(doc["n"]), rays=rays, cones=cones)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def cell_to_doc(cell: CellLocation) -> dict:
    out = {"kind": cell.kind}
    if cell.kind == "on_ray":
        out["ray"] = cell.label
        out["coeff"] = format_rational(cell.coeffs[0])
    elif cell.kind == "in_cone":
        out["cone"] = list(cell.label)
        out["coeffs"] = [format_rational(c) for c in cell.coeffs]
    return out


def certificate_to_doc(cert: Certificate) -> dict:
    return {
        "node": cert.node,
        "edge": list(cert.edge),
        "monomial": list(cert.monomial),
        "values": {k: format_rational(v) for k, v in cert.values.items()},
        "coefficients": [format_rational(c) for c in cert.coefficients],
        "truncated": list(cert.truncated),
    }


def endcurve_report(curve, binomials) -> dict:
    return {
        "root": curve.root,
        "exponents": list(curve.exponents),
        "g": curve.g,
        "binomials": [
            {
                "node": rel.node,
                "terms": polynomial_to_terms(rel.polynomial()),
            }
            for rel in binomials.relations
        ],
        "components": [
            {"coeffs": [format_complex(c) for c in comp]}
            for comp in curve.components
        ],
    }
