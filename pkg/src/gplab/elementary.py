"""Elementary operators (creation word) x (clique diagonal) x (annihilation
word)*, their signatures, and the rewriting of generator products into sums
of elementary terms.

The rewriting rules are exactly the product identities of the creation,
diagonal, and annihilation operators; every rewrite comes with a numerical
certificate (term matrices summing to the input's matrix on the guarded
subspace), which the test suite exercises heavily.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .algebras import Element
from .errors import ResourceLimitError
from .fock import (
    OperatorMatrix,
    TruncatedFock,
    creation,
    diagonal,
    identity_op,
    lambda_op,
    q_projection,
)
from .graphs import VertexId
from .system import GraphSystem
from .words import Letters, NormalForm

EXPRESSION_LENGTH_CAP = 12
TERM_COUNT_CAP = 4096

ZERO_TOL = 1e-14

Entry = tuple[VertexId, Element]


@dataclass(frozen=True)
class ElementaryTerm:
    """(a_1^+ ... a_k^+) d (b_1^+ ... b_l^+)* with reduced index words.

    Creation and annihilation entries carry centered elements; the diagonal
    part is a product of vertex diagonals over a clique with distinct
    vertices, stored sorted by vertex.
    """

    creation: tuple[Entry, ...]
    diag: tuple[Entry, ...]
    annihilation: tuple[Entry, ...]

    def creation_word(self) -> Letters:
        return tuple(v for v, _ in self.creation)

    def annihilation_word(self) -> Letters:
        return tuple(v for v, _ in self.annihilation)

    def total_length(self) -> int:
        return len(self.creation) + len(self.diag) + len(self.annihilation)


IDENTITY_TERM = ElementaryTerm((), (), ())

Terms = list[tuple[complex, ElementaryTerm]]


@dataclass(frozen=True)
class Factor:
    """One generator in an expression: kind in {'elem', 'create', 'diag',
    'annih', 'qproj', 'scalar'}.  'annih' with element a denotes (a^+)*."""

    kind: str
    vertex: Optional[VertexId] = None
    element: Optional[Element] = None
    value: complex = 1.0


def signature(term: ElementaryTerm, sys: GraphSystem) -> NormalForm:
    """The group element (u_1...u_k)(v_1...v_l)^{-1} attached to the term."""
    g = sys.group
    create = term.creation_word()
    annih = term.annihilation_word()
    for w in (create, annih):
        if len(g.reduce_tuple(w)) != len(w):
            raise ValueError(f"index word {w} is not reduced")
    return NormalForm(g.mul_tuple(create, g.inv_tuple(annih)), g)


def _canon_entries(sys: GraphSystem, entries: Sequence[Entry]) -> tuple[Entry, ...]:
    letters = tuple(v for v, _ in entries)
    _, perm = sys.group.sort_with_perm(letters)
    return tuple(entries[p] for p in perm)


def _mul_create(sys: GraphSystem, v: VertexId, c: Element, coeff: complex, t: ElementaryTerm) -> Terms:
    if c.is_zero(ZERO_TOL):
        return []
    word = t.creation_word()
    if v in sys.group.first_letters_tuple(word):
        return []  # commutes up to a same-vertex creation pair, which vanishes
    new = _canon_entries(sys, ((v, c),) + t.creation)
    return [(coeff, ElementaryTerm(new, t.diag, t.annihilation))]


def _mul_diag(sys: GraphSystem, v: VertexId, c: Element, coeff: complex, t: ElementaryTerm) -> Terms:
    if c.is_zero(ZERO_TOL):
        return []
    for i, (u, a) in enumerate(t.creation):
        if u == v:
            merged = sys.centered(v, c @ a)
            if merged.is_zero(ZERO_TOL):
                return []
            new = t.creation[:i] + ((v, merged),) + t.creation[i + 1:]
            return [(coeff, ElementaryTerm(new, t.diag, t.annihilation))]
        if not sys.adjacent(v, u):
            return []
    for j, (w, cj) in enumerate(t.diag):
        if w == v:
            # d(c) d(cj) = d(c cj) - c^+ ((cj*)^+)* at the same vertex
            out: Terms = [
                (
                    coeff,
                    ElementaryTerm(
                        t.creation,
                        t.diag[:j] + ((v, c @ cj),) + t.diag[j + 1:],
                        t.annihilation,
                    ),
                )
            ]
            base = ElementaryTerm((), t.diag[j + 1:], t.annihilation)
            pieces = _mul_annih(sys, v, sys.centered(v, cj.star()), -coeff, base)
            pieces = _chain_create(sys, v, sys.centered(v, c), pieces)
            for w2, c2 in reversed(t.diag[:j]):
                pieces = _chain_diag(sys, w2, c2, pieces)
            for u2, a2 in reversed(t.creation):
                pieces = _chain_create(sys, u2, a2, pieces)
            return out + pieces
        if not sys.adjacent(v, w):
            return []
    new_diag = tuple(sorted(t.diag + ((v, c),), key=lambda e: e[0]))
    return [(coeff, ElementaryTerm(t.creation, new_diag, t.annihilation))]


def _mul_annih(sys: GraphSystem, v: VertexId, c: Element, coeff: complex, t: ElementaryTerm) -> Terms:
    if c.is_zero(ZERO_TOL):
        return []
    for i, (u, a) in enumerate(t.creation):
        if u == v:
            s = sys.omega(v, c.star() @ a)
            if abs(s) <= ZERO_TOL:
                return []
            rest = ElementaryTerm(t.creation[:i] + t.creation[i + 1:], t.diag, t.annihilation)
            # (c^+)* a^+ = omega(c* a) Q_v^perp; expand Q_v^perp = 1 - d(1_v).
            one = sys.sites[v].algebra.one()
            return [(coeff * s, rest)] + _mul_diag(sys, v, one, -coeff * s, rest)
        if not sys.adjacent(v, u):
            return []
    cur = c
    new_diag: list[Entry] = []
    for w, cj in t.diag:
        if w == v:
            cur = sys.centered(v, cj.star() @ cur)
            if cur.is_zero(ZERO_TOL):
                return []
            continue
        if not sys.adjacent(v, w):
            return []
        new_diag.append((w, cj))
    word = t.annihilation_word()
    if v in sys.group.last_letters_tuple(word):
        return []  # same-vertex creation pair inside the star, vanishes
    new_annih = _canon_entries(sys, t.annihilation + ((v, cur),))
    return [(coeff, ElementaryTerm(t.creation, tuple(new_diag), new_annih))]


def _chain(fn, sys, v, c, terms: Terms) -> Terms:
    out: Terms = []
    for coeff, t in terms:
        out.extend(fn(sys, v, c, coeff, t))
    return out


def _chain_create(sys, v, c, terms: Terms) -> Terms:
    return _chain(_mul_create, sys, v, c, terms)


def _chain_diag(sys, v, c, terms: Terms) -> Terms:
    return _chain(_mul_diag, sys, v, c, terms)


def _chain_annih(sys, v, c, terms: Terms) -> Terms:
    return _chain(_mul_annih, sys, v, c, terms)


def _mul_factor(sys: GraphSystem, f: Factor, terms: Terms) -> Terms:
    if f.kind == "scalar":
        return [(coeff * f.value, t) for coeff, t in terms]
    v = f.vertex
    if v not in sys.sites:
        raise ValueError(f"unknown vertex {v}")
    if f.kind == "create":
        return _chain_create(sys, v, sys.centered(v, f.element), terms)
    if f.kind == "diag":
        return _chain_diag(sys, v, f.element, terms)
    if f.kind == "annih":
        return _chain_annih(sys, v, sys.centered(v, f.element), terms)
    if f.kind == "qproj":
        return _chain_diag(sys, v, sys.sites[v].algebra.one(), terms)
    if f.kind == "elem":
        a = f.element
        w0 = sys.omega(v, a)
        a0 = sys.centered(v, a)
        out: Terms = []
        out.extend(_chain_diag(sys, v, a, terms))
        out.extend(_chain_create(sys, v, a0, terms))
        out.extend(_chain_annih(sys, v, a0.star(), terms))
        if abs(w0) > ZERO_TOL:
            one = sys.sites[v].algebra.one()
            for coeff, t in terms:
                out.append((coeff * w0, t))
                out.extend(_mul_diag(sys, v, one, -coeff * w0, t))
        return out
    raise ValueError(f"unknown factor kind {f.kind!r}")


def _coalesce(terms: Terms) -> Terms:
    buckets: dict[bytes, tuple[complex, ElementaryTerm]] = {}
    for coeff, t in terms:
        key_parts = []
        for group in (t.creation, t.diag, t.annihilation):
            for v, e in group:
                key_parts.append(str(v).encode())
                for m in e.mats:
                    key_parts.append(m.tobytes())
            key_parts.append(b"|")
        key = b";".join(key_parts)
        if key in buckets:
            c0, t0 = buckets[key]
            buckets[key] = (c0 + coeff, t0)
        else:
            buckets[key] = (coeff, t)
    return [(c, t) for c, t in buckets.values() if abs(c) > ZERO_TOL]


def rewrite_to_elementary(
    factors: Sequence[Factor],
    sys: GraphSystem,
    length_cap: int = EXPRESSION_LENGTH_CAP,
    term_cap: int = TERM_COUNT_CAP,
) -> Terms:
    """Expand a product of generators into elementary terms.

    The returned list of (coefficient, term) pairs sums, as a matrix on the
    guarded subspace of any truncation, to the matrix of the input product;
    see expression_matrix and term_matrix for the certificate.
    """
    if len(factors) > length_cap:
        raise ResourceLimitError(f"expression length {len(factors)} exceeds cap {length_cap}")
    terms: Terms = [(1.0 + 0j, IDENTITY_TERM)]
    for f in reversed(factors):
        terms = _coalesce(_mul_factor(sys, f, terms))
        if len(terms) > term_cap:
            raise ResourceLimitError(f"term count {len(terms)} exceeds cap {term_cap}")
    return terms


def parse_expression(
    serialized: Sequence, sys: GraphSystem, name_to_id, elements
) -> list[Factor]:
    """Decode the prefix serialization of a generator expression.

    Each factor is ["kind", vertex_name, element_name] for kinds elem,
    create, diag, annih; ["qproj", vertex_name]; or ["scalar", re, im].
    Element names resolve through `elements[vertex_id][name]`.
    """
    out: list[Factor] = []
    for k, item in enumerate(serialized):
        if not isinstance(item, (list, tuple)) or not item:
            raise ValueError(f"factor {k}: expected a nonempty list")
        kind = item[0]
        if kind == "scalar":
            out.append(Factor("scalar", value=complex(float(item[1]), float(item[2]))))
            continue
        if kind not in ("elem", "create", "diag", "annih", "qproj"):
            raise ValueError(f"factor {k}: unknown kind {kind!r}")
        v = name_to_id.get(item[1])
        if v is None:
            raise ValueError(f"factor {k}: unknown vertex {item[1]!r}")
        if kind == "qproj":
            out.append(Factor("qproj", v))
            continue
        table = elements.get(v, {})
        name = item[2]
        if name not in table:
            raise ValueError(f"factor {k}: vertex {item[1]!r} has no element named {name!r}")
        out.append(Factor(kind, v, table[name]))
    return out


def standard_elements(sys: GraphSystem) -> dict:
    """Per-vertex named elements for serialized expressions: the unit, and
    the distinguished generator of two-dimensional vertices when present."""
    from .algebras import hecke_vertex

    out: dict = {}
    for v, site in sys.sites.items():
        table = {"1": site.algebra.one()}
        if site.hecke_q is not None:
            table["T"] = hecke_vertex(site.hecke_q)[2]
        out[v] = table
    return out


def factor_matrix(f: Factor, space: TruncatedFock) -> OperatorMatrix:
    if f.kind == "scalar":
        return f.value * identity_op(space)
    if f.kind == "elem":
        return lambda_op(space, f.vertex, f.element)
    if f.kind == "create":
        return creation(space, f.vertex, f.element)
    if f.kind == "diag":
        return diagonal(space, f.vertex, f.element)
    if f.kind == "annih":
        return creation(space, f.vertex, f.element).adjoint()
    if f.kind == "qproj":
        return q_projection(space, (f.vertex,))
    raise ValueError(f"unknown factor kind {f.kind!r}")


def expression_matrix(factors: Sequence[Factor], space: TruncatedFock) -> OperatorMatrix:
    out = identity_op(space)
    for f in factors:
        out = out @ factor_matrix(f, space)
    return out


def term_matrix(term: ElementaryTerm, space: TruncatedFock, coeff: complex = 1.0) -> OperatorMatrix:
    out = coeff * identity_op(space)
    for v, a in term.creation:
        out = out @ creation(space, v, a)
    for v, c in term.diag:
        out = out @ diagonal(space, v, c)
    for v, b in reversed(term.annihilation):
        out = out @ creation(space, v, b).adjoint()
    return out


def terms_matrix(terms: Terms, space: TruncatedFock) -> OperatorMatrix:
    out = None
    for coeff, t in terms:
        m = term_matrix(t, space, coeff)
        out = m if out is None else out + m
    if out is None:
        from .fock import zero_op

        return zero_op(space)
    return out
