"""Ideal handles and the classical ideal-theoretic constructions.

An Ideal is an immutable list of generators plus a cache of reduced
Groebner bases keyed by monomial order.  Because reduced bases are
unique, two ideals are equal iff their canonical (grevlex) bases match
term for term, and all the derived operations (elimination, saturation
via the 1 - y*f trick, intersection via y*I + (1-y)*J, radical
membership in the Rabinowitsch form) bottom out in basis computations
over temporarily extended rings.

Syzygies of a row of polynomials come from a small module-level
Buchberger run over R^(1+s): each f_i is paired with a positional tag
e_i, the function slot dominates the tags, and the basis elements with
zero function slot are exactly a generating set of the syzygy module.
"""

from __future__ import annotations

from .groebner import groebner_basis, normal_form
from .poly import (Polynomial, transport, variable_saturate_poly,
                   weighted_degrees)
from .rings import GREVLEX, MonomialOrder


class Ideal:
    """An ideal of a blocked polynomial ring, given by generators."""

    def __init__(self, ring, gens):
        self.ring = ring
        clean = []
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator %s lives in %r, not %r"
                                 % (g, g.ring, ring))
            if not g.is_zero():
                clean.append(g)
        self.gens = tuple(clean)
        self._gb = {}

    @classmethod
    def with_known_basis(cls, ring, basis, order=None):
        """Wrap a list already known to be a reduced Groebner basis."""
        ideal = cls(ring, basis)
        order = order or GREVLEX
        ideal._gb[order.signature()] = tuple(basis)
        return ideal

    def groebner_basis(self, order=None, step_limit=None):
        order = order or GREVLEX
        sig = order.signature()
        cached = self._gb.get(sig)
        if cached is None:
            cached = tuple(groebner_basis(list(self.gens), order=order,
                                          ring=self.ring,
                                          step_limit=step_limit))
            self._gb[sig] = cached
        return list(cached)

    def any_groebner_basis(self):
        """Some cached basis, or the canonical one; any order serves
        when only the ideal membership structure matters."""
        if self._gb:
            return list(next(iter(self._gb.values())))
        return self.groebner_basis()

    def generating_set(self):
        """A cached reduced basis when available, else the generators.

        For operations that only need some generating set (images under
        ring maps, most prominently) this avoids forcing a basis
        computation on ideals that never needed one.
        """
        if self._gb:
            return list(next(iter(self._gb.values())))
        return list(self.gens)

    def normal_form(self, poly, order=None):
        if poly.ring != self.ring:
            raise ValueError("polynomial ring mismatch")
        basis = self.groebner_basis(order)
        if not basis:
            return poly
        return normal_form(poly, basis, order=order)

    def contains(self, poly):
        return self.normal_form(poly).is_zero()

    def __contains__(self, poly):
        return self.contains(poly)

    def is_zero_ideal(self):
        return not self.gens

    def is_unit_ideal(self):
        basis = self.groebner_basis()
        return len(basis) == 1 and basis[0].is_constant()

    def equals(self, other):
        if not isinstance(other, Ideal) or other.ring != self.ring:
            raise ValueError("can only compare ideals of the same ring")
        return self.groebner_basis() == other.groebner_basis()

    def __repr__(self):
        shown = ", ".join(str(g) for g in self.gens[:4])
        if len(self.gens) > 4:
            shown += ", ... (%d gens)" % len(self.gens)
        return "Ideal(%s)" % shown


def ideal(gens, ring=None):
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("an empty ideal needs an explicit ring")
        ring = gens[0].ring
    return Ideal(ring, gens)


def _fresh_aux(ring):
    k = 0
    while ("y%d" % k) in ring.index or ("aux%d" % k) in ring._spans:
        k += 1
    return "aux%d" % k, "y%d" % k


def _monomial_support(poly):
    """Variable names of a single-term polynomial, or None."""
    if len(poly.terms) != 1:
        return None
    (exps, _), = poly.terms.items()
    return [v for v, e in zip(poly.ring.variables, exps) if e]


def eliminate(I, blocks):
    """The ideal of relations among the retained variables.

    Returns an Ideal over the ring restricted to the remaining blocks;
    its canonical basis is prefilled from the elimination basis.
    """
    ring = I.ring
    blocks = tuple(blocks)
    rest = tuple(n for n in ring.block_names() if n not in blocks)
    if len(rest) + len(blocks) != len(ring.block_names()):
        raise KeyError("unknown block among %r" % (blocks,))
    if not rest:
        raise ValueError("cannot eliminate every block")
    order = MonomialOrder.elimination(ring, blocks)
    basis = I.groebner_basis(order)
    dropped = set()
    for name in blocks:
        start, stop = ring.block_span(name)
        dropped.update(range(start, stop))
    target = ring.restricted(rest)
    kept = []
    for g in basis:
        if all(all(e[i] == 0 for i in dropped) for e in g.terms):
            kept.append(transport(g, target))
    return Ideal.with_known_basis(target, kept)


def saturate(I, f):
    """The saturation I : f^infinity."""
    ring = I.ring
    if f.ring != ring:
        raise ValueError("saturating by a polynomial of another ring")
    if f.is_zero():
        raise ValueError("saturation by zero")
    if I.is_zero_ideal():
        return I
    support = _monomial_support(f)
    if support is not None and len(I.gens) == 1:
        # Principal ideal, monomial f: divide out variable by variable.
        g = I.gens[0]
        for v in support:
            i = ring.index[v]
            m = min(e[i] for e in g.terms)
            if m:
                g = Polynomial(ring, {e[:i] + (e[i] - m,) + e[i + 1:]: c
                                      for e, c in g.terms.items()})
        return Ideal(ring, [g.monic()])
    block, var = _fresh_aux(ring)
    ext = ring.extended([(block, (var,))])
    up = [transport(g, ext) for g in I.gens]
    trick = ext.one() - ext.gen(var) * transport(f, ext)
    order = MonomialOrder.elimination(ext, [block])
    cached = I._gb.get(GREVLEX.signature())
    if cached is not None:
        seed = [transport(g, ext) for g in cached]
        basis = groebner_basis([trick], order=order, ring=ext,
                               seed_basis=seed)
    else:
        basis = groebner_basis(up + [trick], order=order, ring=ext)
    start, stop = ext.block_span(block)
    kept = [transport(g, ring) for g in basis
            if all(e[start] == 0 for e in g.terms)]
    return Ideal.with_known_basis(ring, kept)


def intersect(I, J):
    """The intersection of two ideals of the same ring."""
    ring = I.ring
    if J.ring != ring:
        raise ValueError("intersecting ideals of different rings")
    if I.is_zero_ideal() or J.is_zero_ideal():
        return Ideal(ring, [])
    block, var = _fresh_aux(ring)
    ext = ring.extended([(block, (var,))])
    y = ext.gen(var)
    gens = [y * transport(g, ext) for g in I.gens]
    gens += [(ext.one() - y) * transport(g, ext) for g in J.gens]
    order = MonomialOrder.elimination(ext, [block])
    basis = groebner_basis(gens, order=order, ring=ext)
    start, _ = ext.block_span(block)
    kept = [transport(g, ring) for g in basis
            if all(e[start] == 0 for e in g.terms)]
    return Ideal.with_known_basis(ring, kept)


def radical_membership(f, I):
    """Whether f lies in the radical of I (Rabinowitsch trick)."""
    ring = I.ring
    if f.ring != ring:
        raise ValueError("testing a polynomial of another ring")
    block, var = _fresh_aux(ring)
    ext = ring.extended([(block, (var,))])
    trick = ext.one() - ext.gen(var) * transport(f, ext)
    cached = I._gb.get(GREVLEX.signature())
    if cached is not None:
        seed = [transport(g, ext) for g in cached]
        basis = groebner_basis([trick], ring=ext, seed_basis=seed)
    else:
        up = [transport(g, ext) for g in I.gens]
        basis = groebner_basis(up + [trick], ring=ext)
    return len(basis) == 1 and basis[0].is_constant()


def saturate_by_variable(I, var, weights=None):
    """Saturate an ideal by a single variable.

    When ``weights`` (zero allowed, but not on ``var``) make every
    generator isobaric, a basis under the weighted order with ``var``
    ranked last has the property that the var-power dividing a lead term
    divides the whole element, so stripping those powers from the basis
    elements already yields a basis of the saturation.  Otherwise fall
    back to the generic construction.
    """
    ring = I.ring
    if var not in ring.index:
        raise ValueError("ring %r has no variable %r" % (ring, var))
    if len(I.gens) == 1:
        g = variable_saturate_poly(I.gens[0], var).monic()
        return Ideal.with_known_basis(ring, [g])
    if weights is not None and weights.get(var, 1) > 0:
        order = MonomialOrder.weighted_grevlex(weights, last=(var,))
        if all(len(weighted_degrees(g, weights)) <= 1
               for g in I.gens if not g.is_zero()):
            basis = groebner_basis(list(I.gens), order=order, ring=ring)
            divided = [variable_saturate_poly(g, var) for g in basis]
            tidy = groebner_basis([], order=order, ring=ring,
                                  seed_basis=divided)
            return Ideal.with_known_basis(ring, tidy, order=order)
    return saturate(I, ring.gen(var))


def saturate_by_t(I, weights=None):
    """Saturate an ideal by the uniformizer t."""
    if I.ring.t_index is None:
        raise ValueError("ring %r has no t variable" % (I.ring,))
    return saturate_by_variable(I, "t", weights=weights)


# ---------------------------------------------------------------------------
# module Groebner bases and syzygies


def _module_key(gkey):
    def key(pm):
        pos, exps = pm
        if pos == 0:
            return (1, 0, gkey(exps))
        return (0, -pos, gkey(exps))
    return key


def _vec_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _mono_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class _ModuleElement:
    __slots__ = ("terms", "lead")

    def __init__(self, terms, key):
        self.terms = terms
        self.lead = max(terms, key=key) if terms else None


def _module_normalize(terms, field, key):
    if not terms:
        return None
    lead = max(terms, key=key)
    lc = terms[lead]
    if lc != field.one:
        inv = field.inv(lc)
        terms = {m: field.mul(c, inv) for m, c in terms.items()}
    return _ModuleElement(terms, key)


def _module_reduce(terms, basis, field, key):
    """Full normal form of a module element against monic elements."""
    work = dict(terms)
    rem = {}
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        if c == field.zero:
            continue
        pos, exps = m
        reducer = None
        for e in basis:
            lp, le = e.lead
            if lp == pos and _vec_divides(le, exps):
                reducer = e
                break
        if reducer is None:
            rem[m] = c
            continue
        shift = _mono_sub(exps, reducer.lead[1])
        for (bp, be), bc in reducer.terms.items():
            if (bp, be) == reducer.lead:
                continue
            nm = (bp, _mono_mul(be, shift))
            v = field.sub(work.get(nm, field.zero), field.mul(c, bc))
            if v == field.zero:
                work.pop(nm, None)
            else:
                work[nm] = v
    return rem


def _module_groebner(vectors, field, key):
    """Reduced module Groebner basis (no pair criteria, small inputs)."""
    G = []
    queue = list(vectors)
    pairs = []

    def add(element):
        idx = len(G)
        G.append(element)
        for i, other in enumerate(G[:idx]):
            if other.lead[0] == element.lead[0]:
                lcm = _mono_lcm(other.lead[1], element.lead[1])
                pairs.append((key((element.lead[0], lcm)), i, idx))

    for terms in queue:
        rem = _module_reduce(terms, G, field, key)
        element = _module_normalize(rem, field, key)
        if element is not None:
            add(element)
    while pairs:
        pairs.sort()
        _, i, j = pairs.pop(0)
        a, b = G[i], G[j]
        pos = a.lead[0]
        lcm = _mono_lcm(a.lead[1], b.lead[1])
        sa = _mono_sub(lcm, a.lead[1])
        sb = _mono_sub(lcm, b.lead[1])
        terms = {}
        for (p, e), c in a.terms.items():
            terms[(p, _mono_mul(e, sa))] = c
        for (p, e), c in b.terms.items():
            nm = (p, _mono_mul(e, sb))
            v = field.sub(terms.get(nm, field.zero), c)
            if v == field.zero:
                terms.pop(nm, None)
            else:
                terms[nm] = v
        rem = _module_reduce(terms, G, field, key)
        element = _module_normalize(rem, field, key)
        if element is not None:
            add(element)
    # Minimalize and tail-reduce.
    minimal = []
    for e in sorted(G, key=lambda e: key(e.lead)):
        lp, le = e.lead
        if not any(m.lead[0] == lp and _vec_divides(m.lead[1], le)
                   for m in minimal):
            minimal.append(e)
    out = []
    for i, e in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        tail = {m: c for m, c in e.terms.items() if m != e.lead}
        rem = _module_reduce(tail, others, field, key)
        rem[e.lead] = field.one
        out.append(_ModuleElement(rem, key))
    out.sort(key=lambda e: key(e.lead))
    return out


def syzygies(row, order=None):
    """Generators of the syzygy module of a row of polynomials.

    Returns a list of rows (s_1, ..., s_k) of polynomials with
    sum s_j * row_j = 0, generating all such relations.
    """
    row = list(row)
    if not row:
        return []
    ring = row[0].ring
    for f in row:
        if f.ring != ring:
            raise ValueError("syzygy row must live in one ring")
    field = ring.field
    gkey = ring.sort_key(order)
    key = _module_key(gkey)
    s = len(row)
    zero_exps = ring.zero_exps
    vectors = []
    trivial = []
    for i, f in enumerate(row):
        if f.is_zero():
            # f_i = 0 contributes the unit syzygy e_i directly.
            trivial.append(i)
            continue
        terms = {(0, e): c for e, c in f.terms.items()}
        terms[(i + 1, zero_exps)] = field.one
        vectors.append(terms)
    basis = _module_groebner(vectors, field, key)
    out = []
    for e in basis:
        if e.lead[0] == 0:
            continue
        vec = [ring.zero() for _ in range(s)]
        for (pos, exps), c in e.terms.items():
            if pos == 0:
                raise AssertionError("mixed syzygy element")
            vec[pos - 1] = vec[pos - 1] + ring.monomial(exps, c)
        out.append(vec)
    for i in trivial:
        vec = [ring.zero() for _ in range(s)]
        vec[i] = ring.one()
        out.append(vec)
    return out
