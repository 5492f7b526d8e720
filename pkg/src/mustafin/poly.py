"""Exact multivariate polynomials over a blocked ring.

A polynomial is a dict mapping exponent tuples (one slot per ring
variable) to nonzero field elements.  Canonical storage and display
order is grevlex on the ring's flattened variable list.  The text
format round-trips exactly: integer or a/b coefficients, ``*`` between
factors, ``^`` for powers, e.g. ``x1_2^2*x3_1 - 3/2*t*x2_2``.

Besides ring arithmetic this module provides the t-specific helpers
used everywhere downstream (t-valuation, dividing out t-powers,
reduction mod t), multidegrees over variable blocks, 2x2 minors, and a
small wrapper for Laurent-style objects t^v * P with possibly negative
v, kept normalized so P has t-valuation zero.
"""

from __future__ import annotations

import re

from .rings import GREVLEX, PolyRing


class Polynomial:
    """Immutable-by-convention sparse polynomial over a PolyRing."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- basic predicates ------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        if not self.terms:
            return True
        return len(self.terms) == 1 and self.ring.zero_exps in self.terms

    def constant_value(self):
        if not self.terms:
            return self.ring.field.zero
        value = self.terms.get(self.ring.zero_exps)
        if value is None or len(self.terms) != 1:
            raise ValueError("%s is not constant" % self)
        return value

    def total_degree(self):
        if not self.terms:
            raise ValueError("degree of the zero polynomial")
        return max(sum(e) for e in self.terms)

    def degree_in(self, var):
        i = self.ring.index[var]
        if not self.terms:
            raise ValueError("degree of the zero polynomial")
        return max(e[i] for e in self.terms)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("mixed rings: %r vs %r"
                                 % (self.ring, other.ring))
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        field = self.ring.field
        zero = field.zero
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            s = field.add(terms.get(exps, zero), c)
            if s == zero:
                terms.pop(exps, None)
            else:
                terms[exps] = s
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring,
                          {exps: neg(c) for exps, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        field = self.ring.field
        zero = field.zero
        mul, add = field.mul, field.add
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple(map(sum, zip(ea, eb)))
                s = add(terms.get(exps, zero), mul(ca, cb))
                if s == zero:
                    terms.pop(exps, None)
                else:
                    terms[exps] = s
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers take exponents in N")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base2 = base * base if n > 1 else base
            base, n = base2, n >> 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    __hash__ = None

    # -- ordered views ---------------------------------------------------

    def sorted_terms(self, order=None):
        """Terms as (exps, coeff) pairs, largest monomial first."""
        key = self.ring.sort_key(order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]),
                      reverse=True)

    def leading_term(self, order=None):
        if not self.terms:
            raise ValueError("leading term of the zero polynomial")
        key = self.ring.sort_key(order)
        exps = max(self.terms, key=key)
        return exps, self.terms[exps]

    def leading_monomial(self, order=None):
        return self.leading_term(order)[0]

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.ring.field.zero)

    def monic(self, order=None):
        if not self.terms:
            return self
        _, lc = self.leading_term(order)
        if lc == self.ring.field.one:
            return self
        inv = self.ring.field.inv(lc)
        mul = self.ring.field.mul
        return Polynomial(self.ring,
                          {e: mul(c, inv) for e, c in self.terms.items()})

    # -- calculus and maps -------------------------------------------------

    def derivative(self, var):
        i = self.ring.index[var]
        field = self.ring.field
        terms = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            scaled = field.mul(c, field.of(e))
            if scaled == field.zero:
                continue
            lowered = exps[:i] + (e - 1,) + exps[i + 1:]
            prev = terms.get(lowered)
            if prev is None:
                terms[lowered] = scaled
            else:
                s = field.add(prev, scaled)
                if s == field.zero:
                    del terms[lowered]
                else:
                    terms[lowered] = s
        return Polynomial(self.ring, terms)

    def substitute(self, assignment, total=False, ring=None):
        return substitute(self, assignment, total=total, ring=ring)

    # -- text ------------------------------------------------------------

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return "<poly %s>" % format_polynomial(self)


# ---------------------------------------------------------------------------
# text format


_TOKEN = re.compile(r"\s*(\d+/\d+|\d+|[A-Za-z_][A-Za-z_0-9]*|\^|\*|\+|-|\(|\))")


def _tokenize(text):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ValueError("bad character %r in %r" % (text[pos], text))
        tokens.append(m.group(1))
        pos = m.end()
    if text[pos:].strip():
        raise ValueError("trailing junk in %r" % text)
    return tokens


class _Parser:
    def __init__(self, ring, tokens):
        self.ring = ring
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of input")
        self.pos += 1
        return tok

    def expression(self):
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        result = self.term()
        if sign < 0:
            result = -result
        while self.peek() in ("+", "-"):
            sign = 1
            while self.peek() in ("+", "-"):
                if self.take() == "-":
                    sign = -sign
            t = self.term()
            result = result + (-t if sign < 0 else t)
        return result

    def term(self):
        result = self.factor()
        while self.peek() == "*":
            self.take()
            result = result * self.factor()
        return result

    def factor(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise ValueError("exponent must be a natural number, got %r"
                                 % tok)
            return base ** int(tok)
        return base

    def atom(self):
        tok = self.take()
        if tok == "(":
            inner = self.expression()
            if self.take() != ")":
                raise ValueError("unbalanced parenthesis")
            return inner
        if tok == "-":
            return -self.factor()
        if tok[0].isdigit():
            return self.ring.constant(tok)
        if tok in self.ring.index:
            return self.ring.gen(tok)
        raise ValueError("unknown variable %r in %r" % (tok, self.ring))


def parse_polynomial(ring, text):
    tokens = _tokenize(text)
    if not tokens:
        raise ValueError("empty polynomial text")
    parser = _Parser(ring, tokens)
    result = parser.expression()
    if parser.peek() is not None:
        raise ValueError("trailing tokens %r" % (tokens[parser.pos:],))
    return result


def _format_coefficient(field, c):
    return field.to_str(c)


def _monomial_str(ring, exps):
    factors = []
    for v, e in zip(ring.variables, exps):
        if e == 1:
            factors.append(v)
        elif e > 1:
            factors.append("%s^%d" % (v, e))
    return "*".join(factors)


def format_polynomial(poly, order=None):
    if not poly.terms:
        return "0"
    ring = poly.ring
    field = ring.field
    pieces = []
    for exps, c in poly.sorted_terms(order):
        if field.char == 0:
            negative = c < 0
            mag = -c if negative else c
        else:
            negative, mag = False, c
        mono = _monomial_str(ring, exps)
        if not mono:
            body = _format_coefficient(field, mag)
        elif mag == field.one:
            body = mono
        else:
            body = "%s*%s" % (_format_coefficient(field, mag), mono)
        if not pieces:
            pieces.append("-" + body if negative else body)
        else:
            pieces.append(("- " if negative else "+ ") + body)
    return " ".join(pieces)


# ---------------------------------------------------------------------------
# substitution


def _resolve_target(poly, assignment, ring):
    if ring is not None:
        return ring
    for value in assignment.values():
        if isinstance(value, Polynomial):
            return value.ring
    return poly.ring


def substitute(poly, assignment, total=False, ring=None):
    """Evaluate poly at the given variable assignment.

    assignment maps variable names to polynomials (all in one target
    ring) or to bare scalars.  Variables absent from the assignment map
    to the same-named variable of the target ring; if the assignment is
    declared total, any unassigned variable occurring in poly is an
    error.
    """
    target = _resolve_target(poly, assignment, ring)
    values = {}
    for name, value in assignment.items():
        if name not in poly.ring.index:
            raise KeyError("no variable %r in %r" % (name, poly.ring))
        if isinstance(value, Polynomial):
            if value.ring != target:
                raise ValueError("assignment value for %r lives in %r, "
                                 "expected %r" % (name, value.ring, target))
            values[name] = value
        else:
            values[name] = target.constant(value)
    field = target.field
    power_cache = {}

    def power(name, e):
        cached = power_cache.get((name, e))
        if cached is None:
            base = values.get(name)
            if base is None:
                if total:
                    raise ValueError("variable %r unassigned in a total "
                                     "substitution" % name)
                base = target.gen(name)
                values[name] = base
            cached = power_cache[(name, e)] = base ** e
        return cached

    result = target.zero()
    names = poly.ring.variables
    for exps, c in poly.terms.items():
        acc = target.constant(c if field == poly.ring.field else field.of(c))
        for name, e in zip(names, exps):
            if e:
                acc = acc * power(name, e)
        result = result + acc
    return result


def transport(poly, target, rename=None):
    """Re-express poly in another ring, matching variables by name.

    rename maps old variable names to new ones before lookup.
    Coefficients are coerced through target.field.of, so moving a
    rational polynomial into GF(p) reduces mod p (and raises when a
    denominator is divisible by p).
    """
    rename = rename or {}
    positions = []
    for v in poly.ring.variables:
        name = rename.get(v, v)
        pos = target.index.get(name)
        positions.append(pos)
    field = target.field
    terms = {}
    for exps, c in poly.terms.items():
        new = [0] * target.nvars
        for e, pos in zip(exps, positions):
            if e:
                if pos is None:
                    raise KeyError("variable of %r missing from %r"
                                   % (poly.ring, target))
                new[pos] += e
        c2 = field.of(c)
        if c2 == field.zero:
            continue
        key = tuple(new)
        prev = terms.get(key)
        if prev is None:
            terms[key] = c2
        else:
            s = field.add(prev, c2)
            if s == field.zero:
                del terms[key]
            else:
                terms[key] = s
    return Polynomial(target, terms)


# ---------------------------------------------------------------------------
# t-specific helpers


def _require_t(poly):
    i = poly.ring.t_index
    if i is None:
        raise ValueError("ring %r has no t variable" % (poly.ring,))
    return i


def t_valuation(poly):
    """Smallest power of t occurring in poly; undefined for 0."""
    i = _require_t(poly)
    if not poly.terms:
        raise ValueError("t-valuation of the zero polynomial")
    return min(e[i] for e in poly.terms)

def variable_saturate_poly(poly, var):
    """Divide out the largest possible power of one variable."""
    i = poly.ring.index[var]
    if not poly.terms:
        return poly
    v = min(e[i] for e in poly.terms)
    if v == 0:
        return poly
    terms = {e[:i] + (e[i] - v,) + e[i + 1:]: c for e, c in poly.terms.items()}
    return Polynomial(poly.ring, terms)


def t_saturate_poly(poly):
    """Divide out the largest possible power of t."""
    _require_t(poly)
    return variable_saturate_poly(poly, "t")


def reduce_mod_t(poly):
    """Image of poly under t -> 0 (same ring, residue coefficients)."""
    i = _require_t(poly)
    terms = {e: c for e, c in poly.terms.items() if e[i] == 0}
    return Polynomial(poly.ring, terms)


def t_homogenize(poly, ext, svar, weights):
    """Complete a polynomial to an isobaric one with an auxiliary variable.

    ext must extend poly's ring by svar at the end; weights (svar
    excluded, weighing one) give each term a degree, and every term is
    topped up with the s-power reaching the maximal one.  Setting svar
    back to one recovers poly exactly, term for term, since two terms
    can only collide there if they already had equal exponents.
    """
    spos = ext.index[svar]
    if ext.variables[:spos] + ext.variables[spos + 1:] != poly.ring.variables:
        raise ValueError("ring %r does not extend %r by %r"
                         % (ext, poly.ring, svar))
    wvec = [weights.get(v, 1) for v in poly.ring.variables]
    degs = {e: sum(x * w for x, w in zip(e, wvec)) for e in poly.terms}
    top = max(degs.values(), default=0)
    terms = {}
    for e, c in poly.terms.items():
        lifted = e[:spos] + (top - degs[e],) + e[spos:]
        terms[lifted] = c
    return Polynomial(ext, terms)


def set_variable_to_one(poly, var):
    """Substitute 1 for one variable by dropping its exponent column.

    Intended for undoing t_homogenize on isobaric polynomials, where the
    drop is collision-free; colliding exponent rows have their
    coefficients added, which covers the general case too.
    """
    R = poly.ring
    pos = R.index[var]
    keep = [name for name in R.variables if name != var]
    blocks = []
    for name, vs in R.blocks:
        vs = tuple(v for v in vs if v != var)
        if vs:
            blocks.append((name, vs))
    target = R.restricted([name for name, _ in blocks])
    if target.variables != tuple(keep):
        raise ValueError("cannot drop %r from %r" % (var, R))
    terms = {}
    for e, c in poly.terms.items():
        key = e[:pos] + e[pos + 1:]
        if key in terms:
            terms[key] = R.field.add(terms[key], c)
        else:
            terms[key] = c
    return Polynomial(target, {e: c for e, c in terms.items()
                               if c != R.field.zero})


def t_power(ring, k):
    if k < 0:
        raise ValueError("negative t-powers need an offset carrier")
    return ring.gen("t") ** k


# ---------------------------------------------------------------------------
# multidegrees and minors


def block_degrees(ring, exps):
    out = []
    for name, _ in ring.blocks:
        start, stop = ring.block_span(name)
        out.append(sum(exps[start:stop]))
    return tuple(out)


def weighted_degrees(poly, weights):
    """Set of weighted term degrees; weights keyed by variable name.

    Unmentioned variables weigh 1, matching the weighted order
    convention, so a singleton result means the polynomial is isobaric
    for that weighting.
    """
    wvec = [weights.get(v, 1) for v in poly.ring.variables]
    return {sum(e * w for e, w in zip(exps, wvec)) for exps in poly.terms}


def is_multihomogeneous(poly):
    """True when all terms share the same per-block degree vector."""
    it = iter(poly.terms)
    first = next(it, None)
    if first is None:
        return True
    target = block_degrees(poly.ring, first)
    return all(block_degrees(poly.ring, e) == target for e in it)


def multidegree(poly):
    """Per-block degree tuple of a multihomogeneous polynomial."""
    if not poly.terms:
        raise ValueError("multidegree of the zero polynomial")
    it = iter(poly.terms)
    target = block_degrees(poly.ring, next(it))
    for e in it:
        if block_degrees(poly.ring, e) != target:
            raise ValueError("%s is not multihomogeneous" % poly)
    return target


def minors_2x2(rows):
    """All 2x2 minors of a matrix of polynomials, row-major pair order."""
    nrows = len(rows)
    if nrows < 2 or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("minors need a rectangular matrix with >= 2 rows")
    ncols = len(rows[0])
    if ncols < 2:
        raise ValueError("minors need >= 2 columns")
    out = []
    for r1 in range(nrows):
        for r2 in range(r1 + 1, nrows):
            for c1 in range(ncols):
                for c2 in range(c1 + 1, ncols):
                    out.append(rows[r1][c1] * rows[r2][c2]
                               - rows[r1][c2] * rows[r2][c1])
    return out


# ---------------------------------------------------------------------------
# t^v * P with v possibly negative


class OffsetPolynomial:
    """A polynomial times an explicit (possibly negative) power of t.

    Stored normalized: the polynomial part has t-valuation 0, so two
    equal values have equal (offset, poly) pairs.  The zero element is
    (0, 0).
    """

    __slots__ = ("offset", "poly")

    def __init__(self, offset, poly):
        _require_t(poly)
        if not poly.terms:
            offset = 0
        else:
            i = poly.ring.t_index
            v = min(e[i] for e in poly.terms)
            if v:
                offset += v
                poly = t_saturate_poly(poly)
        self.offset = offset
        self.poly = poly

    @classmethod
    def of(cls, poly):
        return cls(0, poly)

    @property
    def ring(self):
        return self.poly.ring

    def is_zero(self):
        return self.poly.is_zero()

    def times_t_power(self, k):
        return OffsetPolynomial(self.offset + k, self.poly)

    def __add__(self, other):
        if not isinstance(other, OffsetPolynomial):
            other = OffsetPolynomial.of(self.poly._coerce(other))
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        shift = min(self.offset, other.offset)
        t = self.ring.gen("t")
        a = self.poly * t ** (self.offset - shift)
        b = other.poly * t ** (other.offset - shift)
        return OffsetPolynomial(shift, a + b)

    def __neg__(self):
        return OffsetPolynomial(self.offset, -self.poly)

    def __sub__(self, other):
        if not isinstance(other, OffsetPolynomial):
            other = OffsetPolynomial.of(self.poly._coerce(other))
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, OffsetPolynomial):
            other = OffsetPolynomial.of(self.poly._coerce(other))
        return OffsetPolynomial(self.offset + other.offset,
                                self.poly * other.poly)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("powers take exponents in N")
        return OffsetPolynomial(self.offset * n, self.poly ** n)

    def __eq__(self, other):
        if not isinstance(other, OffsetPolynomial):
            return NotImplemented
        return (self.poly == other.poly
                and (self.offset == other.offset or self.poly.is_zero()))

    __hash__ = None

    def as_polynomial(self):
        """The underlying polynomial when the offset is nonnegative."""
        if self.poly.is_zero():
            return self.poly
        if self.offset < 0:
            raise ValueError("t^(%d) * (%s) is not t-integral"
                             % (self.offset, self.poly))
        return self.poly * self.ring.gen("t") ** self.offset

    def __str__(self):
        return "t^(%d)*(%s)" % (self.offset, self.poly)

    def __repr__(self):
        return "<offset %d poly %s>" % (self.offset, self.poly)


def substitute_with_offsets(poly, assignment, ring=None):
    """Substitute OffsetPolynomial values for variables of poly.

    Any t-power in a term of poly contributes to the offset directly.
    Unassigned non-t variables map to themselves in the target ring.
    Returns an OffsetPolynomial.
    """
    t_i = _require_t(poly)
    target = None
    for value in assignment.values():
        if isinstance(value, OffsetPolynomial):
            target = value.ring
            break
        if isinstance(value, Polynomial):
            target = value.ring
            break
    if target is None:
        target = ring if ring is not None else poly.ring
    values = {}
    for name, value in assignment.items():
        if name == "t":
            raise ValueError("t cannot be reassigned here")
        if isinstance(value, Polynomial):
            value = OffsetPolynomial.of(value)
        if not isinstance(value, OffsetPolynomial):
            value = OffsetPolynomial.of(target.constant(value))
        if value.ring != target:
            raise ValueError("assignment values live in different rings")
        values[name] = value
    power_cache = {}

    def power(name, e):
        cached = power_cache.get((name, e))
        if cached is None:
            base = values.get(name)
            if base is None:
                base = values[name] = OffsetPolynomial.of(target.gen(name))
            cached = power_cache[(name, e)] = base ** e
        return cached

    result = OffsetPolynomial.of(target.zero())
    names = poly.ring.variables
    for exps, c in poly.terms.items():
        acc = OffsetPolynomial(exps[t_i], target.constant(target.field.of(c)))
        for i, e in enumerate(exps):
            if e and i != t_i:
                acc = acc * power(names[i], e)
        result = result + acc
    return result
