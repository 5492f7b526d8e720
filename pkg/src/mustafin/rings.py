"""Polynomial rings with named variable blocks, and monomial orders.

A ring is determined by a coefficient field and an ordered list of
variable blocks, e.g. ``[("t", ("t",)), ("x1", ("x1_1", "x2_1", "x3_1"))]``.
The flattened variable list fixes the exponent-tuple layout of every
polynomial and the canonical (grevlex) storage order.  Rings are
interned, so two rings built from the same data are the same object.

Monomial orders are small descriptors (kind plus an optional block
priority) turned into sort-key functions on exponent tuples.  Keys are
built so that larger monomials get larger keys.
"""

from __future__ import annotations


def _grevlex_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


class MonomialOrder:
    """Descriptor for lex, grevlex, or grouped-block grevlex orders.

    kind is one of "lex", "grevlex", "block".  For block orders,
    priority is a sequence of groups, each a block name or a tuple of
    block names; earlier groups dominate and the comparison inside a
    group is grevlex over its combined variables.  An elimination order
    is the block order [eliminated blocks] > [all remaining blocks].
    """

    __slots__ = ("kind", "priority")

    def __init__(self, kind, priority=None):
        if kind not in ("lex", "grevlex", "block", "wgrevlex"):
            raise ValueError("unknown order kind %r" % (kind,))
        if kind == "block":
            if not priority:
                raise ValueError("block order needs a block priority list")
            groups = []
            for item in priority:
                if isinstance(item, str):
                    groups.append((item,))
                else:
                    groups.append(tuple(item))
            priority = tuple(groups)
        elif kind == "wgrevlex":
            weights, last = priority
            priority = (tuple(sorted(weights.items())), tuple(last))
        elif priority is not None:
            raise ValueError("%s order takes no block priority" % kind)
        self.kind = kind
        self.priority = priority

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def grevlex(cls):
        return cls("grevlex")

    @classmethod
    def block(cls, priority):
        return cls("block", priority)

    @classmethod
    def weighted_grevlex(cls, weights, last=("t",)):
        """Weighted degree first, grevlex tie with `last` ranked smallest.

        weights maps variable names to nonnegative integers (unmentioned
        variables weigh 1).  Monomials compare by weighted degree, ties
        by the usual reversed rule over the positive-weight variables
        with the `last` ones moved behind everything else; weight-zero
        variables are compared plainly at the very end, so they never
        disturb the tie.  For an ideal whose generators are homogeneous
        under these weights, a basis in this order saturates by a
        positive-weight variable in `last` just by dividing it out of
        every element.
        """
        for name, w in weights.items():
            if w < 0:
                raise ValueError("weight of %r must be nonnegative" % name)
        for name in last:
            if weights.get(name, 1) < 1:
                raise ValueError("the trailing variable %r needs positive "
                                 "weight" % name)
        return cls("wgrevlex", (dict(weights), tuple(last)))

    @classmethod
    def elimination(cls, ring, eliminated):
        """Order ranking the eliminated blocks jointly above the rest."""
        eliminated = tuple(eliminated)
        names = ring.block_names()
        for name in eliminated:
            if name not in names:
                raise KeyError("no block named %r in %r" % (name, ring))
        rest = tuple(n for n in names if n not in eliminated)
        if not rest:
            return cls("block", [eliminated])
        return cls("block", [eliminated, rest])

    def signature(self):
        return (self.kind, self.priority)

    def group_indices(self, ring):
        """Variable positions per priority group, ring order inside."""
        if self.kind != "block":
            raise ValueError("only block orders have groups")
        seen = []
        groups = []
        for group in self.priority:
            idxs = []
            for name in group:
                start, stop = ring.block_span(name)
                idxs.extend(range(start, stop))
            idxs.sort()
            groups.append(tuple(idxs))
            seen.extend(idxs)
        if sorted(seen) != list(range(ring.nvars)):
            raise ValueError("block priority %r does not cover ring %r"
                             % (self.priority, ring))
        return groups

    def weight_data(self, ring):
        """(per-position weight, tie positions, weight-zero positions)."""
        if self.kind != "wgrevlex":
            raise ValueError("only wgrevlex orders carry weights")
        weights, last = self.priority
        wmap = dict(weights)
        for name in wmap:
            if name not in ring.index:
                raise KeyError("no variable %r in %r" % (name, ring))
        w = tuple(wmap.get(v, 1) for v in ring.variables)
        tail = [ring.index[name] for name in last]
        tie = [i for i in range(ring.nvars)
               if i not in tail and w[i] > 0] + tail
        free = tuple(i for i in range(ring.nvars)
                     if w[i] == 0 and i not in tail)
        return w, tuple(tie), free

    def key_function(self, ring):
        """Return a callable mapping exponent tuples to sortable keys."""
        if self.kind == "grevlex":
            return _grevlex_key
        if self.kind == "lex":
            return lambda exps: exps
        if self.kind == "wgrevlex":
            w, tie, free = self.weight_data(ring)
            rev = tuple(reversed(tie))

            def wkey(exps, _w=w, _rev=rev, _free=free):
                return (sum(e * wi for e, wi in zip(exps, _w)),
                        tuple(-exps[i] for i in _rev),
                        tuple(exps[i] for i in _free))

            return wkey
        groups = self.group_indices(ring)

        def key(exps, _groups=tuple(groups)):
            return tuple(_grevlex_key(tuple(exps[i] for i in idxs))
                         for idxs in _groups)

        return key

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder)
                and other.signature() == self.signature())

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        if self.kind == "block":
            return "MonomialOrder.block(%r)" % (list(self.priority),)
        return "MonomialOrder.%s()" % self.kind


GREVLEX = MonomialOrder.grevlex()
LEX = MonomialOrder.lex()


class PolyRing:
    """A polynomial ring over QQ or GF(p) with named variable blocks."""

    def __init__(self, field, blocks):
        blocks = tuple((name, tuple(vs)) for name, vs in blocks)
        seen = set()
        for name, vs in blocks:
            if not vs:
                raise ValueError("block %r is empty" % name)
            for v in vs:
                if v in seen:
                    raise ValueError("duplicate variable %r" % v)
                seen.add(v)
        self.field = field
        self.blocks = blocks
        self.variables = tuple(v for _, vs in blocks for v in vs)
        self.index = {v: i for i, v in enumerate(self.variables)}
        self._spans = {}
        pos = 0
        for name, vs in blocks:
            if name in self._spans:
                raise ValueError("duplicate block name %r" % name)
            self._spans[name] = (pos, pos + len(vs))
            pos += len(vs)
        self.nvars = pos
        self.zero_exps = (0,) * pos
        # Index of the distinguished uniformizer, when the ring has one.
        self.t_index = self.index.get("t")
        self._key_cache = {}
        self._poly_cache = {}

    def block_span(self, name):
        try:
            return self._spans[name]
        except KeyError:
            raise KeyError("no block named %r in %r" % (name, self)) from None

    def block_names(self):
        return tuple(name for name, _ in self.blocks)

    def block_variables(self, name):
        start, stop = self.block_span(name)
        return self.variables[start:stop]

    def sort_key(self, order=None):
        """Cached key function for a monomial order (default grevlex)."""
        if order is None:
            order = GREVLEX
        sig = order.signature()
        func = self._key_cache.get(sig)
        if func is None:
            func = self._key_cache[sig] = order.key_function(self)
        return func

    # Polynomial construction lives in poly.py; these wrappers keep the
    # call sites short without a circular import at load time.

    def zero(self):
        from .poly import Polynomial
        return Polynomial(self, {})

    def one(self):
        from .poly import Polynomial
        return Polynomial(self, {self.zero_exps: self.field.one})

    def constant(self, value):
        from .poly import Polynomial
        c = self.field.of(value)
        if c == self.field.zero:
            return Polynomial(self, {})
        return Polynomial(self, {self.zero_exps: c})

    def gen(self, name):
        from .poly import Polynomial
        cached = self._poly_cache.get(name)
        if cached is None:
            i = self.index.get(name)
            if i is None:
                raise KeyError("no variable %r in %r" % (name, self))
            exps = tuple(1 if j == i else 0 for j in range(self.nvars))
            cached = Polynomial(self, {exps: self.field.one})
            self._poly_cache[name] = cached
        return cached

    def gens(self, block=None):
        names = self.variables if block is None else self.block_variables(block)
        return [self.gen(v) for v in names]

    def parse(self, text):
        from .poly import parse_polynomial
        return parse_polynomial(self, text)

    def monomial(self, exps, coefficient=1):
        from .poly import Polynomial
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent tuple of length %d in a %d-variable ring"
                             % (len(exps), self.nvars))
        c = self.field.of(coefficient)
        if c == self.field.zero:
            return Polynomial(self, {})
        return Polynomial(self, {exps: c})

    def with_field(self, field):
        return ring(field, self.blocks)

    def extended(self, extra_blocks, front=True):
        """Ring with extra blocks added (in front by default)."""
        extra = tuple((name, tuple(vs)) for name, vs in extra_blocks)
        blocks = extra + self.blocks if front else self.blocks + extra
        return ring(self.field, blocks)

    def restricted(self, block_names):
        """Ring keeping only the named blocks, in their current order."""
        keep = set(block_names)
        blocks = tuple(b for b in self.blocks if b[0] in keep)
        return ring(self.field, blocks)

    def signature(self):
        return (self.field, self.blocks)

    def __eq__(self, other):
        return self is other or (isinstance(other, PolyRing)
                                 and other.signature() == self.signature())

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        parts = ", ".join("%s=[%s]" % (name, ",".join(vs))
                          for name, vs in self.blocks)
        return "PolyRing(%r; %s)" % (self.field, parts)


_ring_cache = {}


def ring(field, blocks):
    """Intern and return the ring over field with the given blocks."""
    probe = PolyRing(field, blocks)
    cached = _ring_cache.get(probe.signature())
    if cached is None:
        cached = _ring_cache[probe.signature()] = probe
    return cached


def t_block():
    return ("t", ("t",))


def x_block(j):
    """The three homogeneous coordinates of projective factor j."""
    return ("x%d" % j, ("x1_%d" % j, "x2_%d" % j, "x3_%d" % j))


def model_ring(field, n_plus_1):
    """Ring for a product of n_plus_1 planes over the base: t then x-blocks."""
    blocks = [t_block()] + [x_block(j) for j in range(1, n_plus_1 + 1)]
    return ring(field, blocks)


def plane_ring(field):
    """The ambient plane of a curve downstairs: variables x1, x2, x3."""
    return ring(field, [t_block(), ("x", ("x1", "x2", "x3"))])


def curve_ring(field):
    """Ring holding plane-curve equations: variables u1, u2, u3."""
    return ring(field, [t_block(), ("u", ("u1", "u2", "u3"))])
