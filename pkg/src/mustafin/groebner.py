"""Buchberger engine over packed monomials.

Monomials are packed into single Python ints, 16 bits per exponent, so
divisibility is one subtraction plus a guard-bit mask and monomial
multiplication is integer addition.  Each admissible order here (lex,
grevlex, blockwise grevlex) is linear, so a monomial's sort key is also
a single int and the key of a product is key(a) + key(b) - key(1).
Both facts keep the inner reduction loop free of tuple traffic.

The pair queue uses the sugar strategy; pair pruning is the
Gebauer-Moeller form of the two Buchberger criteria.  Reduced bases are
unique for a fixed order, which the rest of the package relies on for
ideal equality and reproducible reports.
"""

from __future__ import annotations

import heapq
import os

from .poly import Polynomial

FIELD_BITS = 16
FIELD_CAP = 1 << FIELD_BITS

STEP_LIMIT_VAR = "MUSTAFIN_GB_STEP_LIMIT"


class GroebnerStepLimit(RuntimeError):
    """Raised when a basis computation exceeds the configured step cap."""


def _step_limit(explicit):
    if explicit is not None:
        return explicit
    raw = os.environ.get(STEP_LIMIT_VAR)
    if not raw:
        return None
    return int(raw)


class MonomialCodec:
    """Packs exponent tuples and order keys of one (ring, order) pair."""

    def __init__(self, ring, order):
        self.ring = ring
        self.order = order
        n = ring.nvars
        self.nvars = n
        self.shifts = tuple(FIELD_BITS * i for i in range(n))
        guard = 0
        for s in self.shifts:
            guard |= 1 << (s + FIELD_BITS - 1)
        self.guard = guard
        # Key layout: most significant field first.  Every supported
        # order is a sequence of (block degree, reversed complemented
        # exponents) segments, or plain exponents for lex.
        fields = self._key_fields()
        nfields = len(fields)
        self.key_one = 0
        self.key_contrib = [0] * n
        for pos, (kind, payload) in enumerate(fields):
            shift = FIELD_BITS * (nfields - 1 - pos)
            if kind == "deg":
                for var in payload:
                    self.key_contrib[var] += 1 << shift
            elif kind == "wdeg":
                for var, w in payload:
                    self.key_contrib[var] += w << shift
            elif kind == "cexp":
                self.key_one += (FIELD_CAP - 1) << shift
                self.key_contrib[payload] -= 1 << shift
            else:  # plain exponent (lex)
                self.key_contrib[payload] += 1 << shift

    def _key_fields(self):
        order, ring = self.order, self.ring
        if order.kind == "lex":
            return [("exp", i) for i in range(ring.nvars)]
        if order.kind == "wgrevlex":
            w, tie, free = order.weight_data(ring)
            fields = [("wdeg", tuple(enumerate(w)))]
            for i in reversed(tie):
                fields.append(("cexp", i))
            for i in free:
                fields.append(("exp", i))
            return fields
        if order.kind == "grevlex":
            groups = [tuple(range(ring.nvars))]
        else:
            groups = order.group_indices(ring)
        fields = []
        for idxs in groups:
            fields.append(("deg", idxs))
            for i in reversed(idxs):
                fields.append(("cexp", i))
        return fields

    def pack(self, exps):
        m = 0
        for e, s in zip(exps, self.shifts):
            if e < 0 or e >= FIELD_CAP // 2:
                raise ValueError("exponent %d out of packing range" % e)
            m |= e << s
        return m

    def unpack(self, m):
        mask = FIELD_CAP - 1
        return tuple((m >> s) & mask for s in self.shifts)

    def key(self, m):
        k = self.key_one
        mask = FIELD_CAP - 1
        for i, s in enumerate(self.shifts):
            e = (m >> s) & mask
            if e:
                k += e * self.key_contrib[i]
        return k

    def degree(self, m):
        mask = FIELD_CAP - 1
        return sum((m >> s) & mask for s in self.shifts)

    def lcm(self, a, b):
        if a == b:
            return a
        mask = FIELD_CAP - 1
        m = 0
        for s in self.shifts:
            ea = (a >> s) & mask
            eb = (b >> s) & mask
            m |= (ea if ea >= eb else eb) << s
        return m

    def to_kernel(self, poly):
        return {self.pack(e): c for e, c in poly.terms.items()}

    def from_kernel(self, terms):
        return Polynomial(self.ring,
                          {self.unpack(m): c for m, c in terms.items()})


_codecs = {}


def codec_for(ring, order=None):
    from .rings import GREVLEX
    if order is None:
        order = GREVLEX
    key = (ring, order.signature())
    codec = _codecs.get(key)
    if codec is None:
        codec = _codecs[key] = MonomialCodec(ring, order)
    return codec


class _Entry:
    """A monic basis element in kernel form."""

    __slots__ = ("lm", "key", "tail", "sugar", "alive")

    def __init__(self, lm, key, tail, sugar):
        self.lm = lm
        self.key = key
        self.tail = tail
        self.sugar = sugar
        self.alive = True


class _Kernel:
    """State shared by one basis computation or division run."""

    def __init__(self, codec):
        self.codec = codec
        self.field = codec.ring.field
        self.p = self.field.char or None
        self.keys = {}
        self.degs = {}

    def learn(self, m):
        k = self.keys.get(m)
        if k is None:
            k = self.keys[m] = self.codec.key(m)
            self.degs[m] = self.codec.degree(m)
        return k

    def entry_from_terms(self, terms, sugar=None):
        """Make a monic _Entry from a nonempty kernel dict."""
        keys = self.keys
        for m in terms:
            if m not in keys:
                self.learn(m)
        lm = max(terms, key=keys.__getitem__)
        lc = terms[lm]
        if sugar is None:
            degs = self.degs
            sugar = max(degs[m] for m in terms)
        field = self.field
        if lc != field.one:
            inv = field.inv(lc)
            mul = field.mul
            terms = {m: mul(c, inv) for m, c in terms.items()}
        tail = tuple(sorted(((m, c) for m, c in terms.items() if m != lm),
                            key=lambda mc: keys[mc[0]], reverse=True))
        return _Entry(lm, keys[lm], tail, sugar)

    def reduce_full(self, work, basis, sugar=0, cofactors=None):
        """Fully reduce a kernel dict against a list of entries.

        Returns (remainder dict, sugar).  When cofactors is a dict it
        collects, per basis index, the quotient monomials times
        coefficients, so that input = sum q_i * basis_i + remainder.
        """
        keys = self.keys
        degs = self.degs
        guard = self.codec.guard
        p = self.p
        field = self.field
        zero = field.zero
        for m in work:
            if m not in keys:
                self.learn(m)
        rem = {}
        heap = [(-keys[m], m) for m in work]
        heapq.heapify(heap)
        blms = [e.lm for e in basis]
        while heap:
            _, m = heapq.heappop(heap)
            c = work.get(m)
            if not c:
                continue
            del work[m]
            gi = -1
            for i, lm in enumerate(blms):
                if not (m - lm) & guard:
                    gi = i
                    break
            if gi < 0:
                rem[m] = c
                continue
            g = basis[gi]
            kdelta = keys[m] - g.key
            ddelta = degs[m] - degs[g.lm]
            shift = m - g.lm
            gs = g.sugar + ddelta
            if gs > sugar:
                sugar = gs
            if cofactors is not None:
                q = cofactors.setdefault(gi, {})
                if p:
                    q[shift] = (q.get(shift, 0) + c) % p
                else:
                    q[shift] = q.get(shift, zero) + c
            if p:
                for bm, bc in g.tail:
                    nm = bm + shift
                    prev = work.get(nm)
                    if prev is None:
                        if nm not in keys:
                            keys[nm] = keys[bm] + kdelta
                            degs[nm] = degs[bm] + ddelta
                        v = -c * bc % p
                        if v:
                            work[nm] = v
                            heapq.heappush(heap, (-keys[nm], nm))
                    else:
                        v = (prev - c * bc) % p
                        if v:
                            work[nm] = v
                        else:
                            del work[nm]
            else:
                for bm, bc in g.tail:
                    nm = bm + shift
                    prev = work.get(nm)
                    if prev is None:
                        if nm not in keys:
                            keys[nm] = keys[bm] + kdelta
                            degs[nm] = degs[bm] + ddelta
                        v = -c * bc
                        if v:
                            work[nm] = v
                            heapq.heappush(heap, (-keys[nm], nm))
                    else:
                        v = prev - c * bc
                        if v:
                            work[nm] = v
                        else:
                            del work[nm]
        return rem, sugar


def _spair_terms(kernel, f, g, l):
    """Tail difference of the S-polynomial of two monic entries."""
    p = kernel.p
    zero = kernel.field.zero
    sf = l - f.lm
    sg = l - g.lm
    keys = kernel.keys
    degs = kernel.degs
    kf = keys[l] - f.key
    df = degs[l] - degs[f.lm]
    kg = keys[l] - g.key
    dg = degs[l] - degs[g.lm]
    terms = {}
    for m, c in f.tail:
        nm = m + sf
        if nm not in keys:
            keys[nm] = keys[m] + kf
            degs[nm] = degs[m] + df
        terms[nm] = c
    for m, c in g.tail:
        nm = m + sg
        if nm not in keys:
            keys[nm] = keys[m] + kg
            degs[nm] = degs[m] + dg
        prev = terms.get(nm)
        if prev is None:
            terms[nm] = kernel.field.neg(c)
        else:
            v = (prev - c) % p if p else prev - c
            if v:
                terms[nm] = v
            else:
                del terms[nm]
    return terms


def _update_pairs(kernel, G, P, h_index):
    """Gebauer-Moeller pair update after appending entry h_index to G."""
    codec = kernel.codec
    h = G[h_index]
    lm_h = h.lm
    # Candidate new pairs, with both Buchberger criteria applied.
    cand = []
    for i, g in enumerate(G[:h_index]):
        if g.alive:
            cand.append((i, codec.lcm(g.lm, lm_h)))
    kept = []
    guard = codec.guard
    for pos, (i, l) in enumerate(cand):
        coprime = (l == G[i].lm + lm_h)
        if coprime:
            kept.append((i, l, True))
            continue
        drop = False
        for pos2, (j, l2) in enumerate(cand):
            if pos2 == pos or l2 == l and pos2 > pos:
                continue
            if not (l - l2) & guard:
                if l2 != l or pos2 < pos:
                    drop = True
                    break
        if not drop:
            kept.append((i, l, False))
    new_pairs = []
    for i, l, coprime in kept:
        if coprime:
            continue
        g = G[i]
        kernel.learn(l)
        dl = kernel.degs[l]
        sugar = max(g.sugar + dl - kernel.degs[g.lm],
                    h.sugar + dl - kernel.degs[lm_h])
        new_pairs.append((sugar, kernel.keys[l], i, h_index, l))
    # Prune old pairs whose lcm is a proper multiple of lm_h.
    survivors = []
    for pair in P:
        _, _, i, j, l = pair
        if (l - lm_h) & guard:
            survivors.append(pair)
        elif codec.lcm(G[i].lm, lm_h) == l or codec.lcm(G[j].lm, lm_h) == l:
            survivors.append(pair)
    survivors.extend(new_pairs)
    # Mark superseded basis elements; they stay usable as reducers.
    for g in G[:h_index]:
        if g.alive and not (g.lm - lm_h) & guard and g.lm != lm_h:
            g.alive = False
    return survivors


def _interreduce(kernel, entries):
    """Minimalize and tail-reduce a basis; returns kernel dicts."""
    entries = [e for e in entries if e.alive]
    entries.sort(key=lambda e: e.key)
    minimal = []
    guard = kernel.codec.guard
    for e in entries:
        if not any(not (e.lm - m.lm) & guard for m in minimal):
            minimal.append(e)
    one = kernel.field.one
    out = []
    for i, e in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        work = {m: c for m, c in e.tail}
        rem, _ = kernel.reduce_full(work, others)
        rem[e.lm] = one
        out.append(rem)
    return out


def groebner_basis(polys, order=None, ring=None, seed_basis=(),
                   step_limit=None):
    """Unique reduced Groebner basis of the given generators.

    seed_basis may carry polynomials already known to form a Groebner
    basis under this order (for example, the generators of a cached
    basis being extended by a saturation trick); no pairs are formed
    among them.  The step cap, explicit or via the environment variable
    MUSTAFIN_GB_STEP_LIMIT, bounds the number of S-pair reductions.
    """
    polys = [f for f in polys if not f.is_zero()]
    seed_basis = [f for f in seed_basis if not f.is_zero()]
    if ring is None:
        if not polys and not seed_basis:
            raise ValueError("no generators and no ring given")
        ring = (polys + seed_basis)[0].ring
    codec = codec_for(ring, order)
    kernel = _Kernel(codec)
    limit = _step_limit(step_limit)
    G = []
    P = []
    for f in seed_basis:
        G.append(kernel.entry_from_terms(codec.to_kernel(f)))
    steps = 0
    queue = list(polys)
    qi = 0
    while qi < len(queue) or P:
        if qi < len(queue):
            f = queue[qi]
            qi += 1
            work = codec.to_kernel(f)
            rem, sugar = kernel.reduce_full(
                work, [e for e in G if e.alive])
            if not rem:
                continue
            G.append(kernel.entry_from_terms(rem, sugar))
            P = _update_pairs(kernel, G, P, len(G) - 1)
            continue
        best = min(range(len(P)), key=P.__getitem__)
        sugar, _, i, j, l = P.pop(best)
        steps += 1
        if limit is not None and steps > limit:
            raise GroebnerStepLimit(
                "basis computation exceeded %d pair reductions" % limit)
        terms = _spair_terms(kernel, G[i], G[j], l)
        if not terms:
            continue
        rem, sugar = kernel.reduce_full(terms,
                                        [e for e in G if e.alive], sugar)
        if not rem:
            continue
        G.append(kernel.entry_from_terms(rem, sugar))
        P = _update_pairs(kernel, G, P, len(G) - 1)
    reduced = _interreduce(kernel, G)
    out = [codec.from_kernel(terms) for terms in reduced]
    sort_key = ring.sort_key(order)
    out.sort(key=lambda f: sort_key(f.leading_monomial(order)))
    return out


def s_polynomial(f, g, order=None):
    """The S-polynomial of two nonzero polynomials."""
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of zero")
    ring = f.ring
    codec = codec_for(ring, order)
    kernel = _Kernel(codec)
    ef = kernel.entry_from_terms(codec.to_kernel(f))
    eg = kernel.entry_from_terms(codec.to_kernel(g))
    l = codec.lcm(ef.lm, eg.lm)
    kernel.learn(l)
    kernel.degs.setdefault(l, codec.degree(l))
    return codec.from_kernel(_spair_terms(kernel, ef, eg, l))


def normal_form(poly, basis, order=None, cofactors=False):
    """Remainder of poly on division by a list of polynomials.

    With cofactors=True, also returns {index: q} with
    poly = sum q_i * basis_i + remainder, coefficients exact.
    """
    ring = poly.ring
    codec = codec_for(ring, order)
    kernel = _Kernel(codec)
    entries = []
    lcs = []
    for g in basis:
        if g.is_zero():
            raise ValueError("zero divisor polynomial")
        terms = codec.to_kernel(g)
        for m in terms:
            kernel.learn(m)
        lm = max(terms, key=kernel.keys.__getitem__)
        lcs.append(terms[lm])
        entries.append(kernel.entry_from_terms(terms))
    work = codec.to_kernel(poly)
    qmap = {} if cofactors else None
    rem, _ = kernel.reduce_full(work, entries, cofactors=qmap)
    result = codec.from_kernel(rem)
    if not cofactors:
        return result
    field = ring.field
    out = {}
    for i, q in qmap.items():
        inv = field.inv(lcs[i])
        scaled = {m: field.mul(c, inv) for m, c in q.items()}
        out[i] = codec.from_kernel(scaled)
    return result, out
