"""Admissible lifts of syzygy rows and their triviality certificates.

A tuple of plane forms (f_1,...,f_{n+1}) of degrees d_i is lifted to the
product of planes by choosing, for each i, a form F_i that avoids block
i entirely and has degree rho - d_j in every other block j.  The
homomorphism upsilon substitutes g_j^{-1}(x1,x2,x3) for block j and
lands back in plane forms of degree d_i, at the price of negative
t-powers carried as an explicit offset.  A lift is admissible when its
t-saturated reduction keeps a term free of all x1/x2 variables; such
terms survive restriction to the model's curve components.

Restriction to the i-th component sets t = 0, kills the x1/x2
coordinates of the other blocks, normalizes their x3 to 1, and leaves a
row of binary forms in (x2_i, x3_i).  The certificate checks that the
i-th entry of the i-th restricted row is a nonzero constant; the kernel
of the row is then free with the explicit basis e_j - (A_j/A_i) e_i,
which is re-verified against a computed syzygy basis.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import projectively_empty_over_K
from .ideals import Ideal, syzygies
from .poly import (OffsetPolynomial, Polynomial, block_degrees,
                   reduce_mod_t, substitute, substitute_with_offsets,
                   t_saturate_poly, transport)
from .rings import model_ring, plane_ring, ring


@dataclass(frozen=True)
class DegreeData:
    """Numeric frame for a lift problem: n+1 factors, twist rho, degrees.

    The degrees d_1..d_{n+1} satisfy 0 <= d_i <= rho and sum to n*rho,
    which makes d_i = sum_{j != i} (rho - d_j): a form of degree d_i can
    be spread over the other n blocks with degree rho - d_j in block j.
    """

    n: int
    rho: int
    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if self.n < 2:
            raise ValueError("need at least two factors beyond the first")
        if self.rho < 1:
            raise ValueError("the twist rho must be positive")
        if len(self.degrees) != self.n + 1:
            raise ValueError("expected %d degrees, got %d"
                             % (self.n + 1, len(self.degrees)))
        for d in self.degrees:
            if not (0 <= d <= self.rho):
                raise ValueError("degree %d outside [0, %d]" % (d, self.rho))
        if sum(self.degrees) != self.n * self.rho:
            raise ValueError("degrees must sum to n*rho = %d"
                             % (self.n * self.rho))

    @property
    def n_plus_1(self):
        return self.n + 1

    def degree(self, i):
        """d_i, 1-indexed."""
        return self.degrees[i - 1]

    def cofactor_sizes(self, i):
        """The block degrees (j, rho - d_j) of a lift at index i."""
        return tuple((j, self.rho - self.degrees[j - 1])
                     for j in range(1, self.n + 2) if j != i)


@dataclass
class SymLift:
    """A lift at index i: a form avoiding block i with fixed multidegree."""

    index: int
    poly: Polynomial
    data: DegreeData

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("the zero polynomial is not a lift")
        R = self.poly.ring
        n1 = self.data.n_plus_1
        expected = [0]
        for j in range(1, n1 + 1):
            if j == self.index:
                expected.append(0)
            else:
                expected.append(self.data.rho - self.data.degree(j))
        for e in self.poly.terms:
            degs = block_degrees(R, e)
            if list(degs[1:]) != expected[1:]:
                raise ValueError(
                    "term with block degrees %s, expected %s"
                    % (degs[1:], tuple(expected[1:])))

    @property
    def ring(self):
        return self.poly.ring


def upsilon(lift, cfg):
    """Push a lift down to a plane form of degree d_i.

    Block j is replaced by g_j^{-1}(x1,x2,x3): row r of the inverse
    matrix B_j applied to (x1,x2,x3), times t^(-(r-1)).  The negative
    t-powers are carried as the offset of the result.
    """
    data = lift.data
    if cfg.n_plus_1 != data.n_plus_1:
        raise ValueError("configuration has %d factors, lift expects %d"
                         % (cfg.n_plus_1, data.n_plus_1))
    target = plane_ring(cfg.field)
    plane_vars = [target.gen(v) for v in ("x1", "x2", "x3")]
    assignment = {}
    for j in range(1, data.n_plus_1 + 1):
        if j == lift.index:
            continue
        B = cfg.inverse_matrix(j)
        for r in range(3):
            row = target.zero()
            for c in range(3):
                row = row + target.constant(B[r][c]) * plane_vars[c]
            assignment["x%d_%d" % (r + 1, j)] = OffsetPolynomial(-r, row)
    return substitute_with_offsets(lift.poly, assignment, ring=target)


def is_admissible_lift(lift):
    """Whether the saturated reduction keeps a term clear of x1 and x2.

    The lift is t-saturated, reduced mod t, and tested for a term whose
    x1_j and x2_j exponents all vanish; such a term is exactly what
    survives on the model's curve components.
    """
    R = lift.poly.ring
    bar = reduce_mod_t(t_saturate_poly(lift.poly))
    blocked = [R.index[v] for v in R.variables
               if v.startswith("x1_") or v.startswith("x2_")]
    return any(all(e[p] == 0 for p in blocked) for e in bar.terms)


def monomial_factorization(exps, data, i):
    """Split a degree-d_i exponent triple into per-block factors.

    The exponents of x1, x2, x3 are consumed in that order, filling the
    factors for j != i in increasing j, each up to its size rho - d_j.
    Returns pairs (j, exponent triple); the factors multiply back to the
    input monomial.
    """
    exps = tuple(exps)
    if len(exps) != 3 or any(e < 0 for e in exps):
        raise ValueError("expected an exponent triple, got %r" % (exps,))
    if sum(exps) != data.degree(i):
        raise ValueError("monomial degree %d, expected d_%d = %d"
                         % (sum(exps), i, data.degree(i)))
    pool = list(exps)
    var = 0
    out = []
    for j, size in data.cofactor_sizes(i):
        fac = [0, 0, 0]
        need = size
        while need > 0:
            if pool[var] == 0:
                var += 1
                continue
            take = min(need, pool[var])
            fac[var] += take
            pool[var] -= take
            need -= take
        out.append((j, tuple(fac)))
    return out


def lift_template(h, data, i):
    """h rewritten termwise in relabeled block variables.

    Every term's monomial is factored by monomial_factorization and the
    factor for block j is written in the variables x1_j, x2_j, x3_j;
    t-powers and coefficients ride along unchanged.
    """
    if isinstance(h, OffsetPolynomial):
        h = h.as_polynomial()
    src = h.ring
    target = model_ring(src.field, data.n_plus_1)
    ti = src.t_index
    xpos = [src.index[v] for v in ("x1", "x2", "x3")]
    terms = {}
    for e, c in h.terms.items():
        triple = tuple(e[p] for p in xpos)
        image = [0] * target.nvars
        image[target.t_index] = e[ti]
        for j, fac in monomial_factorization(triple, data, i):
            for r in range(3):
                image[target.index["x%d_%d" % (r + 1, j)]] = fac[r]
        key = tuple(image)
        terms[key] = target.field.add(terms.get(key, target.field.zero), c)
    return Polynomial(target, terms)


def lift_polynomial(h, data, i, cfg):
    """A lift at index i whose upsilon image is exactly h.

    h must be a t-integral plane form, homogeneous of degree d_i in
    x1, x2, x3.  The template's block-j variables are substituted by the
    rows of g_j, so applying upsilon afterwards telescopes g_j^{-1} g_j
    away and returns h with offset zero.
    """
    if isinstance(h, OffsetPolynomial):
        h = h.as_polynomial()
    src = h.ring
    xpos = [src.index[v] for v in ("x1", "x2", "x3")]
    for e in h.terms:
        if sum(e[p] for p in xpos) != data.degree(i):
            raise ValueError("h must be homogeneous of degree %d in x"
                             % data.degree(i))
    template = lift_template(h, data, i)
    target = template.ring
    assignment = {}
    for j, _ in data.cofactor_sizes(i):
        rows = cfg.g_rows(j, target, target.block_variables("x%d" % j))
        for r in range(3):
            assignment["x%d_%d" % (r + 1, j)] = rows[r]
    F = substitute(template, assignment, ring=target)
    return SymLift(index=i, poly=F, data=data)


@dataclass
class SyzygyTuple:
    """A row of plane forms of degrees d_i, optionally with lifts.

    Entries are offset-carrying plane forms (images under upsilon have
    negative t-powers in general); when lifts are present, entry i is
    the upsilon image of lift i, which verify_lifts re-checks exactly.
    """

    data: DegreeData
    entries: tuple
    lifts: tuple = None

    def __post_init__(self):
        self.entries = tuple(self.entries)
        if len(self.entries) != self.data.n_plus_1:
            raise ValueError("expected %d entries, got %d"
                             % (self.data.n_plus_1, len(self.entries)))
        for i, entry in enumerate(self.entries, 1):
            poly = entry.poly if isinstance(entry, OffsetPolynomial) else entry
            if poly.is_zero():
                continue
            R = poly.ring
            xpos = [R.index[v] for v in ("x1", "x2", "x3")]
            degs = {sum(e[p] for p in xpos) for e in poly.terms}
            if degs != {self.data.degree(i)}:
                raise ValueError("entry %d has x-degrees %s, expected %d"
                                 % (i, sorted(degs), self.data.degree(i)))
        if self.lifts is not None:
            self.lifts = tuple(self.lifts)
            if len(self.lifts) != self.data.n_plus_1:
                raise ValueError("expected %d lifts, got %d"
                                 % (self.data.n_plus_1, len(self.lifts)))

    def verify_lifts(self, cfg):
        """Whether upsilon maps every lift exactly onto its entry."""
        if self.lifts is None:
            return False
        for i, (lift, entry) in enumerate(zip(self.lifts, self.entries), 1):
            if lift.index != i or upsilon(lift, cfg) != entry:
                return False
        return True


def example_class(data, cfg, hs=None):
    """The admissible tuple built on the pure x3-monomials.

    Lift i is the monomial prod_{j != i} x3_j^(rho - d_j) plus the
    deterministic lift of h_i; its upsilon image is the corresponding
    f_i + h_i.  The x3-monomial guarantees admissibility unless an h_i
    deliberately cancels it, which is rejected.
    """
    n1 = data.n_plus_1
    if cfg.n_plus_1 != n1:
        raise ValueError("configuration has %d factors, data expects %d"
                         % (cfg.n_plus_1, n1))
    target = model_ring(cfg.field, n1)
    if hs is None:
        hs = [None] * n1
    if len(hs) != n1:
        raise ValueError("expected %d perturbations, got %d" % (n1, len(hs)))
    entries = []
    lifts = []
    for i in range(1, n1 + 1):
        mono = target.one()
        for j, size in data.cofactor_sizes(i):
            mono = mono * target.gen("x3_%d" % j) ** size
        F = mono
        h = hs[i - 1]
        if h is not None and not (isinstance(h, Polynomial) and h.is_zero()):
            F = F + lift_polynomial(h, data, i, cfg).poly
        lift = SymLift(index=i, poly=F, data=data)
        if not is_admissible_lift(lift):
            raise ValueError("perturbation %d cancels the x3-monomial" % i)
        entries.append(upsilon(lift, cfg))
        lifts.append(lift)
    return SyzygyTuple(data=data, entries=tuple(entries), lifts=tuple(lifts))


def component_ring(field, i):
    """Coordinates of the i-th curve component: a binary form ring."""
    return ring(field, [("x%d" % i, ("x2_%d" % i, "x3_%d" % i))])


def restrict_to_component(tup, i):
    """The row of saturated lifts on the i-th curve component.

    Sets t = 0, x1_i = 0, and x1_j = x2_j = 0, x3_j = 1 for j != i;
    what remains of each saturated lift is a binary form in x2_i, x3_i
    (of degree rho - d_i for the lifts at other indices, constant for
    the lift at i itself).
    """
    if tup.lifts is None:
        raise ValueError("restriction needs lifts")
    data = tup.data
    R = tup.lifts[0].poly.ring
    target = component_ring(R.field, i)
    zero, one = target.zero(), target.one()
    assignment = {"t": zero, "x1_%d" % i: zero}
    for j in range(1, data.n_plus_1 + 1):
        if j == i:
            continue
        assignment["x1_%d" % j] = zero
        assignment["x2_%d" % j] = zero
        assignment["x3_%d" % j] = one
    row = []
    for lift in tup.lifts:
        sat = t_saturate_poly(lift.poly)
        row.append(substitute(sat, assignment, ring=target))
    return row


@dataclass
class ComponentRestriction:
    """One component's restricted row and its kernel bookkeeping."""

    component: int
    row: list
    unit_ok: bool
    kernel_basis: list
    relations_exact: bool
    syzygies_spanned: bool


@dataclass
class TrivialityCertificate:
    """Per-component restrictions plus the overall verdict."""

    restrictions: list
    verdict: bool

    def restriction(self, i):
        return self.restrictions[i - 1]


def _reduce_syzygy(vec, basis):
    """vec minus its combination of the split basis; zero iff spanned."""
    out = list(vec)
    for j, b in basis:
        coeff = out[j]
        if coeff.is_zero():
            continue
        for l in range(len(out)):
            out[l] = out[l] - coeff * b[l]
    return all(v.is_zero() for v in out)


def triviality_certificate(tup):
    """Check every component restriction splits off a unit.

    For each component i the restricted row must have a nonzero constant
    at position i; the kernel is then free on e_j - (A_j/A_i) e_i, which
    is verified exactly against the row and against a computed syzygy
    basis of the row.
    """
    restrictions = []
    verdict = True
    for i in range(1, tup.data.n_plus_1 + 1):
        row = restrict_to_component(tup, i)
        a_i = row[i - 1]
        unit_ok = (not a_i.is_zero()) and a_i.is_constant()
        basis = []
        relations_exact = False
        spanned = False
        if unit_ok:
            target = a_i.ring
            inv = target.field.inv(a_i.constant_value())
            for j in range(len(row)):
                if j == i - 1:
                    continue
                vec = [target.zero()] * len(row)
                vec[j] = target.one()
                vec[i - 1] = -(row[j] * target.constant(inv))
                basis.append((j, vec))
            relations_exact = all(
                sum((vec[l] * row[l] for l in range(len(row))),
                    target.zero()).is_zero()
                for _, vec in basis)
            spanned = all(_reduce_syzygy(vec, basis)
                          for vec in syzygies(row))
        restrictions.append(ComponentRestriction(
            component=i, row=row, unit_ok=unit_ok, kernel_basis=basis,
            relations_exact=relations_exact, syzygies_spanned=spanned))
        verdict = verdict and unit_ok and relations_exact and spanned
    return TrivialityCertificate(restrictions=restrictions, verdict=verdict)


def coverage_check(curve, tup):
    """Whether the tuple's entries cover the curve.

    True iff f together with the entries has empty vanishing locus in
    the projective plane over the fraction field: the curve misses no
    affine chart D_+(f_i).  Accepts a SyzygyTuple or a bare iterable of
    entries.
    """
    target = plane_ring(curve.field)
    f = transport(curve.poly, target,
                  rename={"u1": "x1", "u2": "x2", "u3": "x3"})
    entries = tup.entries if isinstance(tup, SyzygyTuple) else tuple(tup)
    gens = [f]
    for entry in entries:
        if isinstance(entry, OffsetPolynomial):
            gens.append(entry.poly)
        else:
            gens.append(entry)
    return projectively_empty_over_K(Ideal(target, gens), "x")
