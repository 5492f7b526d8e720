"""Mustafin models of the plane and of plane curves, and their fibers.

A lattice configuration is a tuple of invertible t-constant 3x3
matrices M_l; the l-th lattice is spanned by the columns of
g_l = M_l * diag(1, t, t^2).  The model of the plane is cut out, inside
a product of projective planes over the base, by the 2x2 minors of the
3 x (n+1) matrix whose l-th column is g_l applied to the coordinates of
factor l, saturated at t.  Models of a curve C arise the same way from
the graph of its embedding: impose C's equation on a plane with
coordinates u, link u to every factor by rank-one conditions, saturate
away the coordinate hyperplanes of u, and eliminate u.

The special fiber of a saturated model decomposes into components drawn
from an explicit catalog of coordinate subspaces; the verification here
checks radical equality of the fiber against the catalog intersection
exactly, in both directions, without primary decomposition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .groebner import normal_form
from .ideals import Ideal, radical_membership, saturate, saturate_by_t, \
    saturate_by_variable
from .poly import (Polynomial, minors_2x2, reduce_mod_t, set_variable_to_one,
                   substitute, t_homogenize, t_saturate_poly, transport,
                   weighted_degrees)
from .rings import curve_ring, model_ring, plane_ring, ring, x_block
from .rng import child_seed, rng_for


def det3(m, field):
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    mul, sub, add = field.mul, field.sub, field.add
    term1 = mul(a, sub(mul(e, i), mul(f, h)))
    term2 = mul(b, sub(mul(d, i), mul(f, g)))
    term3 = mul(c, sub(mul(d, h), mul(e, g)))
    return add(sub(term1, term2), term3)


def adjugate3(m, field):
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    mul, sub = field.mul, field.sub

    def cof(p, q, r, s):
        return sub(mul(p, s), mul(q, r))

    return ((cof(e, f, h, i), cof(c, b, i, h), cof(b, c, e, f)),
            (cof(f, d, i, g), cof(a, c, g, i), cof(c, a, f, d)),
            (cof(d, e, g, h), cof(b, a, h, g), cof(a, b, d, e)))


def inv3(m, field):
    det = det3(m, field)
    if det == field.zero:
        raise ValueError("matrix is singular")
    inv = field.inv(det)
    adj = adjugate3(m, field)
    return tuple(tuple(field.mul(x, inv) for x in row) for row in adj)


@dataclass(frozen=True)
class LatticeConfiguration:
    """A tuple of lattices, each the column span of M_l * diag(1,t,t^2).

    Matrices are t-constant with entries in the coefficient field; each
    must have nonzero determinant (unit residue), which keeps every
    lattice a genuine full-rank sublattice.
    """

    field: object
    matrices: tuple
    seed: object = None

    def __post_init__(self):
        if not self.matrices:
            raise ValueError("a configuration needs at least one lattice")
        norm = []
        for m in self.matrices:
            rows = tuple(tuple(self.field.of(x) for x in row) for row in m)
            if len(rows) != 3 or any(len(r) != 3 for r in rows):
                raise ValueError("lattice matrices must be 3x3")
            if det3(rows, self.field) == self.field.zero:
                raise ValueError("lattice matrix %r is singular" % (m,))
            norm.append(rows)
        object.__setattr__(self, "matrices", tuple(norm))

    @property
    def n_plus_1(self):
        return len(self.matrices)

    def matrix(self, l):
        """M_l, 1-indexed."""
        return self.matrices[l - 1]

    def inverse_matrix(self, l):
        """B_l = M_l^(-1), 1-indexed, exact."""
        return inv3(self.matrix(l), self.field)

    def g_rows(self, l, target, column_vars):
        """Rows of g_l * v as polynomials, v the given column variables.

        g_l = M_l diag(1, t, t^2), so row r is
        sum_c M_l[r][c] * t^(c-1) * v_c.
        """
        m = self.matrix(l)
        t = target.gen("t")
        cols = [target.gen(v) for v in column_vars]
        rows = []
        for r in range(3):
            acc = target.zero()
            tp = target.one()
            for c in range(3):
                acc = acc + target.constant(m[r][c]) * tp * cols[c]
                tp = tp * t
            rows.append(acc)
        return rows


def sample_general_coefficients(field, n_plus_1, seed, bound=None,
                                max_attempts=1000):
    """Sample a configuration with uniform matrix entries in [0, bound).

    Entries are drawn from a deterministic splittable stream, so equal
    (field, n_plus_1, seed, bound) always give the same configuration.
    Singular draws are rejected and redrawn, up to max_attempts.
    """
    if bound is None:
        if field.char == 0:
            bound = 100
        else:
            bound = field.char
    if bound < 2:
        raise ValueError("bound must be at least 2")
    rng = rng_for(seed, "lattice-matrices")
    matrices = []
    attempts = 0
    while len(matrices) < n_plus_1:
        attempts += 1
        if attempts > max_attempts:
            raise RuntimeError("could not sample an invertible matrix in "
                               "%d attempts" % max_attempts)
        m = tuple(tuple(field.of(rng.randrange(bound)) for _ in range(3))
                  for _ in range(3))
        if det3(m, field) != field.zero:
            matrices.append(m)
    return LatticeConfiguration(field=field, matrices=tuple(matrices),
                                seed=seed)


# ---------------------------------------------------------------------------
# the model of the plane


def model_weights(R):
    """Weights making the model equations quasi-homogeneous.

    Each column g_l x_l has entries of weighted degree 3, 2, 1 down the
    rows once x1, x2, x3 carry those weights and t carries 1, so minors
    and curve pullbacks become weight-homogeneous and t-saturation can
    run on the fast weighted-order path.
    """
    w = {}
    for v in R.variables:
        if v == "t" or v.startswith("x3"):
            w[v] = 1
        elif v.startswith("x2"):
            w[v] = 2
        elif v.startswith("x1"):
            w[v] = 3
    return w


def mustafin_ideal(cfg, with_ring=None):
    """Defining ideal of the plane model: t-saturated 2x2 minors."""
    n1 = cfg.n_plus_1
    target = with_ring or model_ring(cfg.field, n1)
    if n1 == 1:
        return Ideal(target, [])
    columns = []
    for l in range(1, n1 + 1):
        columns.append(cfg.g_rows(l, target, target.block_variables("x%d" % l)))
    rows = [[columns[j][r] for j in range(n1)] for r in range(3)]
    minors = minors_2x2(rows)
    return saturate_by_t(Ideal(target, minors), weights=model_weights(target))


def special_fiber(I):
    """The fiber ideal at t = 0, over the ring without t.

    Reduction mod t is a surjective ring map, so the images of any
    generating set generate the fiber ideal; no basis computation is
    forced.  Elements divisible by t betray a non-saturated ideal and
    are rejected (a guard, not a full saturation test).
    """
    src = I.ring
    if src.t_index is None:
        raise ValueError("ring %r has no t variable" % (src,))
    basis = I.generating_set()
    ti = src.t_index
    for g in basis:
        if min(e[ti] for e in g.terms) > 0:
            raise ValueError("ideal is not t-saturated: basis element %s "
                             "is divisible by t" % g)
    rest = tuple(n for n, _ in src.blocks if n != "t")
    target = src.restricted(rest)
    gens = []
    for g in basis:
        image = reduce_mod_t(g)
        if not image.is_zero():
            gens.append(transport(image, target))
    return Ideal(target, gens)


# ---------------------------------------------------------------------------
# the component catalog


@dataclass
class ComponentCatalog:
    """Named coordinate subspaces the fiber can break into.

    primary[l] is the image of factor l (a full plane), secondary[(i,l)]
    a ruled surface between factors i and l, and curve[i] the line that
    carries the curve model's component in factor i.  All ideals are
    monomial primes of the fiber ring.
    """

    ring: object
    primary: dict
    secondary: dict
    curve: dict

    def plane_components(self):
        out = [("P%d" % l, J) for l, J in sorted(self.primary.items())]
        out += [("S%d_%d" % il, J) for il, J in sorted(self.secondary.items())]
        return out

    def curve_components(self):
        return [("D%d" % i, J) for i, J in sorted(self.curve.items())]


def fiber_ring(field, n_plus_1):
    return ring(field, [x_block(j) for j in range(1, n_plus_1 + 1)])


def component_catalog(field, n_plus_1):
    R = fiber_ring(field, n_plus_1)

    def prime(varnames):
        gens = [R.gen(v) for v in sorted(varnames, key=R.index.__getitem__)]
        return Ideal.with_known_basis(R, gens)

    primary = {}
    secondary = {}
    curve = {}
    factors = range(1, n_plus_1 + 1)
    for l in factors:
        vs = []
        for j in factors:
            if j != l:
                vs += ["x1_%d" % j, "x2_%d" % j]
        primary[l] = prime(vs)
    for i, l in itertools.combinations(factors, 2):
        vs = ["x1_%d" % l, "x1_%d" % i]
        for j in factors:
            if j not in (i, l):
                vs += ["x1_%d" % j, "x2_%d" % j]
        secondary[(i, l)] = prime(vs)
    for i in factors:
        vs = ["x1_%d" % i]
        for j in factors:
            if j != i:
                vs += ["x1_%d" % j, "x2_%d" % j]
        curve[i] = prime(vs)
    return ComponentCatalog(ring=R, primary=primary, secondary=secondary,
                            curve=curve)


# ---------------------------------------------------------------------------
# radical comparison of a fiber against catalog components


def monomial_prime_contains(J, poly):
    """Membership of poly in a monomial prime, term by term.

    A polynomial lies in (v_1, ..., v_k) iff every term is divisible by
    some v_i; no basis computation is needed.
    """
    ring_ = J.ring
    positions = [ring_.index[v] for g in J.gens
                 for v, e in zip(ring_.variables, g.leading_monomial())
                 if e]
    positions = sorted(set(positions))
    for exps in poly.terms:
        if not any(exps[i] for i in positions):
            return False
    return True


def intersect_monomial_primes(R, primes):
    """Generators of the intersection of monomial prime ideals.

    Computed combinatorially with lcms and minimalized; exact for
    monomial ideals.
    """
    gens = [R.zero_exps]

    def var_exps(J):
        return [g.leading_monomial() for g in J.gens]

    for J in primes:
        nxt = []
        for a in gens:
            for b in var_exps(J):
                nxt.append(tuple(max(x, y) for x, y in zip(a, b)))
        # minimalize: drop exponent tuples divisible by another
        nxt = sorted(set(nxt), key=lambda e: (sum(e), e))
        kept = []
        for e in nxt:
            if not any(all(x >= y for x, y in zip(e, f)) for f in kept):
                kept.append(e)
        gens = kept
    return [R.monomial(e) for e in gens]


def in_radical_of(poly, I):
    """Radical membership with a cheap power test before Rabinowitsch."""
    basis = I.groebner_basis()
    if not basis:
        return poly.is_zero()
    power = poly
    for _ in range(5):
        if normal_form(power, basis).is_zero():
            return True
        power = power * power
    return radical_membership(poly, I)


@dataclass
class DecompositionReport:
    """Outcome of comparing a fiber against a component catalog."""

    contained_in: dict
    covering: list
    equal_radical: bool
    pairwise_incomparable: bool
    component_count: object

    def all_contained(self):
        return all(self.contained_in.values())


def verify_component_decomposition(fiber, components):
    """Check sqrt(fiber) equals the intersection of the catalog primes.

    Direction one: the fiber ideal is contained in every catalog prime
    (termwise membership).  Direction two: every generator of the
    intersection of the primes lies in the radical of the fiber.
    Together these give radical equality exactly; when the primes are
    also pairwise incomparable they are precisely the minimal primes,
    so the component count is the catalog size.
    """
    R = fiber.ring
    contained = {}
    for label, J in components:
        contained[label] = all(monomial_prime_contains(J, g)
                               for g in fiber.gens)
    primes = [J for _, J in components]
    covering = []
    meet = intersect_monomial_primes(R, primes)
    for m in meet:
        covering.append((str(m), in_radical_of(m, fiber)))
    equal = all(contained.values()) and all(ok for _, ok in covering)
    support = []
    for _, J in components:
        support.append(frozenset(v for g in J.gens
                                 for v, e in zip(R.variables,
                                                 g.leading_monomial()) if e))
    incomparable = True
    for a, b in itertools.combinations(range(len(support)), 2):
        if support[a] <= support[b] or support[b] <= support[a]:
            incomparable = False
    count = len(components) if equal and incomparable else None
    return DecompositionReport(contained_in=contained, covering=covering,
                               equal_radical=equal,
                               pairwise_incomparable=incomparable,
                               component_count=count)


# ---------------------------------------------------------------------------
# plane curves and their models


@dataclass(frozen=True)
class PlaneCurve:
    """A plane projective curve V(f), f homogeneous in u1, u2, u3."""

    poly: Polynomial

    def __post_init__(self):
        f = self.poly
        if f.is_zero():
            raise ValueError("the zero polynomial cuts out no curve")
        uring = f.ring
        if ("u" not in uring._spans or uring.t_index is None):
            raise ValueError("curve equations live in the t + u ring")
        lo, hi = uring.block_span("u")
        degs = set(sum(e[lo:hi]) for e in f.terms)
        if len(degs) != 1:
            raise ValueError("curve equation must be homogeneous in u; "
                             "t-dependent coefficients are fine")
        if degs == {0}:
            raise ValueError("curve equation must involve u")

    @classmethod
    def from_text(cls, field, text):
        return cls(curve_ring(field).parse(text))

    @property
    def field(self):
        return self.poly.ring.field

    @property
    def degree(self):
        lo, hi = self.poly.ring.block_span("u")
        e = next(iter(self.poly.terms))
        return sum(e[lo:hi])

    def jacobian_ideal(self):
        f = self.poly
        gens = [f] + [f.derivative(v) for v in ("u1", "u2", "u3")]
        return Ideal(f.ring, gens)

    def smooth_over_residue_specializations(self, samples=3, seed=0):
        """Smoothness of specializations t -> c, a proxy certificate.

        A smooth plane curve is connected, hence absolutely
        irreducible, so a smooth specialization certifies
        irreducibility; failure proves nothing and the curve is then
        taken on trust.  t-free equations need one check.
        """
        f = self.poly
        if self.field.char == 0:
            return None
        R = f.ring
        ti = R.t_index
        t_free = all(e[ti] == 0 for e in f.terms)
        spec_ring = R.restricted(tuple(n for n, _ in R.blocks if n != "t"))
        rng = rng_for(seed, "smooth-specialization", self.field.char)
        for _ in range(1 if t_free else samples):
            c = self.field.of(rng.randrange(1, self.field.char))
            g = transport(substitute(f, {"t": c}), spec_ring)
            if g.is_zero():
                continue
            gens = [g] + [g.derivative(v) for v in ("u1", "u2", "u3")]
            if projectively_empty_over_field(Ideal(spec_ring, gens), "u"):
                return True
        return False


def fermat_curve(field, d):
    if d < 1:
        raise ValueError("degree must be positive")
    R = curve_ring(field)
    return PlaneCurve(R.gen("u1") ** d + R.gen("u2") ** d + R.gen("u3") ** d)


def projectively_empty_over_field(I, block):
    """Whether V(I) is empty in the projective space of one block.

    Decided exactly: V(I) is empty iff for each coordinate v of the
    block, 1 lies in the saturation I : v^infinity.  Works over the
    plain fiber ring (no t).
    """
    R = I.ring
    for v in R.block_variables(block):
        if not saturate(I, R.gen(v)).is_unit_ideal():
            return False
    return True


def projectively_empty_over_K(I, block):
    """Whether V(I) is empty over the fraction field K of the DVR.

    Exact criterion: for each coordinate v of the block, the saturation
    I : (t*v)^infinity must be the unit ideal.  A random t-specialization
    is tried first; emptiness of a specialized fiber already forces
    emptiness over K (the projection of the vanishing locus to the
    t-line is closed), so the expensive t-aware saturation only runs
    when the shortcut stays silent.
    """
    R = I.ring
    if R.t_index is None:
        raise ValueError("ring %r has no t variable" % (R,))
    field = R.field
    if field.char:
        rng = rng_for(0, "t-specialization", field.char)
        for _ in range(2):
            c = field.of(rng.randrange(1, field.char))
            spec_ring = R.restricted(tuple(n for n, _ in R.blocks
                                           if n != "t"))
            gens = []
            for g in I.gens:
                img = substitute(g, {"t": c})
                gens.append(transport(img, spec_ring))
            if projectively_empty_over_field(Ideal(spec_ring, gens), block):
                return True
    t = R.gen("t")
    for v in R.block_variables(block):
        if not saturate(I, t * R.gen(v)).is_unit_ideal():
            return False
    return True


def curve_pullback(cfg, curve, l, target):
    """The t-saturated pullback of the curve equation along g_l."""
    rows = cfg.g_rows(l, target, target.block_variables("x%d" % l))
    F = substitute(curve.poly, {"u1": rows[0], "u2": rows[1], "u3": rows[2]},
                   ring=target)
    return t_saturate_poly(F)


def curve_model_ideal(cfg, curve):
    """Defining ideal of the curve model inside the product of planes.

    Conceptually: put the curve's plane in coordinates u, link u to
    every factor by rank conditions [u | g_l x_l], remove the loci where
    u or a factor's coordinate column degenerates to zero, eliminate u,
    and t-saturate.  The same ideal is reached without the auxiliary
    plane: the plane-model minors together with every factor's pullback
    F_l generate it up to components supported where a whole factor
    vanishes, because the product embedding of the plane spans all forms
    in each multidegree and so the F_l account for every multiple of the
    curve equation once one factor's degree reaches deg f.  Saturating
    by one coordinate per factor and by t removes exactly the degenerate
    components.

    A t-free curve equation keeps every step homogeneous for the model
    weights, so all saturations run on the fast divide-out path.  A
    t-dependent equation breaks that grading and is first completed to
    an isobaric one by an auxiliary variable; see _mixed_weight_model.
    """
    if curve.field != cfg.field:
        raise ValueError("curve and configuration fields differ")
    n1 = cfg.n_plus_1
    target = model_ring(cfg.field, n1)
    pullbacks = [curve_pullback(cfg, curve, l, target)
                 for l in range(1, n1 + 1)]
    if n1 == 1:
        return Ideal.with_known_basis(target, [pullbacks[0].monic()])
    M = mustafin_ideal(cfg, with_ring=target)
    weights = model_weights(target)
    if any(len(weighted_degrees(g, weights)) > 1 for g in pullbacks):
        return _mixed_weight_model(target, list(M.gens), pullbacks)
    J = Ideal(target, list(M.gens) + pullbacks)
    for l in range(1, n1 + 1):
        J = saturate_by_variable(J, "x3_%d" % l, weights=weights)
    return saturate_by_t(J, weights=weights)


def _mixed_weight_model(target, minor_gens, pullbacks):
    """Saturation tower for pullbacks that mix t into their weights.

    The pullback of a t-dependent curve equation splits into isobaric
    layers shifted by powers of t, so no weighting of the model ring
    alone makes it isobaric.  An auxiliary variable of weight one tops
    every term up to the maximal layer; upstairs the whole tower of
    saturations runs on the divide-out path, and substituting one back
    afterwards is exact because colon ideals commute with a
    dehomogenization that fixes the divisor.
    """
    n1 = len(pullbacks)
    svar = "s"
    while svar in target.index:
        svar = svar + "0"
    ext = target.extended([("homog", (svar,))], front=False)
    weights = model_weights(target)
    weights[svar] = 1
    gens = [transport(g, ext) for g in minor_gens]
    gens += [t_homogenize(p, ext, svar, weights) for p in pullbacks]
    J = Ideal(ext, gens)
    for l in range(1, n1 + 1):
        J = saturate_by_variable(J, "x3_%d" % l, weights=weights)
    J = saturate_by_variable(J, svar, weights=weights)
    J = saturate_by_variable(J, "t", weights=weights)
    down = [transport(set_variable_to_one(g, svar), target) for g in J.gens]
    return Ideal(target, down)


@dataclass
class ProjectionReport:
    """One factor's view of a curve model: F, its fiber, and the flag."""

    factor: int
    model_equation: Polynomial
    fiber_equation: Polynomial
    is_x1_power: bool


def single_projection_model(cfg, curve, i):
    """The curve model seen through factor i alone.

    F is the t-saturated pullback of the curve equation along g_i; its
    reduction mod t is the fiber equation, and the flag records whether
    that reduction is a constant times x1^deg, the star-like shape.
    """
    target = plane_ring(cfg.field)
    rows = cfg.g_rows(i, target, ("x1", "x2", "x3"))
    F = substitute(curve.poly, {"u1": rows[0], "u2": rows[1], "u3": rows[2]},
                   ring=target)
    F = t_saturate_poly(F)
    fiber_eq = reduce_mod_t(F)
    d = curve.degree
    x1_exps = tuple(d if v == "x1" else 0 for v in target.variables)
    flag = (not fiber_eq.is_zero()
            and set(fiber_eq.terms) == {x1_exps})
    return ProjectionReport(factor=i, model_equation=F,
                            fiber_equation=fiber_eq, is_x1_power=flag)


# ---------------------------------------------------------------------------
# the star-like experiment


@dataclass
class StarLikeTrial:
    seed: object
    star_like: bool
    report: DecompositionReport
    projections: list


@dataclass
class ExperimentReport:
    trials: list
    successes: int

    @property
    def ratio(self):
        return self.successes, len(self.trials)


def star_like_experiment(curve, n_plus_1, trials, seed, bound=None):
    """Sample configurations and test the curve model for star shape."""
    if trials < 1:
        raise ValueError("need at least one trial")
    field = curve.field
    out = []
    successes = 0
    for k in range(trials):
        trial_seed = child_seed(seed, "star-like", k)
        cfg = sample_general_coefficients(field, n_plus_1, trial_seed,
                                          bound=bound)
        model = curve_model_ideal(cfg, curve)
        fiber = special_fiber(model)
        catalog = component_catalog(field, n_plus_1)
        report = verify_component_decomposition(fiber,
                                                catalog.curve_components())
        projections = [single_projection_model(cfg, curve, i)
                       for i in range(1, n_plus_1 + 1)]
        star = report.equal_radical and report.pairwise_incomparable
        if star:
            successes += 1
        out.append(StarLikeTrial(seed=trial_seed, star_like=star,
                                 report=report, projections=projections))
    return ExperimentReport(trials=out, successes=successes)
