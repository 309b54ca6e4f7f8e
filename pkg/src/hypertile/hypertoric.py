"""Hypertoric invariants read off from a zonotopal tiling.

The variety behind a tiling is never built here; everything it determines
is computed combinatorially:

* torus-weight positivity from the position of the origin in the base
  zonotope,
* the extended core as a poset of components, one per tile, carrying a
  local fan, a properness flag, and (for points) a one-parameter weight,
* equivariant class and Picard groups as explicit lattices,
* the nef/ample/trivial classification of equivariant divisors through
  support-function convexity,
* the Lawrence fan living in the quotient of Z^E + Z^E by the
  antidiagonal relation lattice, and
* generators of the invariant coordinate ring as an exponent monoid with
  its unit lattice, torus weights, and linear moment-map relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .lattice import (
    ScaleGuardExceeded,
    SubLattice,
    Vec,
    apply_map,
    express_in_lattice,
    hermite_basis,
    kernel_lattice,
    perp_lattice,
    quotient_map,
    smith_invariants,
    solve_linear,
)
from .monoid import hilbert_basis_nonneg
from .support import (
    CONVEX,
    NONCONVEX,
    STRICTLY_CONVEX,
    convexity,
    regularity,
    tiling_lattices,
)
from .tiling import Cone, Fan, Tiling, local_fan
from .zonotope import (
    InvalidInput,
    SignVec,
    VectorConfig,
    Zonotope,
    classify_block,
    compose_sign,
    sign_str,
    zonotope_contains,
)

RING_GUARD = 8  # invariant-ring generators are guarded to |E| <= 8

MIXED = "mixed"
NONNEGATIVE = "nonnegative"
POSITIVE = "positive"


def weight_profile(z: Zonotope) -> str:
    """'positive', 'nonnegative', or 'mixed' for the one-parameter weights.

    Positive iff the origin is an interior point (which forces the zonotope
    to be full-dimensional); nonnegative iff the origin lies in the
    zonotope at all.
    """
    origin = (0,) * z.config.rank
    if z.dim == z.config.rank and zonotope_contains(z, origin, strict=True):
        return POSITIVE
    if zonotope_contains(z, origin):
        return NONNEGATIVE
    return MIXED


def is_hypertoric(tiling: Tiling) -> tuple[bool, tuple[str, ...]]:
    """Whether the tiling satisfies the hypertoric hypotheses, with reasons."""
    reasons = []
    if not tiling.base.config.spanning:
        reasons.append("configuration does not span the ambient space")
    if weight_profile(tiling.base) != POSITIVE:
        reasons.append("origin is not interior to the base zonotope")
    return (not reasons, tuple(reasons))


# ---------------------------------------------------------------------------
# extended core


@dataclass(frozen=True)
class CoreComponent:
    """One stratum of the extended core, indexed by a tile."""

    tile: SignVec            # canonical sign vector over the free indices of the base
    zonotope: Zonotope
    fan: Fan
    is_proper: bool          # local fan complete
    in_core: bool            # tile not contained in the boundary of the base
    gm_weight: Optional[Vec]  # the vertex itself, for 0-dimensional tiles


@dataclass(frozen=True)
class ExtendedCore:
    components: tuple[CoreComponent, ...]
    inclusions: tuple[tuple[int, int], ...]  # (i, j) with component i strictly inside j

    @property
    def irreducible(self) -> tuple[CoreComponent, ...]:
        return tuple(c for c in self.components if c.gm_weight is not None)

    @property
    def core_nonempty(self) -> bool:
        return any(c.in_core for c in self.components)


def _barycenter(z: Zonotope) -> tuple[Fraction, ...]:
    pts = z.vertices
    n = len(pts)
    return tuple(Fraction(sum(p[i] for p in pts), n) for i in range(z.config.rank))


def extended_core(tiling: Tiling) -> ExtendedCore:
    """All strata of the extended core with their poset of inclusions."""
    canonical_sign = {}
    for t in tiling.sorted_tiles:
        z = tiling.tile_zonotope(t)
        canonical_sign.setdefault(z, t)
    components = []
    elements = tiling.elements
    for z in elements:
        fan, complete = local_fan(tiling, canonical_sign[z])
        in_core = zonotope_contains(tiling.base, _barycenter(z), strict=True)
        gm = z.center if z.dim == 0 else None
        components.append(
            CoreComponent(canonical_sign[z], z, fan, complete, in_core, gm)
        )
    inclusions = []
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            if i != j and a.dim < b.dim and all(zonotope_contains(b, p) for p in a.vertices):
                inclusions.append((i, j))
    return ExtendedCore(tuple(components), tuple(inclusions))


# ---------------------------------------------------------------------------
# class groups and divisors


@dataclass(frozen=True)
class ClassGroups:
    equivariant_rank: int                  # Cl_T is free on the positive divisors
    forget_kernel: SubLattice              # functionals, the kernel of forgetting
    class_invariant_factors: tuple[int, ...]
    class_free_rank: int
    picard: SubLattice                     # support-function lattice


def class_groups(tiling: Tiling) -> ClassGroups:
    config = tiling.base.config
    if not config.spanning:
        raise InvalidInput("class groups need a spanning configuration")
    size = config.size
    lattices = tiling_lattices(tiling)
    forget_kernel = perp_lattice(lattices.relations)
    if forget_kernel.rank:
        invariants = smith_invariants([list(b) for b in forget_kernel.basis])
    else:
        invariants = []
    free_rank = size - forget_kernel.rank
    return ClassGroups(
        equivariant_rank=size,
        forget_kernel=forget_kernel,
        class_invariant_factors=tuple(invariants),
        class_free_rank=free_rank,
        picard=lattices.support_lattice,
    )


NOT_CARTIER = "not_cartier"
TRIVIAL = "trivial"
NEF = "nef"
AMPLE = "ample"
NONE_OF_THESE = "none_of_these"


@dataclass(frozen=True)
class DivisorReport:
    cartier: bool
    trivial: bool
    nef: bool
    ample: bool
    label: str


def classify_divisor(tiling: Tiling, coeffs: Sequence[int]) -> DivisorReport:
    """Cartier/trivial/nef/ample classification of an equivariant divisor.

    The label reports the strongest applicable property; the flags record
    each property separately (ample implies nef).
    """
    config = tiling.base.config
    if not config.spanning:
        raise InvalidInput("divisor classification needs a spanning configuration")
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) != config.size:
        raise InvalidInput("divisor coefficient length differs from configuration size")
    lattices = tiling_lattices(tiling)
    if not lattices.support_lattice.contains(coeffs):
        return DivisorReport(False, False, False, False, NOT_CARTIER)
    trivial = perp_lattice(lattices.relations).contains(coeffs)
    shape = convexity(tiling, coeffs)
    ample = shape == STRICTLY_CONVEX
    nef = shape != NONCONVEX
    if trivial:
        label = TRIVIAL
    elif ample:
        label = AMPLE
    elif nef:
        label = NEF
    else:
        label = NONE_OF_THESE
    return DivisorReport(True, trivial, nef, ample, label)


# ---------------------------------------------------------------------------
# geometric flags


@dataclass(frozen=True)
class GeometryFlags:
    smooth: bool
    qfactorial_terminal_sufficient: bool
    projective_over_affinization: bool


def geometry_flags(tiling: Tiling) -> GeometryFlags:
    """Smoothness, the all-parallelotopes criterion, and projectivity.

    Smooth iff every tile is a cube; the terminality flag is the
    one-directional all-parallelotopes criterion, hence the name.
    """
    kinds = {classify_block(z) for z in tiling.elements}
    smooth = kinds <= {"cube"}
    qft = kinds <= {"cube", "parallelotope"}
    projective = regularity(tiling) is not None
    return GeometryFlags(smooth, qft, projective)


# ---------------------------------------------------------------------------
# Lawrence fan


@dataclass(frozen=True)
class LawrenceData:
    ambient_rank: int
    projection: tuple[Vec, ...]      # Z^{2E} -> ambient quotient, kernel the antidiagonal relations
    rays_plus: tuple[Vec, ...]
    rays_minus: tuple[Vec, ...]
    base_cone: Cone
    base_extremal_rays: tuple[Vec, ...]
    fan: Fan
    fan_tiles: tuple[SignVec, ...]   # tile per cone, aligned with fan.cones


def lawrence_fan(tiling: Tiling) -> LawrenceData:
    """The Lawrence cone of the base and its refinement by the tiles.

    Rays are the negated images of the coordinate vectors of Z^E + Z^E in
    the quotient by the antidiagonally embedded relation lattice; the cone
    of a tile omits the rays matching its fixed signs.  Every ray of the
    refinement is checked to be an extremal ray of the base cone.
    """
    config = tiling.base.config
    size = config.size
    lattices = tiling_lattices(tiling)
    anti = hermite_basis(
        [tuple(l) + tuple(-x for x in l) for l in lattices.relations.basis],
        ambient_dim=2 * size,
    )
    projection = quotient_map(anti)
    ambient = len(projection)
    unit = [0] * (2 * size)

    def image(index: int) -> Vec:
        unit[index] = 1
        out = apply_map(projection, unit)
        unit[index] = 0
        return out

    rays_plus = tuple(image(e) for e in range(size))
    rays_minus = tuple(image(size + e) for e in range(size))

    def negated(v: Vec) -> Vec:
        return tuple(-x for x in v)

    zero = hermite_basis([], ambient_dim=ambient)
    base_sign = tiling.base.sign

    def cone_for(full_sign: SignVec) -> Cone:
        gens = []
        for e in range(size):
            if full_sign[e] != 1:
                gens.append(negated(rays_plus[e]))
            if full_sign[e] != -1:
                gens.append(negated(rays_minus[e]))
        return Cone(ambient, tuple(sorted(set(gens))), zero)

    base_cone = cone_for(base_sign)
    base_rays = set(base_cone.canonical[1])
    cones = []
    fan_tiles = []
    for tile in tiling.sorted_tiles:
        full = compose_sign(base_sign, tile, tiling.base.free)
        cone = cone_for(full)
        for ray in cone.canonical[1]:
            if ray not in base_rays:
                raise ArithmeticError(
                    f"ray {ray} of tile {sign_str(tile)} is not extremal in the base cone"
                )
        cones.append(cone)
        fan_tiles.append(tile)
    return LawrenceData(
        ambient_rank=ambient,
        projection=projection,
        rays_plus=rays_plus,
        rays_minus=rays_minus,
        base_cone=base_cone,
        base_extremal_rays=base_cone.canonical[1],
        fan=Fan(ambient, tuple(cones)),
        fan_tiles=tuple(fan_tiles),
    )


def lawrence_support_assembles(
    tiling: Tiling, upper: Sequence[int], lower: Sequence[int]
) -> bool:
    """Whether a pair of coefficient vectors extends linearly over every cone.

    On the cone of a tile, the would-be support function prescribes the
    value of the positive ray of index e unless the tile fixes e
    positively, and likewise for negative rays; the function must descend
    through the antidiagonal relations.  Assembly succeeds for all tiles
    iff the difference of the two vectors is a support-function vector.
    """
    config = tiling.base.config
    size = config.size
    upper = [int(x) for x in upper]
    lower = [int(x) for x in lower]
    if len(upper) != size or len(lower) != size:
        raise InvalidInput("coefficient vectors must have one entry per generator")
    relations = tiling_lattices(tiling).relations
    base_sign = tiling.base.sign
    for tile in tiling.sorted_tiles:
        full = compose_sign(base_sign, tile, tiling.base.free)
        free_indices = []  # coordinates of the functional left unconstrained
        fixed = {}
        for e in range(size):
            if full[e] != 1:
                fixed[e] = Fraction(upper[e])
            else:
                free_indices.append(e)
            if full[e] != -1:
                fixed[size + e] = Fraction(lower[e])
            else:
                free_indices.append(size + e)
        rows = []
        rhs = []
        for lam in relations.basis:
            row = [0] * len(free_indices)
            value = Fraction(0)
            for e in range(size):
                for idx, coeff in ((e, lam[e]), (size + e, -lam[e])):
                    if coeff == 0:
                        continue
                    if idx in fixed:
                        value -= coeff * fixed[idx]
                    else:
                        row[free_indices.index(idx)] = coeff
            rows.append(row)
            rhs.append(value)
        if solve_linear(rows, rhs) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# tiling reconstruction from core data


def reconstruct_maximal_tiles(
    tiling_base: Zonotope, components: Sequence[CoreComponent]
) -> tuple[Zonotope, ...]:
    """Rebuild the maximal tiles from vertex weights and local fans alone.

    A candidate full-dimensional tile belongs to the tiling iff all of its
    vertices are tiling vertices and at each of them its vertex cone is a
    maximal cone of the local fan recorded there.
    """
    config = tiling_base.config
    d = tiling_base.dim
    zero = hermite_basis([], ambient_dim=config.rank)
    fan_keys: dict[Vec, set] = {}
    for comp in components:
        if comp.gm_weight is None:
            continue
        keys = {c.canonical for c in comp.fan.cones if c.dim == d}
        fan_keys[comp.gm_weight] = keys
    vertices = set(fan_keys)

    accepted = []
    seen = set()
    free = tiling_base.free
    for r in range(d, len(free) + 1):
        for subset in itertools.combinations(free, r):
            from .lattice import rational_rank

            if rational_rank([config.vectors[e] for e in subset]) != d:
                continue
            rest = [e for e in free if e not in subset]
            for signs in itertools.product((1, -1), repeat=len(rest)):
                full = list(tiling_base.sign)
                for e in subset:
                    full[e] = 0
                for e, s in zip(rest, signs):
                    full[e] = s
                z = Zonotope(config, tuple(full), tiling_base.translation)
                if z.vertex_set in seen:
                    continue
                seen.add(z.vertex_set)
                if not z.vertex_set <= vertices:
                    continue
                ok = True
                for p in z.vertices:
                    gens = tuple(
                        sorted(
                            tuple(q[i] - p[i] for i in range(config.rank))
                            for q in z.vertices
                            if q != p
                        )
                    )
                    cone = Cone(config.rank, gens, zero)
                    if cone.canonical not in fan_keys[p]:
                        ok = False
                        break
                if ok:
                    accepted.append(z)
    return tuple(sorted(accepted, key=lambda z: z.vertices))


# ---------------------------------------------------------------------------
# invariant coordinate ring


@dataclass(frozen=True)
class MonomialGen:
    """A generator z^upper w^lower of the invariant ring."""

    upper: Vec  # exponents of the z variables
    lower: Vec  # exponents of the w variables
    torus_weight: tuple
    gm_weight: int

    def monomial(self) -> str:
        parts = []
        for e, k in enumerate(self.upper):
            if k:
                parts.append(f"z{e + 1}" + (f"^{k}" if k != 1 else ""))
        for e, k in enumerate(self.lower):
            if k:
                parts.append(f"w{e + 1}" + (f"^{k}" if k != 1 else ""))
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class InvariantRingData:
    units: SubLattice                    # exponent pairs of invertible monomials
    generators: tuple[MonomialGen, ...]  # Hilbert basis of the pointed quotient
    moment_relations: tuple[Vec, ...]    # one linear relation in the z_e w_e per relation


def _canonical_lift(x0: list[int], units: SubLattice) -> tuple[int, ...]:
    """Deterministic coset representative modulo the unit lattice.

    Prefers exponent pairs close to the moment diagonal, then small, then
    lexicographically largest; found by bounded exhaustive search, which
    is ample at the guarded scale.
    """
    if units.rank == 0:
        return tuple(x0)
    size = len(x0) // 2

    def score(v):
        diag = sum(abs(v[e] - v[size + e]) for e in range(size))
        total = sum(abs(x) for x in v)
        return (diag, total, tuple(-x for x in v))

    bound = sum(abs(x) for x in x0) + 1
    best = tuple(x0)
    best_score = score(best)
    if units.rank > 4:
        raise ScaleGuardExceeded("unit lattice rank exceeds the reduction guard")
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=units.rank):
        v = list(x0)
        for c, b in zip(coeffs, units.basis):
            if c:
                for i in range(len(v)):
                    v[i] += c * b[i]
        s = score(tuple(v))
        if s < best_score:
            best = tuple(v)
            best_score = s
    return best


def invariant_ring_data(config: VectorConfig, sign: Sequence[int]) -> InvariantRingData:
    """Generators and relations of the ring of invariant monomials.

    Exponent pairs (upper, lower) must have difference perpendicular to the
    relation lattice, with nonnegativity required except where the sign
    vector inverts a variable.  The unit lattice is split off and the
    pointed remainder is generated by its Hilbert basis.  Torus weights
    are the functionals realizing lower - upper on the configuration;
    the one-parameter weight is the total degree.
    """
    if not config.primitive:
        raise InvalidInput("invariant ring data needs a primitive configuration")
    size = config.size
    if size > RING_GUARD:
        raise ScaleGuardExceeded(f"invariant ring generators are guarded to size {RING_GUARD}")
    sign = tuple(int(s) for s in sign)
    if len(sign) != size:
        raise InvalidInput("sign vector length differs from configuration size")
    relations = kernel_lattice(
        [tuple(config.vectors[e][i] for e in range(size)) for i in range(config.rank)],
        cols=size,
    )
    pair_rows = [tuple(l) + tuple(-x for x in l) for l in relations.basis]
    exponent_lattice = kernel_lattice(pair_rows, cols=2 * size)
    constrained = [e for e in range(size) if sign[e] != 1]
    constrained += [size + e for e in range(size) if sign[e] != -1]
    selectors = []
    for idx in constrained:
        row = [0] * (2 * size)
        row[idx] = 1
        selectors.append(tuple(row))
    units = kernel_lattice(pair_rows + selectors, cols=2 * size)
    projected = [tuple(b[idx] for idx in constrained) for b in exponent_lattice.basis]
    shadow = hermite_basis(projected, ambient_dim=len(constrained))
    basis_elements = hilbert_basis_nonneg(shadow)

    generators = []
    for h in basis_elements:
        coeffs = express_in_lattice(projected, h)
        assert coeffs is not None
        x0 = [0] * (2 * size)
        for c, b in zip(coeffs, exponent_lattice.basis):
            if c:
                for i in range(2 * size):
                    x0[i] += c * b[i]
        lifted = _canonical_lift(x0, units)
        upper = lifted[:size]
        lower = lifted[size:]
        diff = [lower[e] - upper[e] for e in range(size)]
        weight = solve_linear([config.vectors[e] for e in range(size)], diff)
        assert weight is not None
        torus_weight = tuple(int(w) if w.denominator == 1 else w for w in weight)
        gm = sum(upper) + sum(lower)
        generators.append(MonomialGen(upper, lower, torus_weight, gm))
    generators.sort(key=lambda g: (g.gm_weight, g.torus_weight, g.upper, g.lower))
    return InvariantRingData(
        units=units,
        generators=tuple(generators),
        moment_relations=relations.basis,
    )
