"""Tilings of integral zonotopes.

A tiling is stored in normal form: the base zonotope Z(a, u) plus a set of
sign vectors over the free indices of u, one for each element of the
tiling (so the set is closed under passing to faces, up to re-encoding).
Every tiling of a zonotope arises this way, so sign vectors are a complete
representation.

Validation is geometric and exact: volume accounting certifies covering,
relative interiors are tested for disjointness by rational feasibility,
and pairwise intersections are matched against honest faces.  Regular
tilings are produced from integer lifts by enumerating the covectors of
the lifted configuration that are positive at infinity; exhaustive
enumeration at desk scale grows tilings wall by wall from a corner of the
zonotope.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Sequence, Union

from .lattice import (
    LinearSystem,
    ScaleGuardExceeded,
    SubLattice,
    Vec,
    feasible_strict,
    hermite_basis,
    integer_row,
    rational_rank,
    saturation,
    solve_linear,
)
from .zonotope import (
    InvalidInput,
    SignVec,
    VectorConfig,
    Zonotope,
    _faces,
    compose_sign,
    face_supports,
    sign_str,
    zonotope_contains,
)

ENUMERATION_GUARD = (3, 6)  # (max rank, max configuration size)


# ---------------------------------------------------------------------------
# cones and fans


def _cone_member_system(ambient: int, generators: Sequence[Vec], lineality: Sequence[Vec], v: Sequence[int]) -> LinearSystem:
    """Feasibility of v in cone(generators) + span(lineality), homogenized."""
    g, l = len(generators), len(lineality)
    dim = g + l + 1
    eqs = []
    for i in range(ambient):
        row = [gen[i] for gen in generators] + [lin[i] for lin in lineality] + [-int(v[i])]
        eqs.append(tuple(row))
    weak = []
    for j in range(g):
        row = [0] * dim
        row[j] = 1
        weak.append(tuple(row))
    tau = [0] * dim
    tau[-1] = 1
    return LinearSystem(dim, strict=(tuple(tau),), weak=tuple(weak), equalities=tuple(eqs))


@dataclass(frozen=True, eq=False)
class Cone:
    """A rational polyhedral cone: nonneg span of generators plus lineality."""

    ambient_dim: int
    generators: tuple[Vec, ...]
    lineality: SubLattice

    @cached_property
    def dim(self) -> int:
        return rational_rank(list(self.generators) + list(self.lineality.basis))

    def contains(self, v: Sequence[int]) -> bool:
        if not any(v):
            return True
        system = _cone_member_system(self.ambient_dim, self.generators, self.lineality.basis, v)
        return feasible_strict(system) is not None

    @cached_property
    def canonical(self) -> tuple:
        """(saturated lineality basis, sorted extremal primitive rays mod lineality).

        Equal cones have equal canonical forms; the quotient by the
        lineality must be pointed, which holds for every cone built here.
        """
        from .lattice import apply_map, primitive_vector, quotient_map

        lin, _ = saturation(self.lineality)
        qmap = quotient_map(lin)
        rays = []
        for g in self.generators:
            img = apply_map(qmap, g)
            if any(img):
                rays.append(primitive_vector(img))
        rays = sorted(set(rays))
        # extremality filter in the pointed quotient
        extremal = []
        for i, r in enumerate(rays):
            others = [s for j, s in enumerate(rays) if j != i]
            if not others:
                extremal.append(r)
                continue
            system = _cone_member_system(len(qmap), others, (), r)
            if feasible_strict(system) is None:
                extremal.append(r)
        for r in extremal:
            neg = tuple(-x for x in r)
            system = _cone_member_system(len(qmap), extremal, (), neg)
            if feasible_strict(system) is not None:
                raise ArithmeticError("cone has hidden lineality; canonical form undefined")
        return (lin.basis, tuple(extremal))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.canonical))

    def __repr__(self) -> str:
        return f"Cone(dim={self.dim}, rays={self.canonical[1]}, lineality_rank={self.lineality.rank})"


@dataclass(frozen=True)
class Fan:
    """A finite collection of cones (stored without implicit face closure)."""

    ambient_dim: int
    cones: tuple[Cone, ...]


# ---------------------------------------------------------------------------
# tilings


@dataclass(frozen=True, eq=False)
class Tiling:
    """A tiling of ``base`` given by sign vectors over the free indices."""

    base: Zonotope
    tiles: frozenset

    def __post_init__(self):
        free = self.base.free
        tiles = frozenset(tuple(int(s) for s in t) for t in self.tiles)
        for t in tiles:
            if len(t) != len(free):
                raise InvalidInput(
                    f"tile sign vector {sign_str(t)} does not match the {len(free)} free indices"
                )
            if any(s not in (-1, 0, 1) for s in t):
                raise InvalidInput("tile sign entries must be -1, 0, or +1")
        if not tiles:
            raise InvalidInput("a tiling needs at least one tile")
        object.__setattr__(self, "tiles", tiles)

    def tile_zonotope(self, tile: SignVec) -> Zonotope:
        sign = compose_sign(self.base.sign, tile, self.base.free)
        return Zonotope(self.base.config, sign, self.base.translation)

    @cached_property
    def sorted_tiles(self) -> tuple[SignVec, ...]:
        return tuple(sorted(self.tiles))

    @cached_property
    def elements(self) -> tuple[Zonotope, ...]:
        """Distinct element zonotopes (different sign vectors can repeat one)."""
        seen: dict[Zonotope, Zonotope] = {}
        for t in self.sorted_tiles:
            z = self.tile_zonotope(t)
            seen.setdefault(z, z)
        return tuple(sorted(seen.values(), key=lambda z: (z.dim, z.vertices)))

    @cached_property
    def maximal_elements(self) -> tuple[Zonotope, ...]:
        elems = self.elements
        maximal = []
        for f in elems:
            contained = False
            for g in elems:
                if g.dim <= f.dim or f is g:
                    continue
                if _bbox_inside(f, g) and all(zonotope_contains(g, p) for p in f.vertices):
                    contained = True
                    break
            if not contained:
                maximal.append(f)
        return tuple(maximal)

    @cached_property
    def vertices(self) -> tuple[Vec, ...]:
        return tuple(sorted(z.center for z in self.elements if z.dim == 0))

    @cached_property
    def key(self):
        return (self.base.vertex_set, frozenset(z.vertex_set for z in self.elements))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tiling):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Tiling(base={self.base!r}, tiles={len(self.tiles)})"


def _bbox_inside(f: Zonotope, g: Zonotope) -> bool:
    fv, gv = f.vertices, g.vertices
    for i in range(f.config.rank):
        if min(p[i] for p in fv) < min(p[i] for p in gv):
            return False
        if max(p[i] for p in fv) > max(p[i] for p in gv):
            return False
    return True


def trivial_tiling(base: Zonotope) -> Tiling:
    """The tiling consisting of the zonotope and all of its faces."""
    from .zonotope import _covector_data

    tiles = frozenset(v for v, _ in _covector_data(base.config, base.free))
    return Tiling(base, tiles)


def close_tiles(base: Zonotope, maximal: Sequence[SignVec]) -> Tiling:
    """The face closure of the given tiles, in sign-vector form."""
    from .zonotope import _covector_data

    free = base.free
    pos = {e: i for i, e in enumerate(free)}
    tiles = set()
    for t in maximal:
        t = tuple(int(s) for s in t)
        full = compose_sign(base.sign, t, free)
        zfree = tuple(e for e in free if full[e] == 0)
        for v, _ in _covector_data(base.config, zfree):
            face_full = compose_sign(full, v, zfree)
            tiles.add(tuple(face_full[e] for e in free))
    return Tiling(base, frozenset(tiles))


# ---------------------------------------------------------------------------
# exact pairwise geometry


def _pair_system(f: Zonotope, g: Zonotope, strict_boxes: bool = False, extra_strict: Sequence = ()) -> LinearSystem:
    """Feasibility variables (t_f, t_g, tau) for a common point of f and g."""
    nf, ng = len(f.free), len(g.free)
    dim = nf + ng + 1
    d = f.config.rank
    eqs = []
    for i in range(d):
        row = [f.config.vectors[e][i] for e in f.free]
        row += [-g.config.vectors[e][i] for e in g.free]
        row.append(f.center[i] - g.center[i])
        eqs.append(tuple(row))
    box = []
    for j in range(nf + ng):
        row = [0] * dim
        row[j], row[-1] = 1, 1
        box.append(tuple(row))
        row = [0] * dim
        row[j], row[-1] = -1, 1
        box.append(tuple(row))
    tau = tuple([0] * (dim - 1) + [1])
    extra = tuple(tuple(r) for r in extra_strict)
    if strict_boxes:
        return LinearSystem(dim, strict=tuple(box) + (tau,) + extra, equalities=tuple(eqs))
    return LinearSystem(dim, strict=(tau,) + extra, weak=tuple(box), equalities=tuple(eqs))


def polytopes_intersect(f: Zonotope, g: Zonotope) -> bool:
    return feasible_strict(_pair_system(f, g)) is not None


def relint_disjoint(f: Zonotope, g: Zonotope) -> bool:
    """Whether the relative interiors of the two zonotopes are disjoint.

    Relative interiors meet iff 0 lies in the relative interior of the
    difference body f - g, which is again a zonotope; for full-dimensional
    inputs this reduces to strict support inequalities.
    """
    d = f.config.rank
    if f.config is g.config and f.dim == d and g.dim == d:
        from .zonotope import _normal_pool

        delta = tuple(f.center[i] - g.center[i] for i in range(d))
        for m in _normal_pool(f.config):
            value = sum(m[i] * delta[i] for i in range(d))
            bound = 0
            for e in itertools.chain(f.free, g.free):
                bound += abs(sum(m[i] * f.config.vectors[e][i] for i in range(d)))
            if not -bound < value < bound:
                return True
        return False
    return feasible_strict(_pair_system(f, g, strict_boxes=True)) is None


def common_face(f: Zonotope, g: Zonotope):
    """Classify the intersection of two zonotopes.

    Returns ("empty", None), ("face", h) when f∩g equals the face h of both,
    or ("violation", None) otherwise.
    """
    if not polytopes_intersect(f, g):
        return ("empty", None)
    in_g = {p for p in f.vertices if zonotope_contains(g, p)}
    g_faces = None
    for face, m, h in sorted(face_supports(f), key=lambda t: (-t[0].dim, t[0].vertices)):
        if not face.vertex_set <= in_g:
            continue
        # candidate: face <= f∩g already; test f∩g <= face via the
        # supporting functional (no intersection point may lie below it)
        row = [-sum(m[i] * f.config.vectors[e][i] for i in range(f.config.rank)) for e in f.free]
        row += [0] * len(g.free)
        row.append(h - sum(m[i] * f.center[i] for i in range(f.config.rank)))
        below = _pair_system(f, g, extra_strict=(tuple(row),))
        if feasible_strict(below) is None:
            if g_faces is None:
                g_faces = set(_faces(g))
            if face in g_faces:
                return ("face", face)
            return ("violation", None)
    return ("violation", None)


def validate_tiling(tiling: Tiling) -> tuple[str, ...]:
    """All violations of the tiling axioms; an empty tuple means valid.

    Checks exact volume accounting, pairwise disjoint interiors and
    common-face intersections of maximal tiles, and face closure.  For a
    face-closed set, common faces of maximal pairs force common faces of
    all pairs, so the pairwise check is restricted to maximal tiles.
    """
    violations = []
    base = tiling.base
    elements = tiling.elements
    element_set = set(elements)
    for z in elements:
        for face in _faces(z):
            if face not in element_set:
                violations.append(
                    f"face closure: face with vertices {face.vertices} of tile "
                    f"{sign_str(z.sign)} is not in the tiling"
                )
    maximal = tiling.maximal_elements
    deficient = [z for z in maximal if z.dim < base.dim]
    for z in deficient:
        violations.append(f"maximal tile {sign_str(z.sign)} has dimension {z.dim} < {base.dim}")
    total = sum(z.volume for z in maximal if z.dim == base.dim)
    if total != base.volume:
        violations.append(f"volume mismatch: tiles cover {total} of {base.volume}")
    for f, g in itertools.combinations(maximal, 2):
        if not relint_disjoint(f, g):
            violations.append(
                f"interior overlap between tiles {sign_str(f.sign)} and {sign_str(g.sign)}"
            )
    for f, g in itertools.combinations(maximal, 2):
        status, _ = common_face(f, g)
        if status == "violation":
            violations.append(
                f"intersection of tiles {sign_str(f.sign)} and {sign_str(g.sign)} "
                "is not a common face"
            )
    return tuple(violations)


# ---------------------------------------------------------------------------
# regular tilings from integer lifts


def tiling_from_lift(config: VectorConfig, lift: Sequence[int]) -> tuple[Tiling, dict[Vec, int]]:
    """The normal tiling of the lift, plus the upper envelope at its vertices.

    The tiles are the sign patterns of (m.a_e + s.r_e)_e over functionals
    (m, s) with s > 0, i.e. the covectors of the lifted configuration that
    are positive at infinity.  The returned dict maps each tiling vertex to
    the value of the envelope there.
    """
    if not config.spanning:
        raise InvalidInput("tiling_from_lift needs a spanning configuration")
    lift = tuple(int(x) for x in lift)
    if len(lift) != config.size:
        raise InvalidInput("lift length differs from configuration size")
    d = config.rank
    lifted = [config.vectors[e] + (lift[e],) for e in range(config.size)]
    at_infinity = tuple([0] * d + [1])

    found = []

    def system(prefix):
        strict = [at_infinity]
        eqs = []
        for e, s in enumerate(prefix):
            if s == 0:
                eqs.append(lifted[e])
            else:
                strict.append(tuple(s * x for x in lifted[e]))
        return LinearSystem(d + 1, strict=tuple(strict), equalities=tuple(eqs))

    def extend(prefix):
        if feasible_strict(system(prefix)) is None:
            return
        if len(prefix) == config.size:
            found.append(tuple(prefix))
            return
        for s in (0, 1, -1):
            extend(prefix + [s])

    extend([])
    base = Zonotope(config, (0,) * config.size)
    tiling = Tiling(base, frozenset(found))
    envelope: dict[Vec, int] = {}
    for v in found:
        if all(v):
            vertex = tuple(
                sum(v[e] * config.vectors[e][i] for e in range(config.size)) for i in range(d)
            )
            value = sum(v[e] * lift[e] for e in range(config.size))
            if vertex in envelope:
                assert envelope[vertex] == value
            else:
                envelope[vertex] = value
    return tiling, envelope


# ---------------------------------------------------------------------------
# exhaustive enumeration at desk scale


def enumerate_tilings(config: VectorConfig) -> tuple[Tiling, ...]:
    """All tilings of Z(a), grown wall by wall from a corner vertex.

    Guarded to rank <= 3 and at most 6 vectors; every candidate tile is a
    zonotope of a sign vector, which is exhaustive by the normal-form
    representation of tilings.
    """
    max_rank, max_size = ENUMERATION_GUARD
    if config.rank > max_rank or config.size > max_size:
        raise ScaleGuardExceeded(
            f"enumeration is guarded to rank <= {max_rank} and size <= {max_size}"
        )
    if not config.spanning:
        span, _ = saturation(hermite_basis(config.vectors, ambient_dim=config.rank))
        columns = [list(col) for col in zip(*span.basis)] if span.rank else []
        coords = []
        for v in config.vectors:
            sol = solve_linear(columns, v) if span.rank else ([] if not any(v) else None)
            if sol is None:
                raise InvalidInput("configuration outside its own span")
            coords.append(tuple(int(c) for c in sol))
        sub = VectorConfig(span.rank, tuple(coords))
        base = Zonotope(config, (0,) * config.size)
        return tuple(Tiling(base, t.tiles) for t in enumerate_tilings(sub))

    d = config.rank
    base = Zonotope(config, (0,) * config.size)
    total_volume = base.volume

    # one canonical sign vector per geometrically distinct full-dim tile;
    # repeated or opposite generators make many presentations coincide
    by_geometry: dict[frozenset, tuple[SignVec, Zonotope]] = {}
    indices = range(config.size)
    for r in range(d, config.size + 1):
        for subset in itertools.combinations(indices, r):
            if rational_rank([config.vectors[e] for e in subset]) != d:
                continue
            rest = [e for e in indices if e not in subset]
            for signs in itertools.product((1, -1), repeat=len(rest)):
                sv = [0] * config.size
                for e, s in zip(rest, signs):
                    sv[e] = s
                sv = tuple(sv)
                z = Zonotope(config, sv)
                key = z.vertex_set
                if key not in by_geometry or sv < by_geometry[key][0]:
                    by_geometry[key] = (sv, z)
    cand_signs = []
    candidates = []
    for sv, z in sorted(by_geometry.values()):
        cand_signs.append(sv)
        candidates.append(z)

    # facet (wall) keys per candidate
    walls: list[tuple[frozenset, ...]] = []
    wall_index: dict[frozenset, list[int]] = {}
    for idx, z in enumerate(candidates):
        keys = []
        for face in _faces(z):
            if face.dim == d - 1:
                key = face.vertex_set
                keys.append(key)
                wall_index.setdefault(key, []).append(idx)
        walls.append(tuple(keys))

    boundary_cache: dict[frozenset, bool] = {}

    def wall_on_boundary(key: frozenset) -> bool:
        if key not in boundary_cache:
            pts = sorted(key)
            n = len(pts)
            bary = tuple(Fraction(sum(p[i] for p in pts), n) for i in range(d))
            boundary_cache[key] = not zonotope_contains(base, bary, strict=True)
        return boundary_cache[key]

    disjoint_cache: dict[tuple[int, int], bool] = {}

    def disjoint(i: int, j: int) -> bool:
        k = (min(i, j), max(i, j))
        if k not in disjoint_cache:
            disjoint_cache[k] = relint_disjoint(candidates[i], candidates[j])
        return disjoint_cache[k]

    seed = min(base.vertices)
    roots = [i for i, z in enumerate(candidates) if seed in z.vertex_set]

    results: dict[frozenset, frozenset] = {}

    def record(chosen: list[int]) -> None:
        vol = sum(candidates[i].volume for i in chosen)
        assert vol == total_volume, "closed wall structure must cover the zonotope"
        geo = frozenset(candidates[i].vertex_set for i in chosen)
        signs = frozenset(cand_signs[i] for i in chosen)
        if geo not in results or sorted(signs) < sorted(results[geo]):
            results[geo] = signs

    def search(chosen: list[int], wall_count: dict[frozenset, int]) -> None:
        open_walls = sorted(
            (key for key, c in wall_count.items() if c == 1 and not wall_on_boundary(key)),
            key=lambda k: sorted(k),
        )
        if not open_walls:
            record(chosen)
            return
        target = open_walls[0]
        for idx in wall_index.get(target, ()):
            if idx in chosen:
                continue
            if not all(disjoint(idx, j) for j in chosen):
                continue
            counts = dict(wall_count)
            ok = True
            for key in walls[idx]:
                counts[key] = counts.get(key, 0) + 1
                if counts[key] > 2:
                    ok = False
            if not ok:
                continue
            chosen.append(idx)
            search(chosen, counts)
            chosen.pop()

    for root in roots:
        search([root], {key: 1 for key in walls[root]})

    tilings = []
    for geo in sorted(results, key=lambda g: sorted(sorted(vs) for vs in g)):
        t = close_tiles(base, sorted(results[geo]))
        problems = validate_tiling(t)
        assert not problems, problems
        tilings.append(t)
    tilings.sort(key=lambda t: (len(t.maximal_elements), t.sorted_tiles))
    return tuple(tilings)


# ---------------------------------------------------------------------------
# local fans and refinement


def _resolve_tile(tiling: Tiling, tile: Union[SignVec, Zonotope]) -> Zonotope:
    if isinstance(tile, Zonotope):
        for z in tiling.elements:
            if z == tile:
                return z
        raise InvalidInput("tile is not an element of the tiling")
    t = tuple(int(s) for s in tile)
    if t not in tiling.tiles:
        raise InvalidInput(f"tile {sign_str(t)} is not in the tiling")
    return tiling.tile_zonotope(t)


def local_fan(tiling: Tiling, tile: Union[SignVec, Zonotope]) -> tuple[Fan, bool]:
    """The fan of cones spanned by the tiles containing ``tile``, seen from it.

    The cone toward a tile F' containing F is generated by the vertex
    directions of F' from the center of F, with lineality the span of F.
    The fan is complete iff its support is the whole ambient space; this is
    decided by the two-per-wall criterion on full-dimensional cones.
    """
    zf = _resolve_tile(tiling, tile)
    d = tiling.base.config.rank
    center = zf.center
    lineality, _ = saturation(
        hermite_basis([zf.config.vectors[e] for e in zf.free], ambient_dim=d)
    )
    cones = []
    seen = set()
    for g in tiling.elements:
        if not (_bbox_contains_point_range(g, zf) and all(zonotope_contains(g, p) for p in zf.vertices)):
            continue
        gens = []
        for p in g.vertices:
            vec = tuple(p[i] - center[i] for i in range(d))
            if any(vec):
                gens.append(vec)
        cone = Cone(d, tuple(sorted(set(gens))), lineality)
        if cone not in seen:
            seen.add(cone)
            cones.append(cone)
    cones.sort(key=lambda c: (c.dim, c.canonical))
    fan = Fan(d, tuple(cones))
    return fan, _fan_complete(fan)


def _bbox_contains_point_range(g: Zonotope, f: Zonotope) -> bool:
    return _bbox_inside(f, g)


def _fan_complete(fan: Fan) -> bool:
    d = fan.ambient_dim
    maximal = [c for c in fan.cones if c.dim == d]
    if not maximal:
        return False
    wall_cones = [c for c in fan.cones if c.dim == d - 1]
    adjacency: dict[int, set[int]] = {i: set() for i in range(len(maximal))}
    for w in wall_cones:
        holders = []
        for i, c in enumerate(maximal):
            if all(c.contains(g) for g in w.generators) and all(
                c.contains(b) and c.contains(tuple(-x for x in b)) for b in w.lineality.basis
            ):
                holders.append(i)
        if len(holders) != 2:
            return False
        adjacency[holders[0]].add(holders[1])
        adjacency[holders[1]].add(holders[0])
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in adjacency[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(maximal)


def is_refinement(finer: Tiling, coarser: Tiling) -> bool:
    """Whether every tile of the first tiling lies inside a tile of the second."""
    if finer.base != coarser.base:
        raise InvalidInput("refinement needs a common base zonotope")
    for f in finer.maximal_elements:
        if not any(
            all(zonotope_contains(g, p) for p in f.vertices) for g in coarser.maximal_elements
        ):
            return False
    return True


# ---------------------------------------------------------------------------
# adjacency of maximal tiles (shared by support-function machinery)


@lru_cache(maxsize=None)
def adjacent_maximal_pairs(tiling: Tiling) -> tuple[tuple[Zonotope, Zonotope], ...]:
    """Unordered pairs of maximal tiles meeting in a codimension-1 face."""
    out = []
    maximal = tiling.maximal_elements
    target = tiling.base.dim - 1
    for f, g in itertools.combinations(maximal, 2):
        status, face = common_face(f, g)
        if status == "face" and face.dim == target:
            out.append((f, g))
    return tuple(out)
