"""Support functions on a tiling and the regularity decision.

The relation lattice of a configuration is the kernel of Z^E -> Z^d.  Each
tile contributes the sublattice of relations supported on its free
indices; the sum of these over all tiles is the tile-relation lattice, and
its perpendicular inside Z^E is the lattice of support functions.  An
integer vector r perpendicular to every tile relation defines a function
on the base zonotope: write a point of a tile as a signed box combination
of the generators and take the dot product with r.  The choice of
combination does not matter precisely because r kills the tile relations.

Convexity is decided wall by wall: across each pair of adjacent maximal
tiles, compare the value of the incoming tile's combination with the
value of a combination constrained to the outgoing tile.  A tiling is
regular iff some r makes every wall comparison strictly positive, which
is a rational strict-feasibility problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .lattice import (
    LinearSystem,
    SubLattice,
    Vec,
    feasible_strict,
    kernel_lattice,
    lattice_sum,
    perp_lattice,
    primitive_vector,
    solve_linear,
)
from .tiling import Tiling, adjacent_maximal_pairs
from .zonotope import InvalidInput, Zonotope, zonotope_contains

NONCONVEX = "nonconvex"
CONVEX = "convex"
STRICTLY_CONVEX = "strictly_convex"


@dataclass(frozen=True)
class TilingLattices:
    relations: SubLattice       # kernel of the configuration map on Z^E
    tile_relations: SubLattice  # sum of the relation lattices of the tiles
    support_lattice: SubLattice  # perpendicular of tile_relations; hosts support functions


def _config_rows(config) -> list[Vec]:
    return [tuple(config.vectors[e][i] for e in range(config.size)) for i in range(config.rank)]


def tiling_lattices(tiling: Tiling) -> TilingLattices:
    """The relation, tile-relation, and support-function lattices of a tiling."""
    config = tiling.base.config
    size = config.size
    relations = kernel_lattice(_config_rows(config), cols=size)
    pieces = []
    for tile in tiling.sorted_tiles:
        z = tiling.tile_zonotope(tile)
        free = z.free
        if not free:
            continue
        rows = [tuple(config.vectors[e][i] for e in free) for i in range(config.rank)]
        local = kernel_lattice(rows, cols=len(free))
        embedded = []
        for vec in local.basis:
            full = [0] * size
            for value, e in zip(vec, free):
                full[e] = value
            embedded.append(tuple(full))
        if embedded:
            pieces.append(embedded)
    gens = [v for piece in pieces for v in piece]
    from .lattice import hermite_basis

    tile_relations = hermite_basis(gens, ambient_dim=size)
    return TilingLattices(relations, tile_relations, perp_lattice(tile_relations))


def _box_solution(z: Zonotope, point: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Coordinates over E with the tile's fixed signs; free entries unconstrained.

    Sound for evaluating support functions at points of the tile: the value
    r.t is choice-independent for r in the support lattice.
    """
    config = z.config
    columns = [[config.vectors[e][i] for e in z.free] for i in range(config.rank)]
    rhs = [Fraction(point[i]) - z.center[i] for i in range(config.rank)]
    sol = solve_linear(columns, rhs)
    if sol is None:
        return None
    t = [Fraction(s) for s in z.sign]
    for value, e in zip(sol, z.free):
        t[e] = value
    return tuple(t)


def eval_support(tiling: Tiling, coeffs: Sequence[int], point: Sequence) -> Fraction:
    """Evaluate the support function of ``coeffs`` at a point of the base."""
    lattices = tiling_lattices(tiling)
    if not lattices.support_lattice.contains(coeffs):
        raise InvalidInput("coefficient vector is not perpendicular to the tile relations")
    if len(point) != tiling.base.config.rank:
        raise InvalidInput("point dimension differs from the configuration rank")
    for z in sorted(tiling.maximal_elements, key=lambda f: f.vertices):
        if zonotope_contains(z, point):
            t = _box_solution(z, point)
            assert t is not None
            return sum(Fraction(c) * v for c, v in zip(coeffs, t))
    raise InvalidInput("point lies outside the base zonotope")


def _wall_comparisons(tiling: Tiling) -> tuple[tuple[Fraction, ...], ...]:
    """One difference vector t' - t per oriented adjacent pair of maximal tiles.

    t is the vertex combination of a vertex of the first tile outside the
    second; t' solves the same point inside the second tile's sign pattern.
    For r in the support lattice, r.(t'-t) is the wall convexity margin.
    """
    rows = []
    for f, g in adjacent_maximal_pairs(tiling):
        for first, second in ((f, g), (g, f)):
            eta = None
            pattern = None
            for point, pat in first.vertex_patterns:
                if not zonotope_contains(second, point):
                    eta = point
                    pattern = pat
                    break
            assert eta is not None, "distinct maximal tiles share every vertex"
            t = tuple(Fraction(s) for s in pattern)
            t_prime = _box_solution(second, eta)
            assert t_prime is not None, "adjacent tile spans must reach the vertex"
            rows.append(tuple(a - b for a, b in zip(t_prime, t)))
    return tuple(rows)


def convexity(tiling: Tiling, coeffs: Sequence[int]) -> str:
    """'nonconvex', 'convex', or 'strictly_convex' for a support function."""
    lattices = tiling_lattices(tiling)
    if not lattices.support_lattice.contains(coeffs):
        raise InvalidInput("coefficient vector is not perpendicular to the tile relations")
    values = [
        sum(Fraction(c) * d for c, d in zip(coeffs, row)) for row in _wall_comparisons(tiling)
    ]
    if any(v < 0 for v in values):
        return NONCONVEX
    if all(v > 0 for v in values):
        return STRICTLY_CONVEX
    return CONVEX


def regularity(tiling: Tiling) -> Optional[Vec]:
    """A primitive integral lift certifying regularity, or None when irregular.

    The certificate solves the homogeneous system "perpendicular to every
    tile relation, strictly positive across every wall"; feasibility over
    the rationals is equivalent to feasibility over the reals.
    """
    lattices = tiling_lattices(tiling)
    strict_rows = []
    seen = set()
    for row in _wall_comparisons(tiling):
        scaled = primitive_vector(row)
        if scaled not in seen:
            seen.add(scaled)
            strict_rows.append(scaled)
    system = LinearSystem(
        tiling.base.config.size,
        strict=tuple(strict_rows),
        equalities=lattices.tile_relations.basis,
    )
    witness = feasible_strict(system)
    if witness is None:
        return None
    return primitive_vector(witness)
