"""Vector configurations, sign vectors, and integral zonotopes.

A configuration is an ordered tuple of integer vectors a_e in Z^d.  The
zonotope of a sign vector u in {+,-,0}^E is

    Z(a, u) = sum_{u_e = 0} [-1,1].a_e  +  sum_{u_e = +} a_e  -  sum_{u_e = -} a_e,

optionally shifted by an integral translation.  Faces of Z(a) are exactly
the Z(a, u) for u ranging over the covectors of the configuration, i.e. the
sign patterns of (m.a_e)_e realized by rational functionals m.

Sign vectors are tuples over {-1, 0, 1}; covector membership is decided by
exact rational feasibility, never by floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

from .lattice import (
    DimensionMismatch,
    LinearSystem,
    ScaleGuardExceeded,
    SubLattice,
    Vec,
    det_int,
    feasible_strict,
    hermite_basis,
    integer_row,
    primitive_vector,
    rational_rank,
    saturation,
    solve_linear,
)

SignVec = tuple[int, ...]

COVECTOR_GUARD = 12  # the 3^|E| covector sweep is exponential; desk scale only


class InvalidInput(ValueError):
    """Raised when an argument violates a documented precondition."""


def parse_sign(text: str) -> SignVec:
    table = {"+": 1, "-": -1, "0": 0}
    try:
        return tuple(table[ch] for ch in text)
    except KeyError as exc:
        raise InvalidInput(f"sign string may only contain '+-0': {text!r}") from exc


def sign_str(sign: Sequence[int]) -> str:
    table = {1: "+", -1: "-", 0: "0"}
    return "".join(table[s] for s in sign)


@dataclass(frozen=True)
class VectorConfig:
    """An ordered configuration of integer vectors in Z^rank."""

    rank: int
    vectors: tuple[Vec, ...]

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(tuple(int(x) for x in v) for v in self.vectors))
        for v in self.vectors:
            if len(v) != self.rank:
                raise DimensionMismatch(
                    f"vector {v} in a rank-{self.rank} configuration"
                )

    @property
    def size(self) -> int:
        return len(self.vectors)

    @cached_property
    def primitive(self) -> bool:
        import math

        return all(v != (0,) * self.rank and math.gcd(*(abs(x) for x in v)) == 1 for v in self.vectors)

    @cached_property
    def spanning(self) -> bool:
        return rational_rank(self.vectors) == self.rank


@dataclass(frozen=True)
class ConfigFlags:
    primitive: bool
    spanning: bool


def validate_config(config: VectorConfig) -> ConfigFlags:
    """Exact primitivity and spanning flags for a configuration."""
    return ConfigFlags(primitive=config.primitive, spanning=config.spanning)


# ---------------------------------------------------------------------------
# covector enumeration (cached per configuration and support)


def _sign_system(config: VectorConfig, indices: Sequence[int], signs: Sequence[int]) -> LinearSystem:
    strict = []
    eqs = []
    for e, s in zip(indices, signs):
        a = config.vectors[e]
        if s == 0:
            eqs.append(a)
        else:
            strict.append(tuple(s * x for x in a))
    return LinearSystem(config.rank, strict=tuple(strict), equalities=tuple(eqs))


@lru_cache(maxsize=None)
def _covector_data(config: VectorConfig, free: tuple[int, ...]) -> tuple[tuple[SignVec, Vec], ...]:
    """All covectors of the restriction of ``config`` to ``free``.

    Returns (sign vector over free, primitive integer witness functional)
    pairs, sorted.  The sweep over 3^|free| candidates is pruned on
    infeasible prefixes, which changes nothing about the output.
    """
    if len(free) > COVECTOR_GUARD:
        raise ScaleGuardExceeded(
            f"covector sweep over 3^{len(free)} candidates exceeds the guard of {COVECTOR_GUARD}"
        )
    found: list[tuple[SignVec, Vec]] = []

    def extend(prefix: list[int]) -> None:
        witness = feasible_strict(_sign_system(config, free[: len(prefix)], prefix))
        if witness is None:
            return
        if len(prefix) == len(free):
            found.append((tuple(prefix), primitive_vector(witness)))
            return
        # first nonzero entry is forced positive; negations are added below
        options = (0, 1) if all(s == 0 for s in prefix) else (0, 1, -1)
        for s in options:
            extend(prefix + [s])

    extend([])
    full = {sv: w for sv, w in found}
    for sv, w in found:
        neg = tuple(-s for s in sv)
        if neg not in full:
            full[neg] = tuple(-x for x in w)
    return tuple(sorted(full.items()))


def covectors(config: VectorConfig) -> frozenset[SignVec]:
    """The set of sign patterns of rational functionals on the configuration.

    Closed under negation and always contains the zero sign vector.
    """
    data = _covector_data(config, tuple(range(config.size)))
    return frozenset(sv for sv, _ in data)


def is_covector(config: VectorConfig, sign: Sequence[int]) -> bool:
    system = _sign_system(config, range(config.size), tuple(sign))
    return feasible_strict(system) is not None


@lru_cache(maxsize=None)
def _vertex_data(config: VectorConfig, free: tuple[int, ...]) -> tuple[tuple[SignVec, Vec], ...]:
    """Full-support covectors over ``free`` with their endpoint offsets.

    Each entry is (epsilon, sum_e epsilon_e a_e); these are the vertices of
    the centered zonotope of the restricted configuration.
    """
    for e in free:
        if config.vectors[e] == (0,) * config.rank:
            raise InvalidInput("zonotope operations need nonzero generators")
    found: list[SignVec] = []

    def extend(prefix: list[int]) -> None:
        if feasible_strict(_sign_system(config, free[: len(prefix)], prefix)) is None:
            return
        if len(prefix) == len(free):
            found.append(tuple(prefix))
            return
        options = (1,) if not prefix else (1, -1)
        for s in options:
            extend(prefix + [s])

    if free:
        extend([])
    else:
        found.append(())
    out = []
    for eps in found:
        offset = tuple(
            sum(e * config.vectors[f][i] for e, f in zip(eps, free)) for i in range(config.rank)
        )
        out.append((eps, offset))
        if any(eps):
            out.append((tuple(-e for e in eps), tuple(-x for x in offset)))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _subset_rank(config: VectorConfig, free: tuple[int, ...]) -> int:
    return rational_rank([config.vectors[e] for e in free])


@lru_cache(maxsize=None)
def _subset_volume(config: VectorConfig, free: tuple[int, ...]) -> int:
    """Lattice-normalized volume of the centered zonotope on ``free``.

    Relative to the lattice N intersected with the linear span, so that an
    edge of lattice length L has volume 2L and a point has volume 1.
    """
    vecs = [config.vectors[e] for e in free]
    span = hermite_basis(vecs, ambient_dim=config.rank)
    k = span.rank
    if k == 0:
        return 1
    basis, _ = saturation(span)
    columns = [list(col) for col in zip(*basis.basis)]
    coords = []
    for v in vecs:
        sol = solve_linear(columns, v)
        assert sol is not None and all(c.denominator == 1 for c in sol)
        coords.append([int(c) for c in sol])
    total = 0
    for subset in itertools.combinations(range(len(vecs)), k):
        total += abs(det_int([coords[i] for i in subset]))
    return (2 ** k) * total


@dataclass(frozen=True, eq=False)
class Zonotope:
    """Z(a, u) + translation for a configuration a and sign vector u.

    Two zonotopes compare equal iff their vertex sets coincide, regardless
    of how they are presented.
    """

    config: VectorConfig
    sign: SignVec
    translation: Vec = ()

    def __post_init__(self):
        object.__setattr__(self, "sign", tuple(int(s) for s in self.sign))
        if len(self.sign) != self.config.size:
            raise DimensionMismatch("sign vector length differs from configuration size")
        if any(s not in (-1, 0, 1) for s in self.sign):
            raise InvalidInput("sign entries must be -1, 0, or +1")
        tr = tuple(int(x) for x in self.translation) if self.translation else (0,) * self.config.rank
        if len(tr) != self.config.rank:
            raise DimensionMismatch("translation length differs from configuration rank")
        object.__setattr__(self, "translation", tr)

    @cached_property
    def free(self) -> tuple[int, ...]:
        return tuple(e for e, s in enumerate(self.sign) if s == 0)

    @cached_property
    def center(self) -> Vec:
        c = list(self.translation)
        for e, s in enumerate(self.sign):
            if s:
                for i in range(self.config.rank):
                    c[i] += s * self.config.vectors[e][i]
        return tuple(c)

    @cached_property
    def dim(self) -> int:
        return _subset_rank(self.config, self.free)

    @cached_property
    def vertex_patterns(self) -> tuple[tuple[Vec, SignVec], ...]:
        """Sorted (vertex, full sign pattern over E) pairs."""
        out = {}
        for eps, offset in _vertex_data(self.config, self.free):
            point = tuple(c + o for c, o in zip(self.center, offset))
            full = list(self.sign)
            for s, e in zip(eps, self.free):
                full[e] = s
            out.setdefault(point, tuple(full))
        return tuple(sorted(out.items()))

    @cached_property
    def vertices(self) -> tuple[Vec, ...]:
        return tuple(p for p, _ in self.vertex_patterns)

    @cached_property
    def vertex_set(self) -> frozenset[Vec]:
        return frozenset(self.vertices)

    @cached_property
    def volume(self) -> int:
        return _subset_volume(self.config, self.free)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Zonotope):
            return NotImplemented
        return self.vertex_set == other.vertex_set

    def __hash__(self) -> int:
        return hash(self.vertex_set)

    def __repr__(self) -> str:
        return f"Zonotope(sign={sign_str(self.sign)!r}, translation={self.translation})"


def compose_sign(base_sign: Sequence[int], sub_sign: Sequence[int], free: Sequence[int]) -> SignVec:
    """Fill the zero entries of ``base_sign`` at ``free`` with ``sub_sign``."""
    full = list(base_sign)
    for s, e in zip(sub_sign, free):
        full[e] = s
    return tuple(full)


def _faces(z: Zonotope) -> tuple[Zonotope, ...]:
    """Face enumeration without the covector precondition (any sign vector)."""
    seen: dict[Zonotope, Zonotope] = {}
    for v, _ in _covector_data(z.config, z.free):
        f = Zonotope(z.config, compose_sign(z.sign, v, z.free), z.translation)
        seen.setdefault(f, f)
    return tuple(sorted(seen.values(), key=lambda f: (f.dim, f.vertices)))


def faces(z: Zonotope) -> tuple[Zonotope, ...]:
    """All faces of the zonotope, deduplicated by vertex set.

    The empty set is not a face.  Faces are the zonotopes of the covectors
    of the restricted configuration, composed with the defining sign vector;
    a zonotope presented as a face of Z(a) must carry a covector sign.
    """
    if any(z.sign) and not is_covector(z.config, z.sign):
        raise InvalidInput("sign vector is not a covector of the configuration")
    return _faces(z)


def face_supports(z: Zonotope) -> tuple[tuple[Zonotope, Vec, int], ...]:
    """(face, supporting functional m, support value h) triples.

    m is a primitive integer functional with m.x <= h on the zonotope and
    equality exactly on the face.  One representative per geometric face.
    """
    out: dict[Zonotope, tuple[Zonotope, Vec, int]] = {}
    for v, m in _covector_data(z.config, z.free):
        f = Zonotope(z.config, compose_sign(z.sign, v, z.free), z.translation)
        if f in out:
            continue
        h = sum(m[i] * z.center[i] for i in range(z.config.rank))
        for e in z.free:
            h += abs(sum(m[i] * z.config.vectors[e][i] for i in range(z.config.rank)))
        out[f] = (f, m, h)
    return tuple(out.values())


def vertices_and_volume(z: Zonotope) -> tuple[tuple[Vec, ...], int]:
    """Vertex list plus lattice-normalized volume (Euclidean when full-dim)."""
    return z.vertices, z.volume


def classify_block(z: Zonotope) -> str:
    """'cube', 'parallelotope', or 'general'.

    Parallelotope: the free generators are linearly independent over Q.
    Cube: they additionally form a basis of the lattice points of their
    span (saturation index 1).  A point is a cube.
    """
    vecs = [z.config.vectors[e] for e in z.free]
    if not vecs:
        return "cube"
    span = hermite_basis(vecs, ambient_dim=z.config.rank)
    if span.rank < len(vecs):
        return "general"
    _, index = saturation(span)
    return "cube" if index == 1 else "parallelotope"


# ---------------------------------------------------------------------------
# exact membership tests


@lru_cache(maxsize=None)
def _normal_pool(config: VectorConfig) -> tuple[Vec, ...]:
    """Primitive normals of all hyperplanes spanned by rank-(d-1) subsets.

    Every facet normal of every full-dimensional sub-zonotope of the
    configuration appears in this pool, and each pool vector gives a valid
    support inequality, so the pool yields exact H-representations.
    """
    from .lattice import kernel_lattice

    d = config.rank
    normals: set[Vec] = set()
    for subset in itertools.combinations(range(config.size), d - 1):
        rows = [config.vectors[e] for e in subset]
        if rational_rank(rows) != d - 1:
            continue
        kern = kernel_lattice(rows, cols=d)
        if kern.rank == 1:
            m = kern.basis[0]
            normals.add(max(m, tuple(-x for x in m)))
    return tuple(sorted(normals))


def _hrep_contains(z: Zonotope, point: Sequence, strict: bool) -> bool:
    """Membership via support inequalities; valid only when z is full-dim."""
    d = z.config.rank
    delta = [Fraction(point[i]) - z.center[i] for i in range(d)]
    for m in _normal_pool(z.config):
        value = sum(m[i] * delta[i] for i in range(d))
        bound = sum(
            abs(sum(m[i] * z.config.vectors[e][i] for i in range(d))) for e in z.free
        )
        if strict:
            if not -bound < value < bound:
                return False
        elif not -bound <= value <= bound:
            return False
    return True


def _membership_system(z: Zonotope, point: Sequence, strict: bool) -> LinearSystem:
    """Homogenized system for point membership: variables (t_e for free e, tau)."""
    f = len(z.free)
    d = z.config.rank
    eqs = []
    for i in range(d):
        row = [Fraction(z.config.vectors[e][i]) for e in z.free]
        row.append(Fraction(z.center[i]) - Fraction(point[i]))
        eqs.append(integer_row(row))
    box = []
    for j in range(f):
        row = [0] * (f + 1)
        row[j], row[f] = -1, 1
        box.append(tuple(row))
        row = [0] * (f + 1)
        row[j], row[f] = 1, 1
        box.append(tuple(row))
    tau_pos = tuple([0] * f + [1])
    if strict:
        return LinearSystem(f + 1, strict=tuple(box) + (tau_pos,), equalities=tuple(eqs))
    return LinearSystem(f + 1, strict=(tau_pos,), weak=tuple(box), equalities=tuple(eqs))


def zonotope_contains(z: Zonotope, point: Sequence, strict: bool = False) -> bool:
    """Exact membership; with strict=True, membership in the relative interior."""
    if len(point) != z.config.rank:
        raise DimensionMismatch("point dimension differs from configuration rank")
    if z.dim == z.config.rank:
        return _hrep_contains(z, point, strict)
    return feasible_strict(_membership_system(z, point, strict)) is not None


def locate_box_coordinates(z: Zonotope, point: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Coordinates t over all of E with point = translation + sum t_e a_e.

    Fixed entries carry the defining signs; free entries lie in [-1, 1].
    Returns None when the point is outside the zonotope.
    """
    witness = feasible_strict(_membership_system(z, point, strict=False))
    if witness is None:
        return None
    f = len(z.free)
    tau = witness[f]
    t = [Fraction(s) for s in z.sign]
    for j, e in enumerate(z.free):
        t[e] = witness[j] / tau
    return tuple(t)
