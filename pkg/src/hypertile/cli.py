"""Command-line front end: JSON in, deterministic reports out.

Input documents describe a configuration, an optional base sign vector and
translation, and optionally a lift or an explicit tile list (sign strings
in normal form, or raw vertex lists that are matched against candidate
sign vectors).  Reports are JSON with sorted keys; rank-2 tilings can be
rendered to SVG.  Exit codes: 0 success, 1 mathematical negative under
--strict, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .hypertoric import (
    class_groups,
    classify_divisor,
    extended_core,
    geometry_flags,
    invariant_ring_data,
    is_hypertoric,
    lawrence_fan,
    weight_profile,
)
from .lattice import DimensionMismatch, ScaleGuardExceeded, SubLattice
from .support import convexity, eval_support, regularity, tiling_lattices
from .tiling import Tiling, close_tiles, enumerate_tilings, tiling_from_lift, trivial_tiling, validate_tiling
from .zonotope import (
    InvalidInput,
    VectorConfig,
    Zonotope,
    classify_block,
    covectors,
    faces,
    parse_sign,
    sign_str,
    vertices_and_volume,
)


class InputError(ValueError):
    """Raised for malformed documents; reported with exit code 2."""


def _fmt(value):
    """JSON-friendly deterministic rendering of exact values."""
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, SubLattice):
        return {"ambient_dim": value.ambient_dim, "basis": [list(b) for b in value.basis]}
    if isinstance(value, dict):
        return {k: _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    return value


def _emit(report: dict) -> None:
    print(json.dumps(_fmt(report), sort_keys=True, indent=2))


class Problem:
    """A parsed input document."""

    def __init__(self, doc: dict):
        if not isinstance(doc, dict):
            raise InputError("document must be a JSON object")
        try:
            rank = int(doc["rank"])
            vectors = tuple(tuple(int(x) for x in v) for v in doc["vectors"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"document needs integral 'rank' and 'vectors': {exc}") from exc
        try:
            self.config = VectorConfig(rank, vectors)
        except (DimensionMismatch, InvalidInput) as exc:
            raise InputError(str(exc)) from exc
        size = self.config.size
        sign = doc.get("sign")
        self.sign = parse_sign(sign) if sign is not None else (0,) * size
        if len(self.sign) != size:
            raise InputError("sign length differs from the number of vectors")
        translation = doc.get("translation")
        self.translation = (
            tuple(int(x) for x in translation) if translation is not None else (0,) * rank
        )
        try:
            self.base = Zonotope(self.config, self.sign, self.translation)
        except (DimensionMismatch, InvalidInput) as exc:
            raise InputError(str(exc)) from exc
        self.lift = tuple(int(x) for x in doc["lift"]) if "lift" in doc else None
        self.tiles = [str(s) for s in doc["tiles"]] if "tiles" in doc else None
        self.tile_polytopes = doc.get("tile_polytopes")
        self.closed = bool(doc.get("closed", False))

    def tiling(self) -> Tiling:
        """The tiling the document describes (explicit tiles, lift, or trivial)."""
        if self.tiles is not None or self.tile_polytopes is not None:
            signs = []
            free = self.base.free
            for s in self.tiles or []:
                sv = parse_sign(s)
                if len(sv) != len(free):
                    raise InputError(
                        f"tile {s!r} must have one entry per free index ({len(free)})"
                    )
                signs.append(sv)
            for poly in self.tile_polytopes or []:
                signs.append(self._match_polytope(poly))
            if self.closed:
                return Tiling(self.base, frozenset(signs))
            return close_tiles(self.base, signs)
        if self.lift is not None:
            if len(self.lift) != self.config.size:
                raise InputError("lift length differs from the number of vectors")
            tiling, _ = tiling_from_lift(self.config, self.lift)
            if any(self.translation) or any(self.sign):
                raise InputError("lifts apply to untranslated full zonotopes only")
            return tiling
        return trivial_tiling(self.base)

    def _match_polytope(self, poly) -> tuple[int, ...]:
        try:
            target = frozenset(tuple(int(x) for x in p) for p in poly)
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed tile polytope: {exc}") from exc
        free = self.base.free
        import itertools

        for pattern in itertools.product((0, 1, -1), repeat=len(free)):
            candidate = self.base.config
            from .zonotope import compose_sign

            z = Zonotope(
                candidate, compose_sign(self.base.sign, pattern, free), self.base.translation
            )
            if z.vertex_set == target:
                return pattern
        raise InputError(f"tile polytope {sorted(target)} is not a sign-vector tile of the base")


def _load(path: str) -> Problem:
    try:
        with open(path) as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc
    return Problem(doc)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_faces(problem: Problem) -> dict:
    fs = faces(problem.base)
    return {
        "count": len(fs),
        "by_dimension": {
            str(d): sum(1 for f in fs if f.dim == d) for d in sorted({f.dim for f in fs})
        },
        "faces": [
            {"sign": sign_str(f.sign), "dim": f.dim, "vertices": [list(v) for v in f.vertices]}
            for f in fs
        ],
    }


def _cmd_covectors(problem: Problem) -> dict:
    cvs = sorted(covectors(problem.config))
    return {"count": len(cvs), "covectors": [sign_str(v) for v in cvs]}


def _cmd_tile_from_lift(problem: Problem) -> dict:
    if problem.lift is None:
        raise InputError("tile-from-lift needs a 'lift' entry")
    tiling, envelope = tiling_from_lift(problem.config, problem.lift)
    return {
        "tiles": [sign_str(t) for t in tiling.sorted_tiles],
        "maximal_tiles": sorted(
            sign_str(t)
            for t in tiling.sorted_tiles
            if tiling.tile_zonotope(t) in set(tiling.maximal_elements)
        ),
        "vertices": [list(v) for v in tiling.vertices],
        "envelope": {",".join(map(str, k)): v for k, v in sorted(envelope.items())},
    }


def _cmd_enumerate(problem: Problem) -> dict:
    tilings = enumerate_tilings(problem.config)
    summaries = []
    regular_count = 0
    for t in tilings:
        witness = regularity(t)
        if witness is not None:
            regular_count += 1
        kinds = sorted({classify_block(z) for z in t.maximal_elements})
        summaries.append(
            {
                "maximal_tiles": sorted(
                    sign_str(tuple(s)) for s in {tuple(z.sign) for z in t.maximal_elements}
                ),
                "maximal_count": len(t.maximal_elements),
                "tile_kinds": kinds,
                "regular": witness is not None,
            }
        )
    return {
        "count": len(tilings),
        "regular_count": regular_count,
        "tilings": summaries,
    }


def _cmd_validate(problem: Problem) -> dict:
    tiling = problem.tiling()
    violations = validate_tiling(tiling)
    return {"valid": not violations, "violations": list(violations)}


def _cmd_regularity(problem: Problem) -> dict:
    tiling = problem.tiling()
    witness = regularity(tiling)
    if witness is None:
        return {"regular": False, "detail": "irregular: strict wall system infeasible"}
    return {"regular": True, "witness": list(witness)}


def _cmd_support_lattice(problem: Problem) -> dict:
    lattices = tiling_lattices(problem.tiling())
    return {
        "relations": lattices.relations,
        "tile_relations": lattices.tile_relations,
        "support_lattice": lattices.support_lattice,
    }


def _cmd_classify_divisor(problem: Problem, coeffs: Sequence[int]) -> dict:
    report = classify_divisor(problem.tiling(), coeffs)
    return {
        "coefficients": list(coeffs),
        "cartier": report.cartier,
        "trivial": report.trivial,
        "nef": report.nef,
        "ample": report.ample,
        "label": report.label,
    }


def _cmd_core_report(problem: Problem) -> dict:
    tiling = problem.tiling()
    core = extended_core(tiling)
    hyper, reasons = is_hypertoric(tiling)
    return {
        "weight_profile": weight_profile(tiling.base),
        "hypertoric": hyper,
        "hypertoric_obstructions": list(reasons),
        "core_nonempty": core.core_nonempty,
        "component_count": len(core.components),
        "irreducible_count": len(core.irreducible),
        "components": [
            {
                "tile": sign_str(c.tile),
                "dim": c.zonotope.dim,
                "proper": c.is_proper,
                "in_core": c.in_core,
                "gm_weight": list(c.gm_weight) if c.gm_weight is not None else None,
            }
            for c in core.components
        ],
    }


def _cmd_class_groups(problem: Problem) -> dict:
    groups = class_groups(problem.tiling())
    return {
        "equivariant_class_rank": groups.equivariant_rank,
        "forget_kernel": groups.forget_kernel,
        "class_group": {
            "invariant_factors": list(groups.class_invariant_factors),
            "free_rank": groups.class_free_rank,
        },
        "picard": groups.picard,
    }


def _cmd_geometry_flags(problem: Problem) -> dict:
    flags = geometry_flags(problem.tiling())
    return {
        "smooth": flags.smooth,
        "qfactorial_terminal_sufficient": flags.qfactorial_terminal_sufficient,
        "projective_over_affinization": flags.projective_over_affinization,
    }


def _cmd_lawrence_fan(problem: Problem) -> dict:
    data = lawrence_fan(problem.tiling())
    return {
        "ambient_rank": data.ambient_rank,
        "rays_plus": [list(r) for r in data.rays_plus],
        "rays_minus": [list(r) for r in data.rays_minus],
        "base_extremal_rays": [list(r) for r in data.base_extremal_rays],
        "cone_count": len(data.fan.cones),
        "cones": [
            {"tile": sign_str(t), "rays": [list(r) for r in c.canonical[1]]}
            for t, c in zip(data.fan_tiles, data.fan.cones)
        ],
    }


def _cmd_ring_generators(problem: Problem) -> dict:
    data = invariant_ring_data(problem.config, problem.sign)
    return {
        "units": data.units,
        "generators": [
            {
                "monomial": g.monomial(),
                "upper": list(g.upper),
                "lower": list(g.lower),
                "torus_weight": list(g.torus_weight),
                "gm_weight": g.gm_weight,
            }
            for g in data.generators
        ],
        "moment_relations": [list(r) for r in data.moment_relations],
    }


# ---------------------------------------------------------------------------
# SVG rendering

SVG_SCALE = 40
SVG_MARGIN = 20
SVG_MARK_RADIUS = 4


def _ccw_order(points: Sequence[tuple[int, int]], center: tuple[Fraction, Fraction]):
    import functools

    def half(p):
        dx, dy = p[0] - center[0], p[1] - center[1]
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        ax, ay = a[0] - center[0], a[1] - center[1]
        bx, by = b[0] - center[0], b[1] - center[1]
        cross = ax * by - ay * bx
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(points, key=functools.cmp_to_key(cmp))


def render_svg(tiling: Tiling, path: str) -> None:
    """Write a rank-2 tiling as an SVG file (one polygon per maximal tile)."""
    if tiling.base.config.rank != 2:
        raise InvalidInput("SVG rendering supports rank-2 configurations only")
    base_vertices = tiling.base.vertices
    xs = [p[0] for p in base_vertices]
    ys = [p[1] for p in base_vertices]
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)

    def to_screen(p) -> tuple[int, int]:
        return (
            int((p[0] - minx) * SVG_SCALE) + SVG_MARGIN,
            int((maxy - p[1]) * SVG_SCALE) + SVG_MARGIN,
        )

    width = (maxx - minx) * SVG_SCALE + 2 * SVG_MARGIN
    height = (maxy - miny) * SVG_SCALE + 2 * SVG_MARGIN
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for z in sorted(tiling.maximal_elements, key=lambda z: z.vertices):
        center = (Fraction(sum(p[0] for p in z.vertices), len(z.vertices)),
                  Fraction(sum(p[1] for p in z.vertices), len(z.vertices)))
        ring = _ccw_order(list(z.vertices), center)
        pts = " ".join("%d,%d" % to_screen(p) for p in ring)
        lines.append(
            f'  <polygon points="{pts}" fill="none" stroke="black" stroke-width="2"/>'
        )
    for v in tiling.vertices:
        x, y = to_screen(v)
        lines.append(f'  <circle cx="{x}" cy="{y}" r="{SVG_MARK_RADIUS}" fill="black"/>')
    lines.append("</svg>")
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")


def _cmd_render_svg(problem: Problem, out: str) -> dict:
    tiling = problem.tiling()
    render_svg(tiling, out)
    return {
        "output": out,
        "polygons": len(tiling.maximal_elements),
        "vertex_marks": len(tiling.vertices),
    }


# ---------------------------------------------------------------------------
# dispatch

_COMMANDS = {
    "faces": _cmd_faces,
    "covectors": _cmd_covectors,
    "tile-from-lift": _cmd_tile_from_lift,
    "enumerate-tilings": _cmd_enumerate,
    "validate-tiling": _cmd_validate,
    "regularity": _cmd_regularity,
    "support-lattice": _cmd_support_lattice,
    "core-report": _cmd_core_report,
    "class-groups": _cmd_class_groups,
    "geometry-flags": _cmd_geometry_flags,
    "lawrence-fan": _cmd_lawrence_fan,
    "ring-generators": _cmd_ring_generators,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypertile",
        description="Exact zonotopal tilings and their hypertoric invariants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in sorted(_COMMANDS):
        p = sub.add_parser(name)
        p.add_argument("input")
        p.add_argument("--strict", action="store_true")
    p = sub.add_parser("classify-divisor")
    p.add_argument("input")
    p.add_argument("-r", "--divisor", required=True, help="comma-separated integers")
    p.add_argument("--strict", action="store_true")
    p = sub.add_parser("render-svg")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--strict", action="store_true")
    return parser


def run_command(argv: Sequence[str]) -> int:
    """Execute a CLI invocation; returns the exit code."""
    try:
        args = _parser().parse_args(list(argv))
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        problem = _load(args.input)
        if args.command == "classify-divisor":
            try:
                coeffs = tuple(int(x) for x in args.divisor.split(","))
            except ValueError as exc:
                raise InputError(f"malformed divisor coefficients: {args.divisor!r}") from exc
            report = _cmd_classify_divisor(problem, coeffs)
        elif args.command == "render-svg":
            report = _cmd_render_svg(problem, args.output)
        else:
            report = _COMMANDS[args.command](problem)
    except (InputError, InvalidInput, DimensionMismatch, ScaleGuardExceeded) as exc:
        print(f"hypertile: {exc}", file=sys.stderr)
        return 2
    _emit(report)
    if args.strict:
        if args.command == "regularity" and not report.get("regular", True):
            return 1
        if args.command == "validate-tiling" and not report.get("valid", True):
            return 1
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
