"""Hilbert bases of monoids of nonnegative lattice vectors.

The monoid at hand is N^n intersected with a sublattice of Z^n.  Its
minimal generating set (Hilbert basis) is computed by a completion
procedure over the conformal order: starting from a lattice basis and its
negatives, sums of pairs are reduced against the current set until
closure, which yields all conformally irreducible lattice vectors; the
nonnegative ones among them are exactly the Hilbert basis.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .lattice import ScaleGuardExceeded, SubLattice, Vec

COMPLETION_GUARD = 20000  # completion set size guard; desk scale only


def conformal_leq(x: Sequence[int], y: Sequence[int]) -> bool:
    """x is sign-compatible with y and componentwise no larger in magnitude."""
    return all(a * b >= 0 and abs(a) <= abs(b) for a, b in zip(x, y))


def _normal_form(v: tuple[int, ...], basis_set: list[Vec]) -> tuple[int, ...]:
    changed = True
    while changed and any(v):
        changed = False
        for g in basis_set:
            if g != v and conformal_leq(g, v):
                v = tuple(a - b for a, b in zip(v, g))
                changed = True
                break
    return v


def conformal_completion(generators: Sequence[Vec]) -> tuple[Vec, ...]:
    """All conformally irreducible vectors of the lattice they generate."""
    current: list[Vec] = []
    seen: set[Vec] = set()
    for g in generators:
        for v in (tuple(g), tuple(-x for x in g)):
            if any(v) and v not in seen:
                seen.add(v)
                current.append(v)
    queue = deque(
        tuple(a + b for a, b in zip(u, v))
        for i, u in enumerate(current)
        for v in current[i:]
    )
    while queue:
        s = queue.popleft()
        s = _normal_form(s, current)
        if not any(s) or s in seen:
            continue
        seen.add(s)
        for g in current:
            queue.append(tuple(a + b for a, b in zip(s, g)))
        current.append(s)
        if len(current) > COMPLETION_GUARD:
            raise ScaleGuardExceeded("conformal completion exceeded the desk-scale guard")
    # self-reduce to the irreducible elements
    irreducible = []
    for v in current:
        if not any(g != v and conformal_leq(g, v) for g in current):
            irreducible.append(v)
    return tuple(sorted(irreducible))


def hilbert_basis_nonneg(lattice: SubLattice) -> tuple[Vec, ...]:
    """Minimal generators of {x in the lattice : x >= 0 componentwise}.

    The monoid must be pointed, i.e. the lattice may contain no nonzero
    nonnegative vector together with its negative; this is automatic here
    because only the zero vector is both nonnegative and nonpositive.
    """
    if lattice.rank == 0:
        return ()
    complete = conformal_completion(lattice.basis)
    nonneg = [v for v in complete if all(x >= 0 for x in v)]
    basis = []
    for v in nonneg:
        if not any(w != v and all(a <= b for a, b in zip(w, v)) for w in nonneg):
            basis.append(v)
    return tuple(sorted(basis))
