"""Exact integer and rational linear algebra.

Everything in this module works over arbitrary-precision integers and
fractions; no floating point enters any decision path.  The two pillars are

* canonical sublattices of Z^n (Hermite normal form bases, kernels,
  perpendiculars, saturation), and
* strict/weak/equality feasibility of homogeneous rational systems,
  decided by an exact phase-one simplex.

A homogeneous system with strict rows ``a.x > 0`` is feasible over the
rationals iff the scaled system ``a.x >= 1`` is, so strict feasibility
reduces to ordinary LP feasibility without any epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vec = tuple[int, ...]


class DimensionMismatch(ValueError):
    """Raised when vectors of inconsistent dimensions are combined."""


class ScaleGuardExceeded(ValueError):
    """Raised when an input exceeds the documented desk-scale guard."""


def _as_vec(v: Iterable[int]) -> Vec:
    return tuple(int(x) for x in v)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = x*a + y*b."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _hnf_rows(rows: list[list[int]]) -> list[list[int]]:
    """Reduce integer rows to the canonical row-echelon Hermite form.

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot), and zero rows are dropped.  The result depends only on the
    lattice generated by the input rows.
    """
    mat = [list(r) for r in rows]
    m = len(mat)
    n = len(mat[0]) if m else 0
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        for i in range(r + 1, m):
            b = mat[i][c]
            if b == 0:
                continue
            a = mat[r][c]
            g, x, y = _xgcd(a, b)
            u, v = a // g, b // g
            row_r, row_i = mat[r], mat[i]
            for k in range(c, n):
                rk, ik = row_r[k], row_i[k]
                row_r[k] = x * rk + y * ik
                row_i[k] = -v * rk + u * ik
        if mat[r][c] < 0:
            mat[r] = [-x for x in mat[r]]
        r += 1
    mat = mat[:r]
    # reduce entries above each pivot
    pivots = []
    for row in mat:
        c = next(j for j, x in enumerate(row) if x)
        pivots.append(c)
    for i in range(len(mat) - 1, -1, -1):
        c = pivots[i]
        p = mat[i][c]
        for j in range(i):
            q = mat[j][c] // p
            if q:
                mat[j] = [a - q * b for a, b in zip(mat[j], mat[i])]
    return mat


@dataclass(frozen=True)
class SubLattice:
    """An integral sublattice of Z^n, held in canonical Hermite form.

    Two SubLattice values describe the same lattice iff they compare equal,
    which makes lattice identities directly testable.
    """

    ambient_dim: int
    basis: tuple[Vec, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    def contains(self, vector: Sequence[int]) -> bool:
        v = list(_as_vec(vector))
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(
                f"vector of length {len(v)} in ambient dimension {self.ambient_dim}"
            )
        for row in self.basis:
            c = next(j for j, x in enumerate(row) if x)
            if v[c] % row[c]:
                return False
            q = v[c] // row[c]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    def __contains__(self, vector: Sequence[int]) -> bool:
        return self.contains(vector)


def hermite_basis(vectors: Iterable[Sequence[int]], ambient_dim: Optional[int] = None) -> SubLattice:
    """Canonical basis of the lattice generated over Z by ``vectors``.

    The output is generation-invariant: any generating set of the same
    lattice produces an identical SubLattice.
    """
    vecs = [_as_vec(v) for v in vectors]
    if vecs:
        n = len(vecs[0])
        if any(len(v) != n for v in vecs):
            raise DimensionMismatch("generators of mixed dimensions")
        if ambient_dim is not None and ambient_dim != n:
            raise DimensionMismatch(
                f"generators of length {n} with ambient_dim={ambient_dim}"
            )
    else:
        if ambient_dim is None:
            raise DimensionMismatch("empty generating set needs an explicit ambient_dim")
        n = ambient_dim
    reduced = _hnf_rows([list(v) for v in vecs])
    return SubLattice(n, tuple(tuple(r) for r in reduced))


@dataclass(frozen=True)
class IntMatrix:
    """A dense integer matrix, stored row-major."""

    rows: int
    cols: int
    entries: tuple[Vec, ...]

    @staticmethod
    def from_rows(rows: Iterable[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        data = tuple(_as_vec(r) for r in rows)
        if data:
            n = len(data[0])
            if any(len(r) != n for r in data):
                raise DimensionMismatch("ragged rows")
            if cols is not None and cols != n:
                raise DimensionMismatch(f"rows of length {n} with cols={cols}")
        else:
            if cols is None:
                raise DimensionMismatch("empty matrix needs an explicit column count")
            n = cols
        return IntMatrix(len(data), n, data)


def _matrix_rows(matrix, cols: Optional[int] = None) -> tuple[list[Vec], int]:
    if isinstance(matrix, IntMatrix):
        return list(matrix.entries), matrix.cols
    rows = [_as_vec(r) for r in matrix]
    if rows:
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("ragged rows")
    elif cols is not None:
        n = cols
    else:
        raise DimensionMismatch("empty matrix needs an explicit column count")
    return rows, n


def kernel_lattice(matrix, cols: Optional[int] = None) -> SubLattice:
    """Integer kernel {x in Z^cols : M x = 0} of an integer matrix.

    The kernel of an integer matrix is saturated by construction.
    """
    rows, n = _matrix_rows(matrix, cols)
    m = len(rows)
    # Row i of the working matrix is (i-th column of M, e_i); unimodular row
    # operations keep each row of the form (M x, x).
    work = [[rows[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(n)] for j in range(n)]
    reduced = _hnf_rows(work)
    kernel = [row[m:] for row in reduced if not any(row[:m])]
    return hermite_basis(kernel, ambient_dim=n)


def perp_lattice(lattice: SubLattice) -> SubLattice:
    """{r in Z^n : r.v = 0 for every v in the lattice}."""
    return kernel_lattice(lattice.basis, cols=lattice.ambient_dim)


def solve_linear(rows: Sequence[Sequence], rhs: Sequence) -> Optional[list[Fraction]]:
    """One rational solution of ``rows . x = rhs`` (free variables at 0), or None."""
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])
    aug = [[Fraction(x) for x in rows[i]] + [Fraction(rhs[i])] for i in range(m)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if aug[i][c]:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, c in pivots:
        x[c] = aug[i][n]
    return x


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of a family of integer vectors."""
    if not rows:
        return 0
    return len(_hnf_rows([list(r) for r in rows]))


def det_int(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def saturation(lattice: SubLattice) -> tuple[SubLattice, int]:
    """Saturation L_sat = (L ⊗ Q) ∩ Z^n together with the index [L_sat : L]."""
    sat = perp_lattice(perp_lattice(lattice))
    if lattice.is_zero:
        return sat, 1
    # coordinates of the old basis in the saturated basis; the index is |det|
    columns = [list(col) for col in zip(*sat.basis)]
    coeffs = []
    for v in lattice.basis:
        sol = solve_linear(columns, v)
        if sol is None:
            raise ArithmeticError("lattice vector outside its own saturation")
        if any(c.denominator != 1 for c in sol):
            raise ArithmeticError("non-integral coordinates in saturation")
        coeffs.append([int(c) for c in sol])
    index = abs(det_int(coeffs))
    return sat, index


def lattice_sum(lattices: Iterable[SubLattice], ambient_dim: Optional[int] = None) -> SubLattice:
    """The sublattice generated by the union of the given lattices."""
    gens: list[Vec] = []
    dim = ambient_dim
    for lat in lattices:
        if dim is None:
            dim = lat.ambient_dim
        elif dim != lat.ambient_dim:
            raise DimensionMismatch("summing lattices of different ambient dimensions")
        gens.extend(lat.basis)
    if dim is None:
        raise DimensionMismatch("empty lattice sum needs an explicit ambient_dim")
    return hermite_basis(gens, ambient_dim=dim)


def hermite_with_transform(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-echelon Hermite form H of the input plus a transform T with T.rows = H.

    Unlike :func:`hermite_basis`, zero rows are kept so that T stays square
    and unimodular.
    """
    mat = [list(map(int, r)) for r in rows]
    m = len(mat)
    n = len(mat[0]) if m else 0
    t = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        t[r], t[piv] = t[piv], t[r]
        for i in range(r + 1, m):
            b = mat[i][c]
            if b == 0:
                continue
            a = mat[r][c]
            g, x, y = _xgcd(a, b)
            u, v = a // g, b // g
            for k in range(n):
                rk, ik = mat[r][k], mat[i][k]
                mat[r][k] = x * rk + y * ik
                mat[i][k] = -v * rk + u * ik
            for k in range(m):
                rk, ik = t[r][k], t[i][k]
                t[r][k] = x * rk + y * ik
                t[i][k] = -v * rk + u * ik
        if mat[r][c] < 0:
            mat[r] = [-x for x in mat[r]]
            t[r] = [-x for x in t[r]]
        r += 1
    pivots = []
    for i in range(r):
        c = next(j for j, x in enumerate(mat[i]) if x)
        pivots.append(c)
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        p = mat[i][c]
        for j in range(i):
            q = mat[j][c] // p
            if q:
                mat[j] = [a - q * b for a, b in zip(mat[j], mat[i])]
                t[j] = [a - q * b for a, b in zip(t[j], t[i])]
    return mat, t


def express_in_lattice(generators: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[list[int]]:
    """Integer coefficients y with sum_i y_i * generators_i = target, or None."""
    gens = [list(map(int, g)) for g in generators]
    tgt = list(map(int, target))
    if not gens:
        return [] if not any(tgt) else None
    n = len(gens[0])
    if len(tgt) != n:
        raise DimensionMismatch("target dimension differs from generators")
    hnf, t = hermite_with_transform(gens)
    coeffs = [0] * len(gens)
    v = tgt[:]
    for i, row in enumerate(hnf):
        if not any(row):
            continue
        c = next(j for j, x in enumerate(row) if x)
        if v[c] % row[c]:
            return None
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
            coeffs = [a + q * b for a, b in zip(coeffs, t[i])]
    if any(v):
        return None
    return coeffs


def smith_with_transforms(matrix: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form with transforms: returns (D, U, V) with U.A.V = D."""
    a = [list(map(int, r)) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i, j, x, y, w, z):
        # rows i, j <- (x*i + y*j, w*i + z*j), applied to a and u
        for mat in (a, u):
            for k in range(len(mat[i])):
                p, q = mat[i][k], mat[j][k]
                mat[i][k] = x * p + y * q
                mat[j][k] = w * p + z * q

    def col_op(i, j, x, y, w, z):
        for mat in (a, v):
            for row in mat:
                p, q = row[i], row[j]
                row[i] = x * p + y * q
                row[j] = w * p + z * q

    t = 0
    while t < min(m, n):
        # move a nonzero entry to position (t, t)
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        if i != t:
            row_op(t, i, 0, 1, 1, 0)
        if j != t:
            col_op(t, j, 0, 1, 1, 0)
        while True:
            # clear column t
            for i in range(t + 1, m):
                b = a[i][t]
                if b == 0:
                    continue
                p = a[t][t]
                g, x, y = _xgcd(p, b)
                row_op(t, i, x, y, -(b // g), p // g)
            # clear row t
            for j in range(t + 1, n):
                b = a[t][j]
                if b == 0:
                    continue
                p = a[t][t]
                g, x, y = _xgcd(p, b)
                col_op(t, j, x, y, -(b // g), p // g)
            if all(a[i][t] == 0 for i in range(t + 1, m)) and all(
                a[t][j] == 0 for j in range(t + 1, n)
            ):
                # enforce divisibility of the remaining block
                p = a[t][t]
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_op(t, bad, 1, 1, 0, 1)
            # otherwise loop again
        if a[t][t] < 0:
            for k in range(n):
                a[t][k] = -a[t][k]
            for k in range(m):
                u[t][k] = -u[t][k]
        t += 1
    return a, u, v


def smith_invariants(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    d, _, _ = smith_with_transforms(matrix)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i]:
            out.append(abs(d[i][i]))
    return out


def quotient_map(lattice: SubLattice) -> tuple[Vec, ...]:
    """Rows of a surjection Z^n -> Z^(n-k) whose kernel is the given lattice.

    Requires the lattice to be saturated (torsion-free quotient).
    """
    n = lattice.ambient_dim
    k = lattice.rank
    if k == 0:
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    d, _, v = smith_with_transforms([list(b) for b in lattice.basis])
    for i in range(k):
        if abs(d[i][i]) != 1:
            raise ArithmeticError("quotient_map needs a saturated lattice")
    # With U.B.V = D, the quotient map is x -> last n-k coordinates of x.V.
    rows = []
    for j in range(k, n):
        rows.append(tuple(v[i][j] for i in range(n)))
    return tuple(rows)


def apply_map(rows: Sequence[Vec], x: Sequence[int]) -> Vec:
    return tuple(sum(r[i] * x[i] for i in range(len(x))) for r in rows)


# ---------------------------------------------------------------------------
# rational feasibility


@dataclass(frozen=True)
class LinearSystem:
    """A homogeneous system of integer rows: strict > 0, weak >= 0, equal = 0."""

    dim: int
    strict: tuple[Vec, ...] = ()
    weak: tuple[Vec, ...] = ()
    equalities: tuple[Vec, ...] = ()

    def __post_init__(self):
        for group in (self.strict, self.weak, self.equalities):
            for row in group:
                if len(row) != self.dim:
                    raise DimensionMismatch(
                        f"row of length {len(row)} in a dim-{self.dim} system"
                    )

    def check(self, x: Sequence) -> bool:
        """Exact re-substitution of a candidate witness."""
        dot = lambda a: sum(Fraction(c) * Fraction(v) for c, v in zip(a, x))
        return (
            all(dot(a) > 0 for a in self.strict)
            and all(dot(a) >= 0 for a in self.weak)
            and all(dot(a) == 0 for a in self.equalities)
        )


def _pivot(tableau: list[list[Fraction]], obj: list[Fraction], i: int, j: int) -> None:
    inv = 1 / tableau[i][j]
    tableau[i] = [x * inv for x in tableau[i]]
    row = tableau[i]
    for k, other in enumerate(tableau):
        if k != i and other[j]:
            f = other[j]
            tableau[k] = [a - f * b for a, b in zip(other, row)]
    if obj[j]:
        f = obj[j]
        obj[:] = [a - f * b for a, b in zip(obj, row)]


def _phase_one(rows: list[list[int]], rhs: list[int]) -> Optional[list[Fraction]]:
    """Basic feasible solution of {A x = b, x >= 0} via exact simplex, or None.

    Uses Bland's rule, so termination is unconditional.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m == 0:
        return []
    tableau = []
    for i in range(m):
        row = [Fraction(x) for x in rows[i]]
        row += [Fraction(1 if j == i else 0) for j in range(m)]
        row.append(Fraction(rhs[i]))
        tableau.append(row)
    basis = [n + i for i in range(m)]
    obj = [sum(tableau[i][j] for i in range(m)) for j in range(n + m + 1)]
    while True:
        enter = None
        for j in range(n):
            if obj[j] > 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        for i in range(m):
            c = tableau[i][enter]
            if c > 0:
                ratio = tableau[i][-1] / c
                if (
                    leave is None
                    or ratio < leave[0]
                    or (ratio == leave[0] and basis[i] < leave[1])
                ):
                    leave = (ratio, basis[i], i)
        if leave is None:
            return None
        i = leave[2]
        _pivot(tableau, obj, i, enter)
        basis[i] = enter
    if obj[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tableau[i][-1]
    return x


def feasible_strict(system: LinearSystem) -> Optional[tuple[Fraction, ...]]:
    """A rational witness of the system, or None when it is infeasible.

    Strict rows are homogenized to ">= 1"; since the system is homogeneous
    this loses no solutions.  Absence of a witness is a value, not an error.
    """
    n = system.dim
    ns, nw = len(system.strict), len(system.weak)
    rows: list[list[int]] = []
    rhs: list[int] = []
    for i, a in enumerate(system.strict):
        row = list(a) + [-x for x in a] + [0] * (ns + nw)
        row[2 * n + i] = -1
        rows.append(row)
        rhs.append(1)
    for j, a in enumerate(system.weak):
        row = list(a) + [-x for x in a] + [0] * (ns + nw)
        row[2 * n + ns + j] = -1
        rows.append(row)
        rhs.append(0)
    for a in system.equalities:
        rows.append(list(a) + [-x for x in a] + [0] * (ns + nw))
        rhs.append(0)
    if not rows:
        return tuple(Fraction(0) for _ in range(n))
    sol = _phase_one(rows, rhs)
    if sol is None:
        return None
    witness = tuple(sol[i] - sol[n + i] for i in range(n))
    assert system.check(witness)
    return witness


def integer_row(row: Sequence) -> Vec:
    """Scale a rational row by the lcm of denominators to an integer row."""
    fr = [Fraction(x) for x in row]
    if not fr:
        return ()
    scale = math.lcm(*(f.denominator for f in fr)) if fr else 1
    return tuple(int(f * scale) for f in fr)


def primitive_vector(row: Sequence) -> Vec:
    """Integer-scale a rational vector and divide by the gcd of its entries.

    Direction (sign) is preserved; the zero vector stays zero.
    """
    v = integer_row(row)
    g = math.gcd(*(abs(x) for x in v)) if v else 0
    if g in (0, 1):
        return v
    return tuple(x // g for x in v)
