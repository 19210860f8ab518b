"""Exact integer lattices: Hermite and Smith normal forms, membership, reduction.

Conventions used everywhere in the package:

* a lattice is the Z-span of the *rows* of a matrix;
* canonical bases are row Hermite normal forms (pivots positive, entries
  above a pivot in ``[0, pivot)``, zero rows dropped);
* pivot ties go to the smallest row index.

All arithmetic is on Python ints, so there is no overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import InputError


class DimensionMismatch(InputError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionMismatch(
                    f"row of length {len(r)} in a matrix with {self.ncols} columns")

    @classmethod
    def from_rows(cls, rows, ncols=None) -> IntMatrix:
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionMismatch("column count required for an empty matrix")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def transpose(self) -> IntMatrix:
        return IntMatrix(tuple(zip(*self.rows)) if self.rows else
                         tuple(() for _ in range(self.ncols)), self.nrows)


@dataclass(frozen=True)
class HnfBasis:
    rows: tuple[tuple[int, ...], ...]
    ncols: int
    pivots: tuple[int, ...] = field(default=())

    @property
    def rank(self) -> int:
        return len(self.rows)

    def as_matrix(self) -> IntMatrix:
        return IntMatrix(self.rows, self.ncols)


@dataclass(frozen=True)
class SmithForm:
    """Elementary divisors ``d1 | d2 | ...`` of a cokernel, plus its free rank.

    ``divisors`` keeps the unit divisors; ``torsion`` drops them.
    """
    divisors: tuple[int, ...]
    free_rank: int

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.divisors if d != 1)

    def group_key(self) -> tuple[int, tuple[int, ...]]:
        # isomorphism type of the cokernel
        return (self.free_rank, self.torsion)


def _as_matrix(m) -> IntMatrix:
    if isinstance(m, IntMatrix):
        return m
    if isinstance(m, HnfBasis):
        return m.as_matrix()
    return IntMatrix.from_rows(m)


def _echelon(rows, ncols, track=False):
    """Row-reduce to Hermite normal form in place.

    Returns ``(A, U, pivots)`` where ``A`` holds the HNF rows followed by
    zero rows and ``U`` (when tracked) satisfies ``U * original = A``.
    """
    A = [list(r) for r in rows]
    n = len(A)
    U = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def sub(i, k, q):
        # row_i -= q * row_k
        Ai, Ak = A[i], A[k]
        for c in range(ncols):
            if Ak[c]:
                Ai[c] -= q * Ak[c]
        if track:
            Ui, Uk = U[i], U[k]
            for c in range(n):
                if Uk[c]:
                    Ui[c] -= q * Uk[c]

    def swap(i, k):
        A[i], A[k] = A[k], A[i]
        if track:
            U[i], U[k] = U[k], U[i]

    def negate(i):
        A[i] = [-x for x in A[i]]
        if track:
            U[i] = [-x for x in U[i]]

    r = 0
    pivots = []
    for j in range(ncols):
        if r == n:
            break
        while True:
            nz = [i for i in range(r, n) if A[i][j]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(A[i][j]), i))
            if p != r:
                swap(p, r)
            clean = True
            for i in range(r + 1, n):
                if A[i][j]:
                    sub(i, r, A[i][j] // A[r][j])
                    if A[i][j]:
                        clean = False
            if clean:
                break
        if A[r][j] == 0:
            continue
        if A[r][j] < 0:
            negate(r)
        piv = A[r][j]
        for i in range(r):
            q = A[i][j] // piv
            if q:
                sub(i, r, q)
        pivots.append(j)
        r += 1
    return A, U, pivots


def hermite_normal_form(m) -> HnfBasis:
    """Row Hermite normal form of ``m`` with zero rows removed."""
    m = _as_matrix(m)
    A, _, pivots = _echelon(m.rows, m.ncols)
    rows = tuple(tuple(A[i]) for i in range(len(pivots)))
    return HnfBasis(rows, m.ncols, tuple(pivots))


def hnf_with_transform(m):
    """HNF together with a unimodular transform.

    Returns ``(basis, transform, kernel)``: ``transform`` rows express the
    basis rows in terms of the rows of ``m``; ``kernel`` is a basis of the
    left kernel ``{c : c * m = 0}`` (in Hermite normal form).
    """
    m = _as_matrix(m)
    A, U, pivots = _echelon(m.rows, m.ncols, track=True)
    r = len(pivots)
    basis = HnfBasis(tuple(tuple(A[i]) for i in range(r)), m.ncols, tuple(pivots))
    transform = tuple(tuple(U[i]) for i in range(r))
    kernel = hermite_normal_form(IntMatrix(tuple(tuple(U[i]) for i in range(r, m.nrows)),
                                           m.nrows))
    return basis, transform, kernel


def integer_kernel(m) -> HnfBasis:
    """Basis (in HNF) of the left kernel ``{c in Z^rows : c * m = 0}``."""
    return hnf_with_transform(m)[2]


def _reduce(v, b: HnfBasis, coeffs=None):
    v = list(v)
    for k, (row, j) in enumerate(zip(b.rows, b.pivots)):
        q = v[j] // row[j]
        if q:
            for c in range(j, b.ncols):
                if row[c]:
                    v[c] -= q * row[c]
            if coeffs is not None:
                coeffs[k] += q
    return v


def reduce_mod_lattice(v, b: HnfBasis) -> tuple[int, ...]:
    """Canonical representative of ``v`` modulo the row lattice of ``b``.

    Pivot coordinates of the result lie in ``[0, pivot)``.
    """
    if len(v) != b.ncols:
        raise DimensionMismatch(f"vector of length {len(v)} against lattice in Z^{b.ncols}")
    return tuple(_reduce(v, b))


def in_lattice(v, b: HnfBasis) -> bool:
    return not any(reduce_mod_lattice(v, b))


def lattice_solve(v, m):
    """Integer ``c`` with ``c * m == v``, or ``None`` when ``v`` is not in the row lattice."""
    m = _as_matrix(m)
    if len(v) != m.ncols:
        raise DimensionMismatch(f"vector of length {len(v)} against matrix with {m.ncols} columns")
    basis, transform, _ = hnf_with_transform(m)
    coeffs = [0] * basis.rank
    rest = _reduce(v, basis, coeffs)
    if any(rest):
        return None
    c = [0] * m.nrows
    for q, urow in zip(coeffs, transform):
        if q:
            for i, u in enumerate(urow):
                c[i] += q * u
    return tuple(c)


def lattice_contains(outer: HnfBasis, inner: HnfBasis) -> bool:
    return all(in_lattice(r, outer) for r in inner.rows)


def stack(*blocks, ncols=None) -> IntMatrix:
    """Concatenate row lists / matrices / bases sharing a column count."""
    rows = []
    for b in blocks:
        if isinstance(b, (IntMatrix, HnfBasis)):
            if ncols is None:
                ncols = b.ncols
            rows.extend(b.rows)
        else:
            rows.extend(tuple(r) for r in b)
    if ncols is None:
        if not rows:
            raise DimensionMismatch("column count required for an empty stack")
        ncols = len(rows[0])
    return IntMatrix.from_rows(rows, ncols)


def _diagonalize(rows, ncols):
    A = [list(r) for r in rows]
    nr = len(A)
    diag = []
    k = 0
    while k < min(nr, ncols):
        best = None
        for i in range(k, nr):
            for j in range(k, ncols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[k], A[i] = A[i], A[k]
        for row in A:
            row[k], row[j] = row[j], row[k]
        while True:
            p = A[k][k]
            done = True
            for i in range(k + 1, nr):
                if A[i][k]:
                    q = A[i][k] // p
                    for c in range(k, ncols):
                        A[i][c] -= q * A[k][c]
                    if A[i][k]:
                        done = False
            for j in range(k + 1, ncols):
                if A[k][j]:
                    q = A[k][j] // p
                    for row in A[k:]:
                        row[j] -= q * row[k]
                    if A[k][j]:
                        done = False
            if done:
                break
            # a remainder survived; move the smallest entry of row/column k to the pivot
            cands = [(abs(A[i][k]), 0, i) for i in range(k, nr) if A[i][k]]
            cands += [(abs(A[k][j]), 1, j) for j in range(k, ncols) if A[k][j]]
            _, axis, idx = min(cands)
            if axis == 0:
                A[k], A[idx] = A[idx], A[k]
            else:
                for row in A:
                    row[k], row[idx] = row[idx], row[k]
        diag.append(abs(A[k][k]))
        k += 1
    return diag


def smith_invariants(m) -> SmithForm:
    """Smith data of ``Z^cols / rowspan(m)``."""
    m = _as_matrix(m)
    d = _diagonalize(m.rows, m.ncols)
    # pairwise gcd/lcm sweep turns any diagonal into a divisibility chain
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            d[i], d[j] = g, d[i] * d[j] // g
    return SmithForm(tuple(d), m.ncols - len(d))
