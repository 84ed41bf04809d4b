"""Dense linear algebra over the rationals on lists of rows."""

from __future__ import annotations

from typing import Sequence

from .ratio import ONE, ZERO, ratio


def to_matrix(rows: Sequence[Sequence]) -> list:
    return [[ratio(x) for x in row] for row in rows]


def identity(n: int) -> list:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), ZERO) for col in bt] for row in a]


def mat_vec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), ZERO) for row in m]


def dot(u: Sequence, v: Sequence):
    return sum((x * y for x, y in zip(u, v)), ZERO)


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list, list]:
    """Reduced row echelon form; zero rows dropped.  Returns ``(rows, pivots)``."""
    m = to_matrix(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of ``{x : rows . x = 0}``, one vector per free column."""
    reduced, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def determinant(m: Sequence[Sequence]):
    a = to_matrix(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    det = ONE
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c]), None)
        if pivot is None:
            return ZERO
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det *= a[c][c]
        inv = ONE / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def inverse(m: Sequence[Sequence]) -> list:
    a = to_matrix(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("non-invertible transform (not square)")
    aug = [row + e for row, e in zip(a, identity(n))]
    reduced, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise ValueError("non-invertible transform")
    return [row[n:] for row in reduced]


def complete_basis(vectors: Sequence[Sequence], n: int) -> list:
    """Extend independent ``vectors`` to a basis of Q^n with unit vectors in index order."""
    basis = [list(map(ratio, v)) for v in vectors]
    if rank(basis) != len(basis):
        raise ValueError("vectors are dependent")
    for i in range(n):
        if len(basis) == n:
            break
        e = [ZERO] * n
        e[i] = ONE
        if rank(basis + [e]) > len(basis):
            basis.append(e)
    return basis


def solve_in_span(basis: Sequence[Sequence], v: Sequence):
    """Coefficients ``c`` with ``sum c_i basis_i = v``, or ``None`` if ``v`` is outside the span."""
    k = len(basis)
    if k == 0:
        return [] if not any(v) else None
    n = len(v)
    # columns are basis vectors; augmented with v
    aug = [[ratio(basis[j][i]) for j in range(k)] + [ratio(v[i])] for i in range(n)]
    reduced, pivots = rref(aug, k + 1)
    if k in pivots:
        return None
    coeffs = [ZERO] * k
    for row, p in zip(reduced, pivots):
        coeffs[p] = row[k]
    return coeffs
