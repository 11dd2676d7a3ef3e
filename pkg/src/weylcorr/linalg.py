"""Row reduction and small matrix arithmetic over the prime field F_q.

Vectors and matrices are plain tuples of ints in ``0..q-1``; matrices act on
column vectors.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from weylcorr.errors import DomainError, SizeError

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

MAX_GROUP_ENUMERATION = 1 << 16


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, int(q**0.5) + 1))


def require_prime(q: int) -> None:
    if not is_prime(q):
        raise DomainError(f"field size must be prime, got {q}")


def rref(rows: Iterable[Sequence[int]], q: int) -> Matrix:
    """Reduced row echelon form mod ``q`` with zero rows dropped.

    >>> rref([(1, 1, 0), (1, 0, 1)], 2)
    ((1, 0, 1), (0, 1, 1))
    """
    mat = [[x % q for x in row] for row in rows]
    if not mat:
        return ()
    ncols = len(mat[0])
    pivot_row = 0
    for col in range(ncols):
        pick = next((r for r in range(pivot_row, len(mat)) if mat[r][col]), None)
        if pick is None:
            continue
        mat[pivot_row], mat[pick] = mat[pick], mat[pivot_row]
        inv = pow(mat[pivot_row][col], -1, q)
        mat[pivot_row] = [(x * inv) % q for x in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(a - f * b) % q for a, b in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(row) for row in mat[:pivot_row])


def rank(rows: Iterable[Sequence[int]], q: int) -> int:
    return len(rref(rows, q))


def mat_vec(g: Matrix, v: Sequence[int], q: int) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, v)) % q for row in g)


def mat_mul(g: Matrix, h: Matrix, q: int) -> Matrix:
    cols = list(zip(*h))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) % q for col in cols) for row in g)


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def elementary(n: int, i: int, j: int, value: int = 1) -> Matrix:
    """Identity plus ``value`` at position (i, j); a transvection when i != j."""
    rows = [list(r) for r in identity_matrix(n)]
    rows[i][j] = value if i == j else rows[i][j] + value
    return tuple(tuple(r) for r in rows)


def is_invertible(g: Matrix, q: int) -> bool:
    return rank(g, q) == len(g)


def primitive_root(q: int) -> int:
    """Smallest generator of the multiplicative group of F_q."""
    require_prime(q)
    if q == 2:
        return 1
    for a in range(2, q):
        if len({pow(a, k, q) for k in range(1, q)}) == q - 1:
            return a
    raise AssertionError("unreachable for prime q")


def general_linear_group(n: int, q: int) -> list[Matrix]:
    """Every invertible n x n matrix over F_q, in lexicographic order."""
    require_prime(q)
    if q ** (n * n) > MAX_GROUP_ENUMERATION:
        raise SizeError(f"GL_{n}(F_{q}) enumeration needs {q ** (n * n)} candidates")
    out = []
    for entries in itertools.product(range(q), repeat=n * n):
        g = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if is_invertible(g, q):
            out.append(g)
    return out


def gl_generators(n: int, q: int) -> list[Matrix]:
    """Transvections plus one diagonal matrix; these generate GL_n(F_q)."""
    gens = [elementary(n, i, j) for i in range(n) for j in range(n) if i != j]
    a = primitive_root(q)
    if a != 1:
        gens.append(elementary(n, 0, 0, a))
    return gens


def borel_generators(n: int, q: int) -> list[Matrix]:
    """Generators of the upper triangular group, the stabilizer of the standard flag."""
    gens = [elementary(n, i, j) for i in range(n) for j in range(i + 1, n)]
    a = primitive_root(q)
    if a != 1:
        gens.extend(elementary(n, i, i, a) for i in range(n))
    return gens
