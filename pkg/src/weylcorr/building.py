"""Type-A spherical buildings over prime fields F_q.

Chambers are complete flags E_1 < ... < E_{n-1} in F_q^n (E_0 = 0 and
E_n = F_q^n are implicit).  Two chambers are opposite when they are in
general position; opposite pairs correspond bijectively to frames, ordered
n-tuples of lines spanning F_q^n, via

    (l_1, ..., l_n) -> ((l_1, l_1+l_2, ...), (l_n, l_n+l_{n-1}, ...)).

S_n acts on opposite pairs by permuting frames: ``w`` sends the line in
slot i to slot w(i), so f'_i = f_{w^-1(i)}.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from weylcorr import linalg
from weylcorr.coxeter import Perm, inverse, make_symmetric_group
from weylcorr.errors import DomainError, InvariantError, PreconditionError, SizeError, StructuralError
from weylcorr.galois import PairAction, Partition, UnionFind
from weylcorr.linalg import Matrix, Vector

MAX_DIM = 4
MAX_Q = 5
MAX_PAIR_DOMAIN = 200_000


def _code(v: Sequence[int], q: int) -> int:
    c = 0
    for x in v:
        c = c * q + x
    return c


def _decode(c: int, n: int, q: int) -> Vector:
    out = []
    for _ in range(n):
        c, r = divmod(c, q)
        out.append(r)
    return tuple(reversed(out))


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_q^n stored by its reduced row echelon basis."""

    n: int
    q: int
    rows: Matrix

    def __post_init__(self):
        if linalg.rref(self.rows, self.q) != self.rows:
            raise InvariantError(f"rows {self.rows} are not a reduced echelon basis mod {self.q}")

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], n: int, q: int) -> "Subspace":
        return cls(n, q, linalg.rref(vectors, q))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @functools.cached_property
    def mask(self) -> int:
        """Bitmask over vector codes of every vector in the subspace."""
        m = 0
        for coeffs in itertools.product(range(self.q), repeat=self.dim):
            v = [sum(c * row[k] for c, row in zip(coeffs, self.rows)) % self.q for k in range(self.n)]
            m |= 1 << _code(v, self.q)
        return m

    def vectors(self) -> list[Vector]:
        m, c, out = self.mask, 0, []
        while m:
            if m & 1:
                out.append(_decode(c, self.n, self.q))
            m >>= 1
            c += 1
        return out

    def contains(self, other: "Subspace") -> bool:
        return other.mask & ~self.mask == 0

    def intersect(self, other: "Subspace") -> "Subspace":
        return _subspace_from_mask(self.mask & other.mask, self.n, self.q)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.rows + other.rows, self.n, self.q)

    def transform(self, g: Matrix) -> "Subspace":
        return Subspace.span([linalg.mat_vec(g, row, self.q) for row in self.rows], self.n, self.q)


@functools.lru_cache(maxsize=1 << 16)
def _subspace_from_mask(mask: int, n: int, q: int) -> Subspace:
    vecs, c = [], 0
    while mask:
        if mask & 1:
            vecs.append(_decode(c, n, q))
        mask >>= 1
        c += 1
    return Subspace.span(vecs, n, q)


def _dim_of_mask(mask: int, q: int) -> int:
    size, d = mask.bit_count(), 0
    while size > 1:
        size //= q
        d += 1
    return d


@dataclass(frozen=True)
class Chamber:
    """A complete flag; ``spaces[i]`` is E_{i+1}."""

    n: int
    q: int
    spaces: tuple[Subspace, ...]

    def __post_init__(self):
        if len(self.spaces) != max(self.n - 1, 0):
            raise InvariantError(f"a chamber of F_{self.q}^{self.n} needs {self.n - 1} subspaces")
        for i, E in enumerate(self.spaces):
            if E.dim != i + 1 or (E.n, E.q) != (self.n, self.q):
                raise InvariantError(f"E_{i + 1} has dimension {E.dim}")
            if i and not E.contains(self.spaces[i - 1]):
                raise InvariantError(f"E_{i} is not contained in E_{i + 1}")

    @functools.cached_property
    def levels(self) -> tuple[int, ...]:
        """Masks of E_0, E_1, ..., E_n."""
        full = (1 << self.q**self.n) - 1
        return (1,) + tuple(E.mask for E in self.spaces) + (full,)

    def space(self, i: int) -> Subspace:
        """E_i for 0 <= i <= n, including the implicit ends."""
        if i == 0:
            return Subspace(self.n, self.q, ())
        if i == self.n:
            return Subspace(self.n, self.q, linalg.identity_matrix(self.n))
        return self.spaces[i - 1]

    def sort_key(self) -> tuple:
        return tuple(itertools.chain.from_iterable(E.rows for E in self.spaces))

    def transform(self, g: Matrix) -> "Chamber":
        return Chamber(self.n, self.q, tuple(E.transform(g) for E in self.spaces))

    def __str__(self) -> str:
        return " < ".join("<" + ",".join("".join(map(str, r)) for r in E.rows) + ">" for E in self.spaces) or "<>"


@dataclass(frozen=True)
class Frame:
    """Ordered lines l_1, ..., l_n whose direct sum is F_q^n."""

    lines: tuple[Subspace, ...]

    def __post_init__(self):
        if not self.lines:
            raise InvariantError("a frame needs at least one line")
        n, q = self.lines[0].n, self.lines[0].q
        if len(self.lines) != n or any(l.dim != 1 or (l.n, l.q) != (n, q) for l in self.lines):
            raise InvariantError("a frame consists of n one-dimensional subspaces of F_q^n")
        if linalg.rank([l.rows[0] for l in self.lines], q) != n:
            raise InvariantError("frame lines are linearly dependent")

    @property
    def n(self) -> int:
        return len(self.lines)

    @classmethod
    def standard(cls, n: int, q: int) -> "Frame":
        return cls(tuple(Subspace(n, q, (row,)) for row in linalg.identity_matrix(n)))


def _check_params(n: int, q: int) -> None:
    linalg.require_prime(q)
    if n < 1:
        raise DomainError("dimension must be at least 1")
    if n > MAX_DIM or q > MAX_Q:
        raise SizeError(f"(n, q) = ({n}, {q}) exceeds the caps n <= {MAX_DIM}, q <= {MAX_Q}")


def gaussian_factorial(n: int, q: int) -> int:
    """Number of complete flags in F_q^n: prod_{i=1..n} (q^i - 1)/(q - 1)."""
    out = 1
    for i in range(1, n + 1):
        out *= sum(q**k for k in range(i))
    return out


@functools.cache
def enumerate_subspaces(n: int, q: int, k: int) -> tuple[Subspace, ...]:
    """All k-dimensional subspaces, by filling the free entries of each pivot pattern."""
    _check_params(n, q)
    out = []
    for pivots in itertools.combinations(range(n), k):
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            for (r, c), x in zip(free, values):
                rows[r][c] = x
            out.append(Subspace(n, q, tuple(tuple(r) for r in rows)))
    out.sort(key=lambda s: s.rows)
    return tuple(out)


@functools.cache
def enumerate_chambers(n: int, q: int) -> tuple[Chamber, ...]:
    """All complete flags, sorted lexicographically by their stacked echelon bases."""
    _check_params(n, q)
    levels = [enumerate_subspaces(n, q, k) for k in range(1, n)]
    chains: list[tuple[Subspace, ...]] = [()]
    for subspaces in levels:
        chains = [c + (E,) for c in chains for E in subspaces if not c or E.contains(c[-1])]
    chambers = sorted((Chamber(n, q, c) for c in chains), key=Chamber.sort_key)
    if len(chambers) != gaussian_factorial(n, q):
        raise StructuralError("chamber count disagrees with the Gaussian factorial")
    return tuple(chambers)


@functools.cache
def chamber_index(n: int, q: int) -> dict[Chamber, int]:
    return {c: i for i, c in enumerate(enumerate_chambers(n, q))}


def _same_building(E: Chamber, F: Chamber) -> None:
    if (E.n, E.q) != (F.n, F.q):
        raise DomainError(f"chambers live in F_{E.q}^{E.n} and F_{F.q}^{F.n}")


def intersection_dims(E: Chamber, F: Chamber) -> list[list[int]]:
    """``d[i][j] = dim(E_i ∩ F_j)`` for 0 <= i, j <= n."""
    _same_building(E, F)
    return [[_dim_of_mask(a & b, E.q) for b in F.levels] for a in E.levels]


def relative_position(E: Chamber, F: Chamber) -> Perm:
    """The w in S_n with dim(E_i ∩ F_j) = #{k <= j : w(k) <= i} (0-based images)."""
    d = intersection_dims(E, F)
    n = E.n
    w = []
    for j in range(1, n + 1):
        w.append(next(i for i in range(1, n + 1) if d[i][j] - d[i][j - 1] == 1) - 1)
    for i, j in itertools.product(range(n + 1), repeat=2):
        if d[i][j] != sum(1 for k in range(j) if w[k] < i):
            raise StructuralError("intersection dimensions do not come from a permutation")
    return tuple(w)


def is_opposite(E: Chamber, F: Chamber) -> bool:
    """General position: E_i ∩ F_{n-i} = 0 for every i."""
    _same_building(E, F)
    n = E.n
    return all(E.levels[i] & F.levels[n - i] == 1 for i in range(1, n))


def frame_of(E: Chamber, F: Chamber) -> Frame:
    """Inverse of the big-cell map: l_i = E_i ∩ F_{n+1-i}."""
    if not is_opposite(E, F):
        raise PreconditionError("frame_of needs an opposite pair of chambers")
    n = E.n
    return Frame(tuple(E.space(i).intersect(F.space(n + 1 - i)) for i in range(1, n + 1)))


def big_cell_map(f: Frame) -> tuple[Chamber, Chamber]:
    n = f.n
    q = f.lines[0].q
    E, F = [], []
    acc_e = acc_f = Subspace(n, q, ())
    for i in range(n - 1):
        acc_e = acc_e + f.lines[i]
        acc_f = acc_f + f.lines[n - 1 - i]
        E.append(acc_e)
        F.append(acc_f)
    return Chamber(n, q, tuple(E)), Chamber(n, q, tuple(F))


def permute_frame(w: Perm, f: Frame) -> Frame:
    if len(w) != f.n:
        raise DomainError(f"permutation of degree {len(w)} acting on a frame of {f.n} lines")
    winv = inverse(w)
    return Frame(tuple(f.lines[winv[i]] for i in range(f.n)))


def weyl_action(w: Sequence[int], pair: tuple[Chamber, Chamber]) -> tuple[Chamber, Chamber]:
    """Left S_n action on opposite pairs through their frames."""
    return big_cell_map(permute_frame(tuple(w), frame_of(*pair)))


@functools.cache
def opposite_pairs(n: int, q: int) -> tuple[tuple[int, int], ...]:
    """Opposite chamber pairs as sorted index pairs."""
    _check_params(n, q)
    expected = gaussian_factorial(n, q) * q ** (n * (n - 1) // 2)
    if expected > MAX_PAIR_DOMAIN:
        raise SizeError(f"{expected} opposite pairs exceed the cap {MAX_PAIR_DOMAIN}")
    chambers = enumerate_chambers(n, q)
    pairs = tuple(
        (i, j)
        for i, E in enumerate(chambers)
        for j, F in enumerate(chambers)
        if is_opposite(E, F)
    )
    if len(pairs) != expected:
        raise StructuralError("opposite pair count disagrees with q^{l(w_long)} per chamber")
    return pairs


@functools.cache
def opposite_pair_action(n: int, q: int) -> PairAction:
    """S_n acting on the opposite pairs of the flag building of F_q^n."""
    chambers = enumerate_chambers(n, q)
    pairs = opposite_pairs(n, q)
    W = make_symmetric_group(n)
    line_id = {l.mask: k for k, l in enumerate(enumerate_subspaces(n, q, 1))}
    # same lines as frame_of, read off the vector masks: l_i = E_i ∩ F_{n+1-i}
    frames = [
        tuple(
            line_id[chambers[i].levels[k] & chambers[j].levels[n + 1 - k]] for k in range(1, n + 1)
        )
        for i, j in pairs
    ]
    slot = {f: d for d, f in enumerate(frames)}
    if len(slot) != len(pairs):
        raise StructuralError("distinct opposite pairs share a frame")
    table = np.empty((len(W), len(pairs)), dtype=np.int64)
    for g, w in enumerate(W.elements):
        winv = inverse(w)
        table[g] = [slot[tuple(f[winv[i]] for i in range(n))] for f in frames]
    return PairAction(len(chambers), pairs, W, table, point_labels=tuple(map(str, chambers)))


def partial_flag_quotient(n: int, q: int, J: Iterable[int]) -> Partition:
    """Chambers grouped by their subspaces (E_j) for j in J (1-based dimensions)."""
    _check_params(n, q)
    J = sorted(set(J))
    if any(j < 1 or j > n - 1 for j in J):
        raise DomainError(f"type {J} is not a subset of 1..{n - 1}")
    return Partition.from_labels(
        tuple(c.spaces[j - 1].rows for j in J) for c in enumerate_chambers(n, q)
    )


def chamber_permutation(n: int, q: int, g: Matrix) -> tuple[int, ...]:
    """Index permutation of chambers induced by an invertible matrix."""
    _check_params(n, q)
    if not linalg.is_invertible(g, q):
        raise DomainError("matrix is not invertible")
    index = chamber_index(n, q)
    image = functools.lru_cache(maxsize=None)(lambda E: E.transform(g))
    return tuple(
        index[Chamber(n, q, tuple(image(E) for E in c.spaces))] for c in enumerate_chambers(n, q)
    )


def _orbit_count(size: int, perms: Iterable[Sequence[int]]) -> tuple[int, list[int]]:
    uf = UnionFind(size)
    for perm in perms:
        for x, y in enumerate(perm):
            uf.union(x, y)
    labels = uf.labels()
    return len(set(labels)), labels


def diagonal_orbit_count(n: int, q: int) -> int:
    """Orbits of GL_n(F_q) on pairs of chambers.

    GL_n is checked to be transitive on chambers, so pair orbits correspond
    to orbits of the standard-flag stabilizer (upper triangular matrices) on
    chambers.  The count is cross-checked against the number of distinct
    relative positions and against n!.
    """
    _check_params(n, q)
    chambers = enumerate_chambers(n, q)
    count, _ = _orbit_count(len(chambers), (chamber_permutation(n, q, g) for g in linalg.gl_generators(n, q)))
    if count != 1:
        raise StructuralError("GL_n is not transitive on chambers")
    orbits, _ = _orbit_count(
        len(chambers), (chamber_permutation(n, q, g) for g in linalg.borel_generators(n, q))
    )
    if orbits != len(relative_positions_attained(n, q)) or orbits != len(make_symmetric_group(n)):
        raise StructuralError(f"{orbits} orbits disagree with the relative positions or n!")
    return orbits


def standard_chamber(n: int, q: int) -> Chamber:
    return Chamber(n, q, tuple(Subspace(n, q, linalg.identity_matrix(n)[:i]) for i in range(1, n)))


def relative_positions_attained(n: int, q: int) -> set[Perm]:
    """Distinct relative positions over all pairs of chambers."""
    chambers = enumerate_chambers(n, q)
    if len(chambers) ** 2 > 4 * MAX_PAIR_DOMAIN:
        # GL_n-invariance: every pair is equivalent to one starting at the standard flag
        E = standard_chamber(n, q)
        return {relative_position(E, F) for F in chambers}
    return {relative_position(E, F) for E in chambers for F in chambers}
