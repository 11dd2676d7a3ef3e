"""Finite Coxeter-type groups realized as permutation groups.

Elements are permutations of ``range(degree)`` stored in word form, so
``g[i]`` is the image of ``i``.  Products compose right to left:
``compose(a, b)[i] == a[b[i]]``.  Only the families that appear as Weyl
groups in the worked examples are constructible: the symmetric groups
(type A) and elementary abelian 2-groups generated by commuting flips.
"""
from __future__ import annotations

import functools
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from weylcorr.errors import DomainError, SizeError, UnsupportedError

Perm = tuple[int, ...]

MAX_SYMMETRIC_DEGREE = 8
MAX_FLIP_RANK = 10
MAX_SUBGROUP_SEARCH = 1024
MAX_HOM_CANDIDATES = 10**7


def compose(a: Sequence[int], b: Sequence[int]) -> Perm:
    return tuple(a[i] for i in b)


def inverse(a: Sequence[int]) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def identity_perm(m: int) -> Perm:
    return tuple(range(m))


def is_permutation(a: Sequence[int]) -> bool:
    return sorted(a) == list(range(len(a)))


def perm_order(a: Perm) -> int:
    e = identity_perm(len(a))
    k, x = 1, a
    while x != e:
        x = compose(a, x)
        k += 1
    return k


def inversions(a: Sequence[int]) -> int:
    """Coxeter length of a permutation in S_n."""
    return sum(1 for i, j in itertools.combinations(range(len(a)), 2) if a[i] > a[j])


def transposition(m: int, i: int, j: int) -> Perm:
    p = list(range(m))
    p[i], p[j] = p[j], p[i]
    return tuple(p)


def cycle_string(a: Perm) -> str:
    """Cycle notation on 1-based points, e.g. ``(1 3)``; identity is ``()``."""
    seen, parts = set(), []
    for start in range(len(a)):
        if start in seen or a[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = a[x]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "()"


@dataclass(frozen=True, eq=False)
class CoxeterGroup:
    """A finite group with involutive generators and its full element list.

    Instances compare by identity; the constructors are memoized so equal
    parameters yield the same object.
    """

    name: str
    kind: str
    rank: int
    degree: int
    generators: tuple[Perm, ...]
    labels: tuple[str, ...]
    coxeter_matrix: tuple[tuple[int, ...], ...]
    elements: tuple[Perm, ...]
    flip: Optional[Perm] = None
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index.update({g: i for i, g in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self._index

    def index(self, g: Sequence[int]) -> int:
        try:
            return self._index[tuple(g)]
        except KeyError:
            raise DomainError(f"{g} is not an element of {self.name}") from None

    @property
    def identity(self) -> Perm:
        return identity_perm(self.degree)

    @functools.cached_property
    def identity_index(self) -> int:
        return self.index(self.identity)

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        """``mul_table[i, j]`` is the index of ``elements[i] * elements[j]``."""
        n = len(self.elements)
        table = np.empty((n, n), dtype=np.int64)
        for i, a in enumerate(self.elements):
            table[i] = [self._index[compose(a, b)] for b in self.elements]
        return table

    @functools.cached_property
    def inverse_index(self) -> np.ndarray:
        return np.array([self._index[inverse(g)] for g in self.elements], dtype=np.int64)

    @functools.cached_property
    def generator_indices(self) -> tuple[int, ...]:
        return tuple(self.index(s) for s in self.generators)

    @functools.cached_property
    def spanning_tree(self) -> tuple[tuple[int, int, int], ...]:
        """BFS order of ``(element, parent, generator)`` with element = parent * generator."""
        mul = self.mul_table
        order, seen = [], {self.identity_index}
        queue = deque([self.identity_index])
        while queue:
            u = queue.popleft()
            for k, s in enumerate(self.generator_indices):
                w = int(mul[u, s])
                if w not in seen:
                    seen.add(w)
                    order.append((w, u, k))
                    queue.append(w)
        return tuple(order)

    def label(self, g: Perm) -> str:
        """Human-readable name of an element: cycles for S_n, flip words otherwise."""
        if self.kind == "A":
            return cycle_string(g)
        word = [self.labels[k] for k, s in enumerate(self.generators) if g[2 * k] != 2 * k]
        return "".join(word) or "id"


def _closure(generators: Iterable[Perm], m: int) -> tuple[Perm, ...]:
    gens = list(generators)
    e = identity_perm(m)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = compose(x, s)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return tuple(sorted(seen))


@functools.cache
def make_symmetric_group(n: int) -> CoxeterGroup:
    """S_n acting on n points, generated by adjacent transpositions (type A_{n-1}).

    The distinguished flip is the longest element, the order-reversing
    permutation.
    """
    if n < 1:
        raise DomainError("symmetric group degree must be at least 1")
    if n > MAX_SYMMETRIC_DEGREE:
        raise SizeError(f"S_{n} exceeds the enumeration cap S_{MAX_SYMMETRIC_DEGREE}")
    r = n - 1
    gens = tuple(transposition(n, i, i + 1) for i in range(r))
    matrix = tuple(
        tuple(1 if i == j else 3 if abs(i - j) == 1 else 2 for j in range(r)) for i in range(r)
    )
    return CoxeterGroup(
        name=f"S{n}",
        kind="A",
        rank=r,
        degree=n,
        generators=gens,
        labels=tuple(f"s{i + 1}" for i in range(r)),
        coxeter_matrix=matrix,
        elements=_closure(gens, n),
        flip=tuple(range(n - 1, -1, -1)),
    )


@functools.cache
def make_involution_product(r: int) -> CoxeterGroup:
    """(Z/2)^r as commuting flips; generator k swaps points 2k and 2k+1.

    The flip is the product of all generators.
    """
    if r < 1:
        raise DomainError("involution product needs at least one factor")
    if r > MAX_FLIP_RANK:
        raise SizeError(f"(Z/2)^{r} exceeds the cap (Z/2)^{MAX_FLIP_RANK}")
    m = 2 * r
    gens = tuple(transposition(m, 2 * k, 2 * k + 1) for k in range(r))
    flip = functools.reduce(compose, gens, identity_perm(m))
    matrix = tuple(tuple(1 if i == j else 2 for j in range(r)) for i in range(r))
    return CoxeterGroup(
        name=f"Z2^{r}",
        kind="Z2",
        rank=r,
        degree=m,
        generators=gens,
        labels=tuple(f"w{k + 1}" for k in range(r)),
        coxeter_matrix=matrix,
        elements=_closure(gens, m),
        flip=flip,
    )


def longest_element(W: CoxeterGroup) -> Perm:
    """The reversal permutation i -> n+1-i of S_n."""
    if W.kind != "A":
        raise UnsupportedError(f"longest element only implemented for type A, not {W.name}")
    return tuple(range(W.degree - 1, -1, -1))


def relations_hold(W: CoxeterGroup) -> bool:
    """Check (s_i s_j) has order exactly coxeter_matrix[i][j] by multiplication."""
    for i, j in itertools.product(range(W.rank), repeat=2):
        if perm_order(compose(W.generators[i], W.generators[j])) != W.coxeter_matrix[i][j]:
            return False
    return True


def is_irreducible(W: CoxeterGroup) -> bool:
    """Connectivity of the Coxeter diagram (edges where m_ij >= 3).

    The rank-0 group S_1 has an empty diagram and is not irreducible.
    """
    if W.rank == 0:
        return False
    seen, stack = {0}, [0]
    while stack:
        i = stack.pop()
        for j in range(W.rank):
            if j not in seen and W.coxeter_matrix[i][j] >= 3:
                seen.add(j)
                stack.append(j)
    return len(seen) == W.rank


@dataclass(frozen=True)
class Subgroup:
    group: CoxeterGroup
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, idx: int) -> bool:
        return idx in self._memberset

    @functools.cached_property
    def _memberset(self) -> frozenset[int]:
        return frozenset(self.members)

    @property
    def elements(self) -> list[Perm]:
        return [self.group.elements[i] for i in self.members]

    def issubset(self, other: "Subgroup") -> bool:
        return self._memberset <= other._memberset

    def sort_key(self) -> tuple:
        return (len(self.members), self.members)

    def is_closed_under_products(self) -> bool:
        g = self.group
        if g.identity_index not in self._memberset:
            return False
        idx = np.array(self.members)
        prods = g.mul_table[np.ix_(idx, idx)]
        return bool(np.isin(prods, idx).all() and np.isin(g.inverse_index[idx], idx).all())


def trivial_subgroup(W: CoxeterGroup) -> Subgroup:
    return Subgroup(W, (W.identity_index,))


def whole_group(W: CoxeterGroup) -> Subgroup:
    return Subgroup(W, tuple(range(len(W))))


def generated_subgroup(W: CoxeterGroup, gens: Iterable[Sequence[int] | int]) -> Subgroup:
    """Subgroup generated by elements given as permutations or element indices."""
    idx = [g if isinstance(g, (int, np.integer)) else W.index(g) for g in gens]
    return Subgroup(W, _generated(W, frozenset(int(i) for i in idx)))


def _generated(W: CoxeterGroup, gens: frozenset[int]) -> tuple[int, ...]:
    mul = W.mul_table
    seen = {W.identity_index}
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for s in gens:
            y = int(mul[x, s])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return tuple(sorted(seen))


def enumerate_subgroups(W: CoxeterGroup) -> list[Subgroup]:
    """All subgroups, sorted by order and then by member indices.

    Grows subgroups one generator at a time from the trivial group; each
    subgroup is reached from a smaller one, so the sweep is complete.
    """
    if len(W) > MAX_SUBGROUP_SEARCH:
        raise SizeError(f"|{W.name}| = {len(W)} exceeds subgroup search cap {MAX_SUBGROUP_SEARCH}")
    closure = functools.lru_cache(maxsize=None)(lambda gens: _generated(W, gens))
    start = (W.identity_index,)
    found = {start: frozenset()}
    queue = deque([start])
    while queue:
        members = queue.popleft()
        gens = found[members]
        inside = set(members)
        for g in range(len(W)):
            if g in inside:
                continue
            new = closure(gens | {g})
            if new not in found:
                found[new] = gens | {g}
                queue.append(new)
    subs = [Subgroup(W, m) for m in found]
    subs.sort(key=Subgroup.sort_key)
    return subs


def is_normal(V: Subgroup, W: CoxeterGroup) -> bool:
    if V.group is not W:
        raise DomainError(f"subgroup belongs to {V.group.name}, not {W.name}")
    if not V.is_closed_under_products():
        raise DomainError("member set is not a subgroup")
    mul, inv = W.mul_table, W.inverse_index
    idx = np.array(V.members)
    for w in range(len(W)):
        conj = mul[mul[w, idx], inv[w]]
        if not np.isin(conj, idx).all():
            return False
    return True


@dataclass(frozen=True)
class GroupHom:
    source: CoxeterGroup
    target: CoxeterGroup
    images: tuple[int, ...]
    kernel: Subgroup

    def __call__(self, g: Sequence[int]) -> Perm:
        return self.target.elements[self.images[self.source.index(g)]]

    @property
    def is_injective(self) -> bool:
        return len(self.kernel) == 1

    @property
    def generator_images(self) -> tuple[Perm, ...]:
        return tuple(self.target.elements[self.images[s]] for s in self.source.generator_indices)

    def preserves_products(self) -> bool:
        img = np.array(self.images)
        lhs = img[self.source.mul_table]
        rhs = self.target.mul_table[img[:, None], img[None, :]]
        return bool((lhs == rhs).all())


def enumerate_homomorphisms(
    W1: CoxeterGroup,
    W2: CoxeterGroup,
    pin: Optional[tuple[Sequence[int], Sequence[int]]] = None,
    injective_only: bool = False,
) -> list[GroupHom]:
    """All homomorphisms W1 -> W2, optionally pinned at one element.

    Generator images range over elements of W2 squaring to the identity; a
    candidate is kept when every Coxeter relation holds and the extended map
    matches the full multiplication tables.  Output is sorted by image tuple.
    """
    if len(W2) ** W1.rank > MAX_HOM_CANDIDATES:
        raise SizeError(f"|{W2.name}|^{W1.rank} exceeds the homomorphism search cap")
    if pin is not None:
        pin_src, pin_tgt = W1.index(pin[0]), W2.index(pin[1])
    if injective_only and len(W1) > len(W2):
        return []

    mul2 = W2.mul_table
    e2 = W2.identity_index
    involutive = [x for x in range(len(W2)) if mul2[x, x] == e2]
    tree = W1.spanning_tree
    out = []
    for assignment in itertools.product(involutive, repeat=W1.rank):
        if not _relations_ok(W1, mul2, e2, assignment):
            continue
        images = [0] * len(W1)
        images[W1.identity_index] = e2
        for w, parent, k in tree:
            images[w] = int(mul2[images[parent], assignment[k]])
        if pin is not None and images[pin_src] != pin_tgt:
            continue
        kernel = Subgroup(W1, tuple(i for i, x in enumerate(images) if x == e2))
        if injective_only and len(kernel) != 1:
            continue
        hom = GroupHom(W1, W2, tuple(images), kernel)
        if not hom.preserves_products():
            continue
        out.append(hom)
    out.sort(key=lambda h: h.images)
    return out


def _relations_ok(W1: CoxeterGroup, mul2: np.ndarray, e2: int, assignment: Sequence[int]) -> bool:
    for i in range(W1.rank):
        for j in range(i + 1, W1.rank):
            x = int(mul2[assignment[i], assignment[j]])
            y = e2
            for _ in range(W1.coxeter_matrix[i][j]):
                y = int(mul2[y, x])
            if y != e2:
                return False
    return True
