"""Galois correspondence between subgroups of W and quotients of B.

A group W acts on a domain D of pairs in B x B.  A quotient of B is a
partition; ``p1 <= p2`` means p1 is *coarser* (p1 factors through p2).
For a quotient p, ``W_p`` is the set of w with p(pr1(w(x, y))) == p(x) on
every pair; for a subgroup V, ``p^V`` is the finest quotient with
``V <= W_p``.  The two maps are order reversing and adjoint, and their
composites are closure operators whose fixed points form paired lattices.
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from weylcorr.coxeter import (
    CoxeterGroup,
    Subgroup,
    enumerate_subgroups,
    generated_subgroup,
    make_involution_product,
)
from weylcorr.errors import DomainError, SizeError, StructuralError

MAX_CLOSED_SWEEP = 1024
MAX_PRODUCT_DOMAIN = 1 << 16


class UnionFind:
    """Disjoint sets over ``range(count)`` with path halving and union by size."""

    def __init__(self, count: int):
        self.parent = list(range(count))
        self.size = [1] * count

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def labels(self) -> list[int]:
        return [self.find(x) for x in range(len(self.parent))]


@dataclass(frozen=True)
class Partition:
    """A quotient of ``range(size)`` as block labels in first-occurrence order."""

    block_id: tuple[int, ...]

    def __post_init__(self):
        relabel: dict = {}
        canon = tuple(relabel.setdefault(x, len(relabel)) for x in self.block_id)
        object.__setattr__(self, "block_id", canon)

    @classmethod
    def from_labels(cls, labels: Iterable) -> "Partition":
        return cls(tuple(labels))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], size: int) -> "Partition":
        labels = [-1] * size
        for k, block in enumerate(blocks):
            for x in block:
                labels[x] = k
        if -1 in labels:
            raise DomainError("blocks do not cover the ground set")
        return cls(tuple(labels))

    @classmethod
    def one_block(cls, size: int) -> "Partition":
        return cls((0,) * size)

    @classmethod
    def discrete(cls, size: int) -> "Partition":
        """The identity quotient: every point is its own block."""
        return cls(tuple(range(size)))

    @property
    def size(self) -> int:
        return len(self.block_id)

    @property
    def num_blocks(self) -> int:
        return max(self.block_id) + 1 if self.block_id else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.block_id):
            out[b].append(x)
        return out

    def sort_key(self) -> tuple:
        return (self.num_blocks, self.block_id)


def _same_size(p1: Partition, p2: Partition) -> None:
    if p1.size != p2.size:
        raise DomainError(f"partitions of {p1.size} and {p2.size} points are not comparable")


def partition_leq(p1: Partition, p2: Partition) -> bool:
    """True iff p1 is a coarsening of p2, i.e. p1 = j o p2 for some j."""
    _same_size(p1, p2)
    j: dict[int, int] = {}
    for a, b in zip(p1.block_id, p2.block_id):
        if j.setdefault(b, a) != a:
            return False
    return True


def partition_meet(p1: Partition, p2: Partition) -> Partition:
    """Finest common coarsening."""
    _same_size(p1, p2)
    uf = UnionFind(p1.size)
    first: dict = {}
    for x, key in itertools.chain(
        ((x, (1, b)) for x, b in enumerate(p1.block_id)),
        ((x, (2, b)) for x, b in enumerate(p2.block_id)),
    ):
        uf.union(first.setdefault(key, x), x)
    return Partition.from_labels(uf.labels())


def partition_join(p1: Partition, p2: Partition) -> Partition:
    """Common refinement: blocks are the nonempty pairwise intersections."""
    _same_size(p1, p2)
    return Partition.from_labels(zip(p1.block_id, p2.block_id))


@dataclass(frozen=True, eq=False)
class PairAction:
    """A group acting on a domain of pairs ``(x, y)`` of points of B.

    ``action_table[g, d]`` is the index of ``g . domain[d]`` where ``g`` is an
    element index of ``group``.
    """

    num_points: int
    domain: tuple[tuple[int, int], ...]
    group: CoxeterGroup
    action_table: np.ndarray
    point_labels: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        table = np.asarray(self.action_table, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "action_table", table)
        self.validate()

    @functools.cached_property
    def first(self) -> np.ndarray:
        """First coordinate of every domain pair (the projection pr1)."""
        arr = np.fromiter((x for x, _ in self.domain), dtype=np.int64, count=len(self.domain))
        arr.setflags(write=False)
        return arr

    def validate(self) -> None:
        """Check the table is a group action by bijections of the domain."""
        table, W = self.action_table, self.group
        nd = len(self.domain)
        if table.shape != (len(W), nd):
            raise StructuralError(f"action table shape {table.shape} != {(len(W), nd)}")
        for x, y in self.domain:
            if not (0 <= x < self.num_points and 0 <= y < self.num_points):
                raise StructuralError(f"pair {(x, y)} outside the ground set")
        if not (table[W.identity_index] == np.arange(nd)).all():
            raise StructuralError("identity does not act trivially")
        for g in range(len(W)):
            if len(np.unique(table[g])) != nd:
                raise StructuralError(f"element {W.elements[g]} does not permute the domain")
        mul = W.mul_table
        for g in range(len(W)):
            composed = table[g][table]  # row h: g applied after h
            if not (composed == table[mul[g]]).all():
                raise StructuralError(f"action law fails for {W.elements[g]}")


def _check_points(A: PairAction, p: Partition) -> None:
    if p.size != A.num_points:
        raise DomainError(f"partition of {p.size} points, action on {A.num_points}")


def _check_subgroup(A: PairAction, V: Subgroup) -> None:
    if V.group is not A.group:
        raise DomainError(f"subgroup of {V.group.name} used with action of {A.group.name}")
    if not V.is_closed_under_products():
        raise DomainError("member set is not a subgroup")


def stabilizer_subgroup(A: PairAction, p: Partition) -> Subgroup:
    """``W_p``: elements preserving the first-coordinate quotient map."""
    _check_points(A, p)
    labels = np.array(p.block_id, dtype=np.int64)
    first = A.first
    base = labels[first]
    moved = labels[first[A.action_table]]
    members = np.flatnonzero((moved == base).all(axis=1))
    V = Subgroup(A.group, tuple(int(g) for g in members))
    if not V.is_closed_under_products():
        raise StructuralError("stabilizer is not a subgroup; the action table is inconsistent")
    return V


def finest_invariant_quotient(A: PairAction, V: Subgroup) -> Partition:
    """``p^V``: union-find closure of x ~ pr1(w(x, y)) over w in V and pairs (x, y)."""
    _check_subgroup(A, V)
    first = A.first
    n = A.num_points
    codes = np.concatenate([first * n + first[A.action_table[g]] for g in V.members])
    uf = UnionFind(n)
    for code in np.unique(codes).tolist():
        uf.union(code // n, code % n)
    return Partition.from_labels(uf.labels())


def close_subgroup(A: PairAction, V: Subgroup) -> Subgroup:
    return stabilizer_subgroup(A, finest_invariant_quotient(A, V))


def close_quotient(A: PairAction, p: Partition) -> Partition:
    return finest_invariant_quotient(A, stabilizer_subgroup(A, p))


def check_adjunction(A: PairAction, V: Subgroup, p: Partition) -> bool:
    """Whether ``V <= W_p`` holds exactly when ``p <= p^V``."""
    lhs = V.issubset(stabilizer_subgroup(A, p))
    rhs = partition_leq(p, finest_invariant_quotient(A, V))
    return lhs == rhs


def hasse_edges(items: Sequence, leq: Callable) -> list[tuple[int, int]]:
    """Cover relations ``(lower, upper)`` of a finite poset given by ``leq``."""
    n = len(items)
    below = [[leq(items[i], items[j]) and i != j for j in range(n)] for i in range(n)]
    edges = []
    for i, j in itertools.product(range(n), repeat=2):
        if below[i][j] and not any(below[i][k] and below[k][j] for k in range(n)):
            edges.append((i, j))
    return edges


@dataclass(frozen=True, eq=False)
class ClosedLattice:
    """Closed subgroups and closed quotients with their order-reversing pairing.

    ``pairing[i]`` is the index of the quotient ``p^V`` for the i-th closed
    subgroup V; both lists are in canonical order.
    """

    action: PairAction
    closed_subgroups: tuple[Subgroup, ...]
    closed_quotients: tuple[Partition, ...]
    pairing: tuple[int, ...]
    subgroup_hasse: tuple[tuple[int, int], ...]
    quotient_hasse: tuple[tuple[int, int], ...]

    def _subgroup_index(self, V: Subgroup) -> int:
        try:
            return self.closed_subgroups.index(V)
        except ValueError:
            raise StructuralError(f"subgroup {V.members} is not closed") from None

    def _quotient_index(self, p: Partition) -> int:
        try:
            return self.closed_quotients.index(p)
        except ValueError:
            raise StructuralError("quotient is not closed") from None

    def subgroup_meet(self, i: int, j: int) -> int:
        a, b = self.closed_subgroups[i], self.closed_subgroups[j]
        return self._subgroup_index(Subgroup(a.group, tuple(set(a.members) & set(b.members))))

    def subgroup_join(self, i: int, j: int) -> int:
        a, b = self.closed_subgroups[i], self.closed_subgroups[j]
        V = generated_subgroup(a.group, set(a.members) | set(b.members))
        return self._subgroup_index(close_subgroup(self.action, V))

    def quotient_meet(self, i: int, j: int) -> int:
        return self._quotient_index(
            partition_meet(self.closed_quotients[i], self.closed_quotients[j])
        )

    def quotient_join(self, i: int, j: int) -> int:
        raw = partition_join(self.closed_quotients[i], self.closed_quotients[j])
        return self._quotient_index(close_quotient(self.action, raw))

    def is_sublattice(self) -> bool:
        """Raw generated subgroups and raw common refinements of closed objects stay closed."""
        subs, quos = self.closed_subgroups, self.closed_quotients
        for a, b in itertools.combinations(subs, 2):
            if generated_subgroup(a.group, set(a.members) | set(b.members)) not in subs:
                return False
        return all(partition_join(a, b) in quos for a, b in itertools.combinations(quos, 2))

    def exchanges_meets_and_joins(self) -> bool:
        pair = self.pairing
        for i, j in itertools.product(range(len(pair)), repeat=2):
            if pair[self.subgroup_meet(i, j)] != self.quotient_join(pair[i], pair[j]):
                return False
            if pair[self.subgroup_join(i, j)] != self.quotient_meet(pair[i], pair[j]):
                return False
        return True


def enumerate_closed(A: PairAction) -> ClosedLattice:
    """Sweep all subgroups; V is closed iff ``W_{p^V} == V``."""
    if len(A.group) > MAX_CLOSED_SWEEP:
        raise SizeError(f"|W| = {len(A.group)} exceeds the closed-object sweep cap")
    closed = []
    for V in enumerate_subgroups(A.group):
        pV = finest_invariant_quotient(A, V)
        if stabilizer_subgroup(A, pV) == V:
            closed.append((V, pV))
    subgroups = tuple(V for V, _ in closed)
    quotients = tuple(sorted({p for _, p in closed}, key=Partition.sort_key))
    if len(quotients) != len(subgroups):
        raise StructuralError("closed subgroups and closed quotients are not in bijection")
    pairing = tuple(quotients.index(p) for _, p in closed)
    for i, j in itertools.product(range(len(subgroups)), repeat=2):
        sub = subgroups[i].issubset(subgroups[j])
        rev = partition_leq(quotients[pairing[j]], quotients[pairing[i]])
        if sub != rev:
            raise StructuralError(f"pairing is not order reversing at ({i}, {j})")
    return ClosedLattice(
        action=A,
        closed_subgroups=subgroups,
        closed_quotients=quotients,
        pairing=pairing,
        subgroup_hasse=tuple(hasse_edges(subgroups, Subgroup.issubset)),
        quotient_hasse=tuple(hasse_edges(quotients, partition_leq)),
    )


def product_pair_action(m1: int, m2: int) -> PairAction:
    """B = B1 x B2 with the full pair domain and W = {id, w1, w2, w_flip}.

    Point ``(a, b)`` has index ``a * m2 + b``; ``w_k`` swaps the k-th
    coordinates of the two points of a pair.
    """
    if m1 < 1 or m2 < 1:
        raise DomainError("factor sizes must be positive")
    npts = m1 * m2
    if npts * npts > MAX_PRODUCT_DOMAIN:
        raise SizeError(f"product domain of {npts * npts} pairs exceeds the cap")
    W = make_involution_product(2)
    domain = tuple(itertools.product(range(npts), repeat=2))
    table = np.empty((len(W), len(domain)), dtype=np.int64)
    for g, elem in enumerate(W.elements):
        swap1, swap2 = elem[0] != 0, elem[2] != 2
        for d, (x, y) in enumerate(domain):
            (a, b), (a2, b2) = divmod(x, m2), divmod(y, m2)
            if swap1:
                a, a2 = a2, a
            if swap2:
                b, b2 = b2, b
            table[g, d] = (a * m2 + b) * npts + (a2 * m2 + b2)
    labels = tuple(divmod(x, m2) for x in range(npts))
    return PairAction(npts, domain, W, table, point_labels=labels)


def product_projection(m1: int, m2: int, factor: int) -> Partition:
    """The quotient B1 x B2 -> B_factor (factor is 1 or 2)."""
    if factor not in (1, 2):
        raise DomainError("factor must be 1 or 2")
    return Partition.from_labels(divmod(x, m2)[factor - 1] for x in range(m1 * m2))


def sample_partitions(
    size: int,
    count: int,
    seed: int,
    structured: Sequence[Partition] = (),
) -> list[Partition]:
    """Seeded pseudo-random partitions of ``range(size)``.

    Alternates uniform labelings with few blocks and random coarsenings of
    the ``structured`` quotients, so some samples have large stabilizers.
    """
    rng = random.Random(seed)
    out = []
    for k in range(count):
        if structured and k % 2:
            base = structured[rng.randrange(len(structured))]
            target = rng.randint(1, max(1, base.num_blocks))
            merge = [rng.randrange(target) for _ in range(base.num_blocks)]
            out.append(Partition.from_labels(merge[b] for b in base.block_id))
        else:
            nblocks = rng.randint(1, max(1, min(size, 6)))
            out.append(Partition.from_labels(rng.randrange(nblocks) for _ in range(size)))
    return out


@dataclass
class CorrespondenceAudit:
    """Violation counts of the Galois-connection laws over a test family."""

    subgroups: int = 0
    quotients: int = 0
    adjunction: int = 0
    antitone: int = 0
    subgroup_closure: int = 0
    quotient_closure: int = 0

    @property
    def violations(self) -> int:
        return self.adjunction + self.antitone + self.subgroup_closure + self.quotient_closure

    @property
    def ok(self) -> bool:
        return self.violations == 0


def audit_correspondence(
    A: PairAction,
    partitions: Sequence[Partition],
    subgroups: Optional[Sequence[Subgroup]] = None,
) -> CorrespondenceAudit:
    """Check adjunction, antitonicity and the closure axioms on every pair.

    Same biconditional as ``check_adjunction`` but each ``p^V`` and ``W_p``
    is computed once.
    """
    subs = list(subgroups) if subgroups is not None else enumerate_subgroups(A.group)
    quotient_of: dict[Subgroup, Partition] = {}

    def p_of(V: Subgroup) -> Partition:
        if V not in quotient_of:
            quotient_of[V] = finest_invariant_quotient(A, V)
        return quotient_of[V]

    stabs = [stabilizer_subgroup(A, p) for p in partitions]
    audit = CorrespondenceAudit(subgroups=len(subs), quotients=len(partitions))

    for V in subs:
        pV = p_of(V)
        for p, Wp in zip(partitions, stabs):
            if V.issubset(Wp) != partition_leq(p, pV):
                audit.adjunction += 1

    closure = {V: stabilizer_subgroup(A, p_of(V)) for V in subs}
    for V in subs:
        cl = closure[V]
        if not V.issubset(cl) or stabilizer_subgroup(A, p_of(cl)) != cl:
            audit.subgroup_closure += 1
    for V, V2 in itertools.product(subs, repeat=2):
        if V is not V2 and V.issubset(V2):
            if not partition_leq(p_of(V2), p_of(V)):
                audit.antitone += 1
            if not closure[V].issubset(closure[V2]):
                audit.subgroup_closure += 1

    qclosure = [p_of(Wp) for Wp in stabs]
    for p, cl in zip(partitions, qclosure):
        if not partition_leq(p, cl) or p_of(stabilizer_subgroup(A, cl)) != cl:
            audit.quotient_closure += 1
    for (p, Wp, cl), (p2, Wp2, cl2) in itertools.permutations(zip(partitions, stabs, qclosure), 2):
        if partition_leq(p, p2):
            if not Wp2.issubset(Wp):
                audit.antitone += 1
            if not partition_leq(cl, cl2):
                audit.quotient_closure += 1
    return audit
