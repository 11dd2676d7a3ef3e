"""Checks on chamber maps between two flag buildings with the same Weyl group.

A chamber map passes when it sends opposite pairs to opposite pairs and
commutes with the S_n action on opposite pairs.  Passing maps are then
shown to descend to every partial-flag quotient with incidence-preserving
face maps, the finite stand-in for an embedding of buildings.
"""
from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from weylcorr import building
from weylcorr.building import Subspace
from weylcorr.errors import DomainError, PreconditionError, StructuralError
from weylcorr.linalg import Matrix

DEFAULT_RANDOM_TRIALS = 50


@dataclass(frozen=True)
class ChamberMap:
    """``mapping[i]`` is the target index of source chamber ``i``."""

    n: int
    q: int
    target_n: int
    target_q: int
    mapping: tuple[int, ...]

    def __post_init__(self):
        src = len(building.enumerate_chambers(self.n, self.q))
        tgt = len(building.enumerate_chambers(self.target_n, self.target_q))
        if len(self.mapping) != src:
            raise DomainError(f"map defined on {len(self.mapping)} of {src} source chambers")
        if any(not 0 <= x < tgt for x in self.mapping):
            raise DomainError("target chamber index out of range")


def identity_map(n: int, q: int) -> ChamberMap:
    return ChamberMap(n, q, n, q, tuple(range(len(building.enumerate_chambers(n, q)))))


def matrix_map(n: int, q: int, g: Matrix) -> ChamberMap:
    return ChamberMap(n, q, n, q, building.chamber_permutation(n, q, g))


def random_permutation_map(n: int, q: int, seed: int) -> ChamberMap:
    """A uniformly random bijection of chambers drawn from ``random.Random(seed)``."""
    perm = list(range(len(building.enumerate_chambers(n, q))))
    random.Random(seed).shuffle(perm)
    return ChamberMap(n, q, n, q, tuple(perm))


def _same_rank(phi: ChamberMap) -> None:
    if phi.n != phi.target_n:
        raise DomainError(f"source rank {phi.n - 1} and target rank {phi.target_n - 1} differ")


@functools.cache
def _pair_lookup(n: int, q: int) -> np.ndarray:
    size = len(building.enumerate_chambers(n, q))
    lookup = np.full((size, size), -1, dtype=np.int64)
    for d, (x, y) in enumerate(building.opposite_pairs(n, q)):
        lookup[x, y] = d
    return lookup


def find_opposition_violation(phi: ChamberMap) -> Optional[tuple[int, int]]:
    """First opposite source pair whose image is not opposite, or None."""
    _same_rank(phi)
    lookup = _pair_lookup(phi.target_n, phi.target_q)
    for x, y in building.opposite_pairs(phi.n, phi.q):
        if lookup[phi.mapping[x], phi.mapping[y]] < 0:
            return (x, y)
    return None


def check_opposition_preserving(phi: ChamberMap) -> bool:
    return find_opposition_violation(phi) is None


def find_equivariance_violation(phi: ChamberMap):
    """First ``(w, (x, y))`` with (phi x phi)(w.(x, y)) != w.(phi x phi)(x, y), or None."""
    if not check_opposition_preserving(phi):
        raise PreconditionError("equivariance is only defined for opposition-preserving maps")
    src = building.opposite_pair_action(phi.n, phi.q)
    tgt = building.opposite_pair_action(phi.target_n, phi.target_q)
    mapping = np.array(phi.mapping, dtype=np.int64)
    first = src.first
    second = np.array([y for _, y in src.domain], dtype=np.int64)
    image = _pair_lookup(phi.target_n, phi.target_q)[mapping[first], mapping[second]]
    for g, w in enumerate(src.group.elements):
        bad = np.flatnonzero(image[src.action_table[g]] != tgt.action_table[g][image])
        if bad.size:
            return w, src.domain[int(bad[0])]
    return None


def check_w_equivariance(phi: ChamberMap) -> bool:
    return find_equivariance_violation(phi) is None


def flag_types(n: int) -> list[tuple[int, ...]]:
    """Every subset of 1..n-1, by size then lexicographically."""
    r = range(1, n)
    return [J for k in range(n) for J in itertools.combinations(r, k)]


FaceMaps = dict[tuple[int, ...], dict[tuple[Subspace, ...], tuple[Subspace, ...]]]


def _face(chamber, J) -> tuple[Subspace, ...]:
    return tuple(chamber.spaces[j - 1] for j in J)


def induced_face_maps(phi: ChamberMap) -> FaceMaps:
    """Descend phi to type-J partial flags for every J and check incidences.

    Raises StructuralError naming the first pair of chambers that share a
    type-J face but whose images do not.
    """
    if not check_opposition_preserving(phi):
        raise PreconditionError("face maps need an opposition-preserving map")
    if not check_w_equivariance(phi):
        raise PreconditionError("face maps need a W-equivariant map")
    src = building.enumerate_chambers(phi.n, phi.q)
    tgt = building.enumerate_chambers(phi.target_n, phi.target_q)
    maps: FaceMaps = {}
    for J in flag_types(phi.n):
        face_map: dict = {}
        witness: dict = {}
        for i, c in enumerate(src):
            key, value = _face(c, J), _face(tgt[phi.mapping[i]], J)
            if face_map.setdefault(key, value) != value:
                raise StructuralError(
                    f"chambers {witness[key]} and {i} share their type-{list(J)} face "
                    "but their images do not"
                )
            witness.setdefault(key, i)
        maps[J] = face_map

    for J in flag_types(phi.n):
        for k, j in enumerate(J):
            sub = J[:k] + J[k + 1:]
            for flag, image in maps[J].items():
                if maps[sub][flag[:k] + flag[k + 1:]] != image[:k] + image[k + 1:]:
                    raise StructuralError(f"type-{list(J)} face map does not restrict to type {list(sub)}")

    for i, j in itertools.combinations(range(1, phi.n), 2):
        for (U,), (U2,) in maps[(i,)].items():
            for (V,), (V2,) in maps[(j,)].items():
                if V.contains(U) and not V2.contains(U2):
                    raise StructuralError(f"incidence of dimensions {i} < {j} is not preserved")
    return maps
