"""Scenario runners behind the command line.

Each ``run_*`` function recomputes everything it reports and returns a
plain dict with keys ``scenario``, ``params``, ``counts``, ``lattice``,
``verdicts`` and ``details`` (the CLI adds ``timing_ms``).  A verdict is
``{"pass": bool, "method": str}``.
"""
from __future__ import annotations

import itertools
import math
import re
import time
from typing import Any, Optional

from weylcorr import building, linalg, morphism
from weylcorr.coxeter import (
    CoxeterGroup,
    Subgroup,
    enumerate_homomorphisms,
    enumerate_subgroups,
    generated_subgroup,
    is_irreducible,
    is_normal,
    longest_element,
    make_involution_product,
    make_symmetric_group,
)
from weylcorr.errors import DomainError, ParseError, StructuralError
from weylcorr.galois import (
    ClosedLattice,
    Partition,
    PairAction,
    audit_correspondence,
    close_subgroup,
    enumerate_closed,
    finest_invariant_quotient,
    partition_leq,
    product_pair_action,
    product_projection,
    sample_partitions,
    stabilizer_subgroup,
)

DEFAULT_SEED = 1729
RANDOM_PARTITIONS = 100
MIN_FACTOR, MAX_FACTOR = 2, 16


def _verdict(ok: bool, method: str) -> dict:
    return {"pass": bool(ok), "method": method}


def _subgroup_labels(V: Subgroup) -> list[str]:
    return [V.group.label(g) for g in V.elements]


def lattice_json(lattice: ClosedLattice, quotient_labels: Optional[dict[int, str]] = None) -> dict:
    quotient_labels = quotient_labels or {}
    nodes: list[dict[str, Any]] = []
    for i, V in enumerate(lattice.closed_subgroups):
        nodes.append({"id": f"S{i}", "kind": "subgroup", "order": len(V), "members": _subgroup_labels(V)})
    for i, p in enumerate(lattice.closed_quotients):
        node = {"id": f"Q{i}", "kind": "quotient", "num_blocks": p.num_blocks, "blocks": p.blocks()}
        if i in quotient_labels:
            node["label"] = quotient_labels[i]
        nodes.append(node)
    return {
        "nodes": nodes,
        "hasse": {
            "subgroup": [[f"S{a}", f"S{b}"] for a, b in lattice.subgroup_hasse],
            "quotient": [[f"Q{a}", f"Q{b}"] for a, b in lattice.quotient_hasse],
        },
        "pairing": [[f"S{i}", f"Q{j}"] for i, j in enumerate(lattice.pairing)],
    }


def _lattice_verdicts(A: PairAction, lattice: ClosedLattice, structured: list[Partition], seed: int) -> dict:
    samples = sample_partitions(A.num_points, RANDOM_PARTITIONS, seed, structured)
    audit = audit_correspondence(A, structured + samples)
    family = f"all {audit.subgroups} subgroups x {len(structured)} structured + {len(samples)} seeded random quotients"
    return {
        "adjunction": _verdict(audit.adjunction == 0, f"V <= W_p iff p <= p^V on {family}"),
        "antitone": _verdict(audit.antitone == 0, f"both maps order reversing on comparable pairs of {family}"),
        "closure_subgroups": _verdict(
            audit.subgroup_closure == 0, "closure extensive, idempotent, monotone on all subgroups"
        ),
        "closure_quotients": _verdict(
            audit.quotient_closure == 0, "closure extensive, idempotent, monotone on the quotient family"
        ),
        "anti_isomorphism": _verdict(
            lattice.exchanges_meets_and_joins(), "pairing swaps meets and joins on all pairs of closed objects"
        ),
        "sublattices": _verdict(
            lattice.is_sublattice(), "generated subgroups and common refinements of closed objects are closed"
        ),
    }


def run_flag_building(n: int, q: int, seed: int = DEFAULT_SEED) -> dict:
    """Flag building of F_q^n: counts, Bruhat orbits and the closed lattices."""
    chambers = building.enumerate_chambers(n, q)
    A = building.opposite_pair_action(n, q)
    orbits = building.diagonal_orbit_count(n, q)
    positions = building.relative_positions_attained(n, q)
    lattice = enumerate_closed(A)
    W = A.group

    types = morphism.flag_types(n)
    structured = [building.partial_flag_quotient(n, q, J) for J in types]
    cube: list[dict] = []
    labels: dict[int, str] = {}
    cube_ok = len(lattice.closed_quotients) == 2 ** (n - 1)
    for J, pJ in zip(types, structured):
        young = generated_subgroup(W, [W.generators[i - 1] for i in range(1, n) if i not in J])
        if pJ in lattice.closed_quotients:
            qi = lattice.closed_quotients.index(pJ)
            si = lattice.pairing.index(qi)
            labels[qi] = f"partial flags of type {list(J)}"
            match = lattice.closed_subgroups[si] == young == stabilizer_subgroup(A, pJ)
        else:
            qi = si = None
            match = False
        cube_ok &= match
        cube.append({
            "type": list(J),
            "quotient": None if qi is None else f"Q{qi}",
            "subgroup": None if si is None else f"S{si}",
            "young_generators": [W.labels[i - 1] for i in range(1, n) if i not in J],
            "matches": match,
        })
    for (J, pJ), (J2, pJ2) in itertools.product(zip(types, structured), repeat=2):
        cube_ok &= (set(J) <= set(J2)) == partition_leq(pJ, pJ2)

    w_long = W.index(longest_element(W))
    pair_index = {pair: d for d, pair in enumerate(A.domain)}
    flip_ok = all(A.action_table[w_long][d] == pair_index[(y, x)] for d, (x, y) in enumerate(A.domain))
    try:
        A.validate()
        action_ok = True
    except StructuralError:
        action_ok = False

    verdicts = {
        "chamber_count": _verdict(
            len(chambers) == building.gaussian_factorial(n, q), "enumeration vs Gaussian factorial"
        ),
        "orbits_indexed_by_weyl_group": _verdict(
            orbits == len(positions) == math.factorial(n),
            "upper-triangular orbits on chambers vs distinct relative positions vs n!",
        ),
        "pair_action": _verdict(action_ok, "identity, bijectivity and action law on the full table"),
        "long_element_is_flip": _verdict(flip_ok, "w_long.(E, F) == (F, E) on every opposite pair"),
        "boolean_cube": _verdict(
            cube_ok,
            f"closed quotients == partial-flag quotients, J -> p_J order isomorphism from subsets of 1..{n - 1}",
        ),
    }
    verdicts.update(_lattice_verdicts(A, lattice, structured, seed))
    return {
        "scenario": "flag-building",
        "params": {"n": n, "q": q, "seed": seed},
        "counts": {
            "chambers": len(chambers),
            "opposite_pairs": len(A.domain),
            "diagonal_orbits": orbits,
            "relative_positions": len(positions),
            "subgroups": len(enumerate_subgroups(W)),
            "closed_subgroups": len(lattice.closed_subgroups),
            "closed_quotients": len(lattice.closed_quotients),
        },
        "lattice": lattice_json(lattice, labels),
        "verdicts": verdicts,
        "details": {
            "cube_dimension": n - 1,
            "cube": "yes" if cube_ok else "no",
            "cube_bijection": cube,
        },
    }


def run_product(m1: int, m2: int, seed: int = DEFAULT_SEED) -> dict:
    """B = B1 x B2 with W = {id, w1, w2, w_flip}; closed quotients should be the factors."""
    for m in (m1, m2):
        if not MIN_FACTOR <= m <= MAX_FACTOR:
            raise DomainError(f"factor size {m} outside {MIN_FACTOR}..{MAX_FACTOR}")
    A = product_pair_action(m1, m2)
    W = A.group
    lattice = enumerate_closed(A)
    npts = m1 * m2
    named = {
        "one-block": Partition.one_block(npts),
        "pr_1": product_projection(m1, m2, 1),
        "pr_2": product_projection(m1, m2, 2),
        "identity": Partition.discrete(npts),
    }
    labels = {lattice.closed_quotients.index(p): k for k, p in named.items() if p in lattice.closed_quotients}
    expected_ok = set(lattice.closed_quotients) == set(named.values())

    flip = generated_subgroup(W, [W.flip])
    flip_closure = close_subgroup(A, flip)
    flip_ok = flip not in lattice.closed_subgroups and len(flip_closure) == len(W)

    factors = {}
    for k in (1, 2):
        V = generated_subgroup(W, [W.generators[k - 1]])
        pV = finest_invariant_quotient(A, V)
        factors[W.labels[k - 1]] = next((name for name, p in named.items() if p == pV), None)

    verdicts = {
        "closed_quotients_are_factors": _verdict(
            expected_ok, "closed quotients == {one-block, pr_1, pr_2, identity} as partitions"
        ),
        "flip_not_closed": _verdict(flip_ok, "<w_flip> absent from closed subgroups and its closure is W"),
    }
    verdicts.update(_lattice_verdicts(A, lattice, list(named.values()), seed))
    return {
        "scenario": "product",
        "params": {"m1": m1, "m2": m2, "seed": seed},
        "counts": {
            "points": npts,
            "domain_pairs": len(A.domain),
            "group_order": len(W),
            "closed_subgroups": len(lattice.closed_subgroups),
            "closed_quotients": len(lattice.closed_quotients),
        },
        "lattice": lattice_json(lattice, labels),
        "verdicts": verdicts,
        "details": {
            "flip_closure": _subgroup_labels(flip_closure),
            "quotient_of_factor_flip": factors,
        },
    }


_SYM = re.compile(r"^S_?(\d+)$")
_FLIPS = re.compile(r"^(?:Z2|\(Z/2\)|\(Z2\))\^(\d+)$")


def parse_group_spec(spec: str) -> CoxeterGroup:
    """``S4`` / ``S_4`` for symmetric groups, ``Z2^2`` / ``(Z/2)^2`` for flip products."""
    text = spec.strip().replace(" ", "")
    if m := _SYM.match(text):
        return make_symmetric_group(int(m.group(1)))
    if m := _FLIPS.match(text):
        return make_involution_product(int(m.group(1)))
    raise DomainError(f"unsupported group spec {spec!r}; use S<n> or Z2^<r>")


def _factor_of_kernel(K: Subgroup) -> Optional[str]:
    """For a kernel in (Z/2)^2, the factor projection its quotient p^K equals."""
    A = product_pair_action(2, 2)
    pK = finest_invariant_quotient(A, Subgroup(A.group, K.members))
    for k in (1, 2):
        if pK == product_projection(2, 2, k):
            return f"pr_{k}"
    return None


def run_obstruction(source: str, target: str) -> dict:
    """Homomorphisms W1 -> W2 sending the source flip to the target long element."""
    W1, W2 = parse_group_spec(source), parse_group_spec(target)
    if W2.kind != "A":
        raise DomainError(f"target {W2.name} has no long element; targets must be S<n>")
    pin = (W1.flip, longest_element(W2))
    every = enumerate_homomorphisms(W1, W2)
    homs = enumerate_homomorphisms(W1, W2, pin=pin)
    injective = [h for h in homs if h.is_injective]

    rows = []
    for h in homs:
        if h.is_injective:
            case = "injective: long element preserved (simple-group / A2-tilde case)"
        elif W1.kind == "Z2" and W1.rank == 2:
            factor = _factor_of_kernel(h.kernel)
            case = f"non-injective: kernel closed, map factors through {factor} (product case)"
        else:
            case = "non-injective: kernel is a non-trivial normal subgroup"
        rows.append({
            "generator_images": {W1.labels[k]: W2.label(x) for k, x in enumerate(h.generator_images)},
            "kernel": _subgroup_labels(h.kernel),
            "injective": h.is_injective,
            "case": case,
        })
    common = set(range(len(W1)))
    for h in homs:
        common &= set(h.kernel.members)

    verdicts = {
        "homomorphisms_verified": _verdict(
            all(h.preserves_products() for h in every), "image(xy) == image(x)image(y) on the full table"
        ),
        "kernels_normal": _verdict(all(is_normal(h.kernel, W1) for h in every), "conjugation by every element"),
        "pin_respected": _verdict(
            all(h(pin[0]) == pin[1] for h in homs), "flip -> w_long checked on each pinned map"
        ),
    }
    return {
        "scenario": "obstruction",
        "params": {"source": W1.name, "target": W2.name},
        "counts": {
            "homomorphisms": len(every),
            "pinned_homomorphisms": len(homs),
            "injective_pinned": len(injective),
        },
        "lattice": None,
        "verdicts": verdicts,
        "details": {
            "pin": {"source": W1.label(pin[0]), "target": W2.label(pin[1])},
            "source_irreducible": is_irreducible(W1),
            "obstruction": len(injective) == 0,
            "common_kernel": [W1.label(W1.elements[i]) for i in sorted(common)] if homs else None,
            "homomorphisms": rows,
        },
    }


def parse_map_spec(n: int, q: int, spec: str) -> morphism.ChamberMap:
    """``identity``, ``matrix:<n*n entries>`` (row-major, commas/spaces/semicolons) or ``random:<seed>``."""
    kind, _, arg = spec.partition(":")
    if kind == "identity" and not arg:
        return morphism.identity_map(n, q)
    if kind == "random":
        try:
            return morphism.random_permutation_map(n, q, int(arg))
        except ValueError:
            raise ParseError(f"random map needs an integer seed, got {arg!r}") from None
    if kind == "matrix":
        tokens = [t for t in re.split(r"[,;\s]+", arg) if t]
        try:
            entries = [int(t) % q for t in tokens]
        except ValueError:
            raise ParseError(f"matrix entries must be integers: {arg!r}") from None
        if len(entries) != n * n:
            raise ParseError(f"matrix needs {n * n} entries, got {len(entries)}")
        g = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if not linalg.is_invertible(g, q):
            raise ParseError("matrix is not invertible mod q")
        return morphism.matrix_map(n, q, g)
    raise ParseError(f"unknown map spec {spec!r}; use identity, matrix:<entries> or random:<seed>")


def run_embed_check(n: int, q: int, map_spec: str) -> dict:
    """Opposition, W-equivariance and face-map descent for one chamber map."""
    phi = parse_map_spec(n, q, map_spec)
    chambers = building.enumerate_chambers(n, q)
    violation = None

    def describe(check: str, pair, w=None) -> dict:
        x, y = pair
        out = {"check": check, "pair": [int(x), int(y)], "chambers": [str(chambers[x]), str(chambers[y])]}
        if w is not None:
            out["w"] = make_symmetric_group(n).label(w)
        return out

    bad_pair = morphism.find_opposition_violation(phi)
    opp_ok = bad_pair is None
    equi_ok = descent_ok = False
    face_counts = {}
    if not opp_ok:
        violation = describe("opposition", bad_pair)
    else:
        found = morphism.find_equivariance_violation(phi)
        equi_ok = found is None
        if not equi_ok:
            violation = describe("equivariance", found[1], found[0])
        else:
            try:
                faces = morphism.induced_face_maps(phi)
                descent_ok = True
                face_counts = {",".join(map(str, J)) or "-": len(m) for J, m in faces.items()}
            except StructuralError as exc:
                violation = {"check": "descent", "message": str(exc)}

    skipped = "skipped: an earlier check failed"
    return {
        "scenario": "embed-check",
        "params": {"n": n, "q": q, "map": map_spec},
        "counts": {
            "chambers": len(chambers),
            "opposite_pairs": len(building.opposite_pairs(n, q)),
            "face_map_types": len(face_counts),
        },
        "lattice": None,
        "verdicts": {
            "opposition_preserving": _verdict(opp_ok, "every opposite pair maps to an opposite pair"),
            "w_equivariant": _verdict(
                equi_ok, "(phi x phi)(w.d) == w.(phi x phi)(d) for all w in S_n, all opposite d"
                if opp_ok else skipped
            ),
            "descends_to_faces": _verdict(
                descent_ok, "well defined on every partial-flag type, restrictions and incidences kept"
                if equi_ok else skipped
            ),
        },
        "details": {"first_violation": violation, "face_map_sizes": face_counts},
    }


def timed(fn, *args, **kwargs) -> tuple[dict, float]:
    start = time.perf_counter()
    report = fn(*args, **kwargs)
    return report, (time.perf_counter() - start) * 1000.0
