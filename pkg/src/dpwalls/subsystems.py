"""Root subsystems of E_n (E_5 = D_5): closure, Dynkin typing, complements.

A subsystem is stored as its set of positive roots and is closed under the
integer span: every positive root of the ambient system that is an integer
combination of members is itself a member.  (The rational span would wrongly
absorb full-rank products such as A2xA2xA2 inside E6, whose root lattice has
index 3; integer closure keeps exactly the product roots.)

Orthogonality-heavy enumerations run on bitmasks indexed by the canonical
root order, so pair scans over hundreds of subsystems stay cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .lattice import (
    LatticeVector,
    RankError,
    e,
    enumerate_roots,
    h,
    is_root,
    pairing,
    root_from_label,
    root_label,
)


class SubsystemError(ValueError):
    pass


# --- integer linear algebra ----------------------------------------------

def _integer_echelon(vectors: list[tuple[int, ...]]) -> list[list[int]]:
    """Row echelon form over Z (unimodular row operations only)."""
    work = [list(v) for v in vectors if any(v)]
    if not work:
        return []
    ncols = len(work[0])
    basis: list[list[int]] = []
    for col in range(ncols):
        while True:
            nonzero = [r for r in work if r[col] != 0]
            if not nonzero:
                break
            pivot = min(nonzero, key=lambda r: abs(r[col]))
            reduced_any = False
            for r in work:
                if r is not pivot and r[col] != 0:
                    q = r[col] // pivot[col]
                    for i in range(ncols):
                        r[i] -= q * pivot[i]
                    reduced_any = True
            if not reduced_any:
                if pivot[col] < 0:
                    pivot[:] = [-x for x in pivot]
                basis.append(pivot[:])
                work = [r for r in work if r is not pivot and any(r)]
                break
            work = [r for r in work if any(r)]
    basis.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    return basis


def _in_integer_span(basis: list[list[int]], v: tuple[int, ...]) -> bool:
    rem = list(v)
    for row in basis:
        p = next(i for i, x in enumerate(row) if x)
        if rem[p] != 0:
            if rem[p] % row[p] != 0:
                return False
            q = rem[p] // row[p]
            for i in range(len(rem)):
                rem[i] -= q * row[i]
    return not any(rem)


def integer_rank(vectors) -> int:
    return len(_integer_echelon([tuple(v) for v in vectors]))


# --- bitmask tables over the canonical root order --------------------------

@lru_cache(maxsize=None)
def root_index(n: int) -> dict[LatticeVector, int]:
    return {r: i for i, r in enumerate(enumerate_roots(n))}


@lru_cache(maxsize=None)
def _ortho_bits(n: int) -> tuple[int, ...]:
    """For each root index i, a bitmask of the roots orthogonal to it."""
    roots = enumerate_roots(n)
    masks = []
    for r in roots:
        bits = 0
        for j, s in enumerate(roots):
            if pairing(r, s) == 0:
                bits |= 1 << j
        masks.append(bits)
    return tuple(masks)


def roots_to_mask(n: int, roots) -> int:
    idx = root_index(n)
    mask = 0
    for r in roots:
        mask |= 1 << idx[r]
    return mask


def mask_to_roots(n: int, mask: int) -> tuple[LatticeVector, ...]:
    all_roots = enumerate_roots(n)
    return tuple(all_roots[i] for i in _bit_indices(mask))


def _bit_indices(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def ortho_mask_of(n: int, mask: int) -> int:
    """Roots orthogonal to every root in `mask`."""
    bits = _ortho_bits(n)
    out = (1 << len(enumerate_roots(n))) - 1
    for i in _bit_indices(mask):
        out &= bits[i]
    return out


# --- Dynkin classification ------------------------------------------------

_COMPONENT_SHAPES = {
    (1, (0,), ()): "A1",
    (2, (1, 1), ()): "A2",
    (3, (1, 1, 2), ()): "A3",
    (4, (1, 1, 2, 2), ()): "A4",
    (5, (1, 1, 2, 2, 2), ()): "A5",
    (6, (1, 1, 2, 2, 2, 2), ()): "A6",
    (7, (1, 1, 2, 2, 2, 2, 2), ()): "A7",
    (4, (1, 1, 1, 3), (1, 1, 1)): "D4",
    (5, (1, 1, 1, 2, 3), (1, 1, 2)): "D5",
    (6, (1, 1, 1, 2, 2, 3), (1, 1, 3)): "D6",
    (7, (1, 1, 1, 2, 2, 2, 3), (1, 1, 4)): "D7",
    (6, (1, 1, 1, 2, 2, 3), (1, 2, 2)): "E6",
    (7, (1, 1, 1, 2, 2, 2, 3), (1, 2, 3)): "E7",
}

_POSITIVE_ROOT_COUNT = {
    "A1": 1, "A2": 3, "A3": 6, "A4": 10, "A5": 15, "A6": 21, "A7": 28,
    "D4": 12, "D5": 20, "D6": 30, "D7": 42, "E6": 36, "E7": 63,
}

_RANK_OF_LABEL = {lab: int(lab[1]) for lab in _POSITIVE_ROOT_COUNT}


def _branch_lengths(nodes: list[int], adj: dict[int, set[int]]) -> tuple[int, ...]:
    forks = [v for v in nodes if len(adj[v]) == 3]
    if len(forks) != 1:
        return ()
    fork = forks[0]
    lengths = []
    for start in adj[fork]:
        length = 1
        prev, cur = fork, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths))


def _classify_simple_graph(simples: list[LatticeVector]) -> list[str]:
    """Component labels of the Cartan graph on a set of simple roots."""
    idx = range(len(simples))
    adj: dict[int, set[int]] = {i: set() for i in idx}
    for i, j in itertools.combinations(idx, 2):
        p = pairing(simples[i], simples[j])
        if p == 1:
            adj[i].add(j)
            adj[j].add(i)
        elif p != 0:
            raise SubsystemError(f"simple roots with pairing {p}; closure is broken")
    seen: set[int] = set()
    labels = []
    for i in idx:
        if i in seen:
            continue
        comp: list[int] = []
        stack = [i]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            comp.append(v)
            stack.extend(adj[v] - seen)
        comp_set = set(comp)
        key = (
            len(comp),
            tuple(sorted(len(adj[v] & comp_set) for v in comp)),
            _branch_lengths(comp, adj),
        )
        label = _COMPONENT_SHAPES.get(key)
        if label is None:
            raise SubsystemError(f"unclassifiable Dynkin component of size {len(comp)}")
        labels.append(label)
    return sorted(labels)


@dataclass(frozen=True)
class RootSubsystem:
    """Integer-span-closed set of positive roots with its Dynkin type."""

    ambient_n: int
    roots: tuple[LatticeVector, ...]
    dynkin_type: str = field(compare=False)

    def __post_init__(self) -> None:
        if tuple(sorted(self.roots)) != self.roots:
            raise SubsystemError("roots must be canonically sorted")

    @property
    def rank(self) -> int:
        return integer_rank([r.coeffs for r in self.roots])

    def root_set(self) -> frozenset[LatticeVector]:
        return frozenset(self.roots)

    def mask(self) -> int:
        return roots_to_mask(self.ambient_n, self.roots)

    def labels(self) -> tuple[str, ...]:
        return tuple(root_label(r) for r in self.roots)

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient_n,
            "type": self.dynkin_type,
            "roots": [r.to_json() for r in self.roots],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RootSubsystem":
        gens = [LatticeVector.from_json(r) for r in data["roots"]]
        sub = span_closure(data["ambient"], gens)
        if [r.to_json() for r in sub.roots] != list(data["roots"]):
            raise SubsystemError("stored roots are not span-closed")
        return sub

    def __repr__(self) -> str:
        return f"RootSubsystem({self.dynkin_type}: {','.join(self.labels())})"


def _positive_form(v: LatticeVector) -> LatticeVector:
    if v in root_index(v.n):
        return v
    w = -v
    if w in root_index(v.n):
        return w
    raise SubsystemError(f"not a root of E{v.n}: {v}")


def span_closure(ambient_n: int, generators) -> RootSubsystem:
    """Smallest closed subsystem containing the generators."""
    gens = [_positive_form(g) for g in generators]
    for g in gens:
        if g.n != ambient_n:
            raise RankError("generator rank differs from ambient rank")
    basis = _integer_echelon([g.coeffs for g in gens])
    members = tuple(
        r for r in enumerate_roots(ambient_n) if _in_integer_span(basis, r.coeffs)
    )
    return RootSubsystem(ambient_n, members, _type_of_roots(members))


def simple_roots(sub: RootSubsystem) -> tuple[LatticeVector, ...]:
    """Members not expressible as a sum of two members."""
    sums = {a + b for a, b in itertools.combinations_with_replacement(sub.roots, 2)}
    return tuple(r for r in sub.roots if r not in sums)


def _type_of_roots(roots: tuple[LatticeVector, ...]) -> str:
    if not roots:
        return "0"
    sums = {a + b for a, b in itertools.combinations_with_replacement(roots, 2)}
    simples = [r for r in roots if r not in sums]
    labels = _classify_simple_graph(simples)
    expected = sum(_POSITIVE_ROOT_COUNT[lab] for lab in labels)
    if expected != len(roots):
        raise SubsystemError(
            f"type {'x'.join(labels)} needs {expected} positive roots, found {len(roots)}"
        )
    return "x".join(labels)


def dynkin_type(sub: RootSubsystem) -> str:
    """Recompute the type from the roots (must match the stored value)."""
    label = _type_of_roots(sub.roots)
    if label != sub.dynkin_type and not (sub.dynkin_type == "D2" and label == "A1xA1"):
        raise SubsystemError(f"stored type {sub.dynkin_type} != recomputed {label}")
    return label


def subsystem_from_labels(ambient_n: int, labels) -> RootSubsystem:
    return span_closure(ambient_n, [root_from_label(ambient_n, s) for s in labels])


# --- predicates -----------------------------------------------------------

def are_orthogonal(s1: RootSubsystem, s2: RootSubsystem) -> bool:
    _check_ambient(s1, s2)
    return s2.mask() & ~ortho_mask_of(s1.ambient_n, s1.mask()) == 0


def are_disjoint(s1: RootSubsystem, s2: RootSubsystem) -> bool:
    _check_ambient(s1, s2)
    return not (s1.mask() & s2.mask())


def contains(s1: RootSubsystem, s2: RootSubsystem) -> bool:
    """Whether s1 contains s2."""
    _check_ambient(s1, s2)
    return s2.mask() & ~s1.mask() == 0


def _check_ambient(s1: RootSubsystem, s2: RootSubsystem) -> None:
    if s1.ambient_n != s2.ambient_n:
        raise RankError("subsystems live in different ambient lattices")


def orthogonal_complement(sub: RootSubsystem) -> RootSubsystem:
    n = sub.ambient_n
    perp_mask = ortho_mask_of(n, sub.mask())
    perp = mask_to_roots(n, perp_mask)
    if not perp:
        return RootSubsystem(n, (), "0")
    return RootSubsystem(n, perp, _type_of_roots(perp))


def restrict_and_classify(sub: RootSubsystem, m: int) -> tuple[RootSubsystem, str]:
    """Intersect with the corank-1 sublattice (e_n-coefficient zero).

    Returns the restricted subsystem of E_m and its type; an empty
    intersection is labeled "horizontal".
    """
    if m != sub.ambient_n - 1:
        raise RankError(f"restriction goes to rank {sub.ambient_n - 1}, not {m}")
    kept = [r.restrict(m) for r in sub.roots]
    kept_roots = tuple(sorted(r for r in kept if r is not None))
    if not kept_roots:
        return RootSubsystem(m, (), "0"), "horizontal"
    restricted = RootSubsystem(m, kept_roots, _type_of_roots(kept_roots))
    return restricted, restricted.dynkin_type


def reflect(v: LatticeVector, alpha: LatticeVector) -> LatticeVector:
    """Reflection in a root: v + (v.alpha) alpha."""
    if not is_root(alpha):
        raise SubsystemError(f"not a root: {alpha}")
    return v + alpha.scale(pairing(v, alpha))


def simple_weyl_generators(n: int) -> tuple[LatticeVector, ...]:
    """Simple roots of E_n: e_i - e_{i+1} and h - e_1 - e_2 - e_3."""
    gens = [e(n, i) - e(n, i + 1) for i in range(1, n)]
    gens.append(h(n) - e(n, 1) - e(n, 2) - e(n, 3))
    return tuple(gens)


def reflect_subsystem(sub: RootSubsystem, alpha: LatticeVector) -> RootSubsystem:
    imgs = [_positive_form(reflect(r, alpha)) for r in sub.roots]
    return RootSubsystem(sub.ambient_n, tuple(sorted(imgs)), sub.dynkin_type)


# --- vertex subsystem enumeration ----------------------------------------

_TYPE_ALIASES = {
    "d2": "D2", "a1": "A1", "a2": "A2", "a7": "A7", "d4": "D4",
    "a2^3": "A2^3", "a2x3": "A2^3", "a2xa2xa2": "A2^3", "a2*3": "A2^3",
    "a3^2": "A3^2", "a3xa3": "A3^2", "a3*2": "A3^2",
    "2a1": "2A1", "3a1": "3A1", "4a1": "4A1",
    "a1xa1": "2A1", "a1xa1xa1": "3A1", "a1xa1xa1xa1": "4A1",
}

_SUPPORTED = {
    (5, "D2"), (6, "A1"), (6, "A2^3"), (7, "A1"), (7, "A2"), (7, "A3^2"),
    (7, "A7"), (6, "2A1"), (6, "3A1"), (6, "4A1"), (7, "D4"),
}


def normalize_type(name: str) -> str:
    key = name.strip().lower().replace("×", "x").replace(" ", "")
    return _TYPE_ALIASES.get(key, name.strip())


def _a1(n: int, r: LatticeVector) -> RootSubsystem:
    return RootSubsystem(n, (r,), "A1")


@lru_cache(maxsize=None)
def orthogonal_a1_sets(n: int, size: int) -> tuple[tuple[LatticeVector, ...], ...]:
    """All sets of `size` pairwise orthogonal positive roots, sorted."""
    roots = enumerate_roots(n)
    bits = _ortho_bits(n)
    results: list[tuple[int, ...]] = []

    def extend(current: tuple[int, ...], allowed: int) -> None:
        if len(current) == size:
            results.append(current)
            return
        rest = allowed & ~((1 << (current[-1] + 1)) - 1)
        for i in _bit_indices(rest):
            extend(current + (i,), allowed & bits[i])

    for i in range(len(roots)):
        extend((i,), bits[i])
    return tuple(tuple(roots[i] for i in combo) for combo in sorted(results))


@lru_cache(maxsize=None)
def _a2_subsystems(n: int) -> tuple[RootSubsystem, ...]:
    roots = enumerate_roots(n)
    seen: dict[tuple, RootSubsystem] = {}
    for a, b in itertools.combinations(roots, 2):
        if pairing(a, b) != 0:
            sub = span_closure(n, [a, b])
            if sub.dynkin_type == "A2":
                seen.setdefault(sub.roots, sub)
    return tuple(seen[k] for k in sorted(seen))


@lru_cache(maxsize=None)
def _a_chain_subsystems(n: int, k: int) -> tuple[RootSubsystem, ...]:
    """All subsystems of type A_k, grown by attaching a root to an end."""
    if k == 1:
        return tuple(_a1(n, r) for r in enumerate_roots(n))
    if k == 2:
        return _a2_subsystems(n)
    target = f"A{k}"
    prev = _a_chain_subsystems(n, k - 1)
    roots = enumerate_roots(n)
    seen: dict[tuple, RootSubsystem] = {}
    for sub in prev:
        simples = simple_roots(sub)
        rset = sub.root_set()
        for r in roots:
            if r in rset:
                continue
            # only simple extensions: r attached to exactly one simple root
            attach = [abs(pairing(r, s)) for s in simples]
            if sum(attach) != 1:
                continue
            grown = span_closure(n, list(sub.roots) + [r])
            if grown.dynkin_type == target:
                seen.setdefault(grown.roots, grown)
    return tuple(seen[key] for key in sorted(seen))


@lru_cache(maxsize=None)
def _a2_cubed(n: int = 6) -> tuple[RootSubsystem, ...]:
    a2s = _a2_subsystems(n)
    masks = [s.mask() for s in a2s]
    orthos = [ortho_mask_of(n, m) for m in masks]
    seen: dict[tuple, RootSubsystem] = {}
    for i, j, k in itertools.combinations(range(len(a2s)), 3):
        if masks[j] & ~orthos[i] or masks[k] & ~orthos[i] or masks[k] & ~orthos[j]:
            continue
        union = tuple(sorted(a2s[i].roots + a2s[j].roots + a2s[k].roots))
        seen.setdefault(union, RootSubsystem(n, union, "A2xA2xA2"))
    return tuple(seen[key] for key in sorted(seen))


@lru_cache(maxsize=None)
def _a3_squared(n: int = 7) -> tuple[RootSubsystem, ...]:
    a3s = _a_chain_subsystems(n, 3)
    masks = [s.mask() for s in a3s]
    orthos = [ortho_mask_of(n, m) for m in masks]
    seen: dict[tuple, RootSubsystem] = {}
    for i, j in itertools.combinations(range(len(a3s)), 2):
        if masks[j] & ~orthos[i]:
            continue
        union_roots = tuple(sorted(a3s[i].roots + a3s[j].roots))
        closed = span_closure(n, union_roots)
        if closed.roots == union_roots:
            seen.setdefault(union_roots, RootSubsystem(n, union_roots, "A3xA3"))
    return tuple(seen[key] for key in sorted(seen))


@lru_cache(maxsize=None)
def _a7_subsystems(n: int = 7) -> tuple[RootSubsystem, ...]:
    """A7 subsystems of E7, grown from their E6 trace A1 x A5.

    Every A7 meets E6 in A1 x A5 and contains a horizontal root, so growing
    each of the 36 pairs (root of E6, its A5 complement) by horizontal roots
    finds them all without walking the full A2 -> ... -> A7 chain tower.
    """
    seen: dict[tuple, RootSubsystem] = {}
    for beta6 in enumerate_roots(6):
        beta = beta6.extend(n)
        a5 = orthogonal_complement(span_closure(6, [beta6]))
        base = [beta] + [r.extend(n) for r in a5.roots]
        for r in horizontal_roots(n):
            grown = span_closure(n, base + [r])
            if grown.dynkin_type == "A7":
                seen.setdefault(grown.roots, grown)
    return tuple(seen[key] for key in sorted(seen))


@lru_cache(maxsize=None)
def _d4_subsystems(n: int = 7) -> tuple[RootSubsystem, ...]:
    seen: dict[tuple, RootSubsystem] = {}
    for triple in orthogonal_a1_sets(n, 3):
        mask = roots_to_mask(n, triple)
        perp_roots = mask_to_roots(n, ortho_mask_of(n, mask))
        for comp_roots in _connected_components(perp_roots):
            if len(comp_roots) == 12:
                comp = RootSubsystem(n, comp_roots, _type_of_roots(comp_roots))
                if comp.dynkin_type == "D4":
                    seen.setdefault(comp.roots, comp)
    return tuple(seen[key] for key in sorted(seen))


def _connected_components(roots: tuple[LatticeVector, ...]) -> list[tuple[LatticeVector, ...]]:
    """Components under the non-orthogonality graph."""
    remaining = set(roots)
    comps = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        frontier = [seed]
        while frontier:
            cur = frontier.pop()
            for r in list(remaining - comp):
                if pairing(cur, r) != 0:
                    comp.add(r)
                    frontier.append(r)
        comps.append(tuple(sorted(comp)))
        remaining -= comp
    return comps


def enumerate_vertex_subsystems(ambient_n: int, type_name: str) -> tuple[RootSubsystem, ...]:
    """All vertex subsystems of the given type, canonically ordered."""
    kind = normalize_type(type_name)
    if (ambient_n, kind) not in _SUPPORTED:
        raise SubsystemError(f"unsupported vertex type ({ambient_n}, {type_name})")
    if kind == "A1":
        return tuple(_a1(ambient_n, r) for r in enumerate_roots(ambient_n))
    if kind == "A2":
        return _a2_subsystems(ambient_n)
    if kind == "A2^3":
        return _a2_cubed(ambient_n)
    if kind == "A3^2":
        return _a3_squared(ambient_n)
    if kind == "A7":
        return _a7_subsystems(ambient_n)
    if kind == "D4":
        return _d4_subsystems(ambient_n)
    if kind == "D2":
        # Orthogonal A1 pairs whose complement in D5 is an A3; equivalently
        # the partition pairs {ij, klm} of {1..5}.
        out = []
        for pair in orthogonal_a1_sets(5, 2):
            sub = span_closure(5, pair)
            if sub.dynkin_type != "A1xA1":
                continue
            if orthogonal_complement(sub).dynkin_type == "A3":
                out.append(RootSubsystem(5, sub.roots, "D2"))
        return tuple(sorted(out, key=lambda s: s.roots))
    size = int(kind[0])
    sets = orthogonal_a1_sets(ambient_n, size)
    label = "x".join(["A1"] * size)
    return tuple(RootSubsystem(ambient_n, s, label) for s in sets)


@lru_cache(maxsize=None)
def horizontal_roots(n_upper: int) -> tuple[LatticeVector, ...]:
    """Positive roots of E_n not lying in E_{n-1} (nonzero last coefficient)."""
    return tuple(r for r in enumerate_roots(n_upper) if r.coeffs[-1] != 0)


def horizontal_line_map(n_upper: int) -> dict[LatticeVector, LatticeVector]:
    """Bijection horizontal root -> line of E_{n-1}, via alpha = line - e_n."""
    out = {}
    for r in horizontal_roots(n_upper):
        line = (r + e(n_upper, n_upper)).restrict(n_upper - 1)
        if line is None:
            raise SubsystemError(f"horizontal root {r} is not of the form line - e_n")
        out[r] = line
    return out


# --- independent brute-force classifier (test oracle) ---------------------

def brute_force_type(sub: RootSubsystem) -> str:
    """Classify by component invariants (root count and lattice rank) alone.

    Independent of the simple-root/Cartan-graph path used by
    :func:`dynkin_type`; the (count, rank) pair identifies every type that
    fits in rank 7.
    """
    labels = []
    for comp_roots in _connected_components(sub.roots):
        count = len(comp_roots)
        rank = integer_rank([r.coeffs for r in comp_roots])
        match = [
            lab
            for lab, c in _POSITIVE_ROOT_COUNT.items()
            if c == count and _RANK_OF_LABEL[lab] == rank
        ]
        if len(match) != 1:
            raise SubsystemError(f"ambiguous component with {count} roots, rank {rank}")
        labels.append(match[0])
    return "x".join(sorted(labels)) if labels else "0"
