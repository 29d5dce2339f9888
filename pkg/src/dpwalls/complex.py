"""The simplicial complexes on vertex subsystems of E5, E6, E7.

Two compatibility predicates are exposed:

* ``verbatim``  - two vertices are compatible when their subsystems are
  orthogonal or disjoint;
* ``geometric`` - compatible when orthogonal or nested.  For A1 pairs the
  two agree (only orthogonality is possible), for mixed pairs they differ:
  under ``geometric`` an A1 vertex is compatible with a bigger vertex only
  when its root lies inside it, and two A2xA2xA2 vertices are never
  compatible.

``geometric`` is the default everywhere downstream; ``verbatim`` is kept
for comparison reports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .subsystems import (
    RootSubsystem,
    SubsystemError,
    enumerate_vertex_subsystems,
    ortho_mask_of,
)

MODES = ("geometric", "verbatim")

_VERTEX_TYPES = {
    5: ("D2",),
    6: ("A1", "A2^3"),
    7: ("A1", "A2", "A3^2", "A7"),
}


@dataclass(frozen=True)
class BoundaryComplex:
    ambient_n: int
    mode: str
    vertices: tuple[RootSubsystem, ...]
    vertex_types: tuple[str, ...]

    def vertex_counts_by_type(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for t in self.vertex_types:
            counts[t] = counts.get(t, 0) + 1
        return counts

    def to_json(self) -> dict:
        return {
            "n": self.ambient_n,
            "mode": self.mode,
            "vertex_counts_by_type": self.vertex_counts_by_type(),
            "f_vector_prefix": [count_faces(self, d) for d in range(3)],
        }


def compatible(s1: RootSubsystem, s2: RootSubsystem, mode: str = "geometric") -> bool:
    """Whether two vertices span a simplex, under the chosen predicate."""
    if mode not in MODES:
        raise SubsystemError(f"unknown compatibility mode {mode!r}")
    n = s1.ambient_n
    m1, m2 = s1.mask(), s2.mask()
    if m1 == m2:
        return False
    orthogonal = m2 & ~ortho_mask_of(n, m1) == 0
    if orthogonal:
        return True
    if mode == "verbatim":
        return not (m1 & m2)
    return m1 & ~m2 == 0 or m2 & ~m1 == 0


@lru_cache(maxsize=None)
def build_complex(ambient_n: int, mode: str = "geometric") -> BoundaryComplex:
    if ambient_n not in _VERTEX_TYPES:
        raise SubsystemError(f"no boundary complex for rank {ambient_n}")
    if mode not in MODES:
        raise SubsystemError(f"unknown compatibility mode {mode!r}")
    vertices: list[RootSubsystem] = []
    types: list[str] = []
    for t in _VERTEX_TYPES[ambient_n]:
        for sub in enumerate_vertex_subsystems(ambient_n, t):
            vertices.append(sub)
            types.append(t)
    return BoundaryComplex(ambient_n, mode, tuple(vertices), tuple(types))


def _is_excluded(cx: BoundaryComplex, members: tuple[int, ...]) -> bool:
    # For E7, 7-tuples of pairwise orthogonal A1 vertices do not span a face.
    if cx.ambient_n != 7 or len(members) < 7:
        return False
    a1s = [i for i in members if cx.vertex_types[i] == "A1"]
    if len(a1s) < 7:
        return False
    for combo in itertools.combinations(a1s, 7):
        if all(
            compatible(cx.vertices[i], cx.vertices[j], cx.mode)
            for i, j in itertools.combinations(combo, 2)
        ):
            return True
    return False


def is_face(cx: BoundaryComplex, members: tuple[int, ...]) -> bool:
    """Whether the given vertex indices span a face of the complex."""
    if len(set(members)) != len(members):
        return False
    for i, j in itertools.combinations(members, 2):
        if not compatible(cx.vertices[i], cx.vertices[j], cx.mode):
            return False
    return not _is_excluded(cx, members)


def count_faces(cx: BoundaryComplex, dim: int, vertex_type: str | None = None) -> int:
    """Number of `dim`-dimensional faces, optionally with all vertices of
    one type.  Faces are cliques of the compatibility graph (minus the E7
    exclusion rule), counted by incremental clique extension."""
    if dim < 0:
        return 1  # the empty face
    indices = [
        i
        for i in range(len(cx.vertices))
        if vertex_type is None or cx.vertex_types[i] == vertex_type
    ]
    compat_masks: dict[int, int] = {}
    for pos, i in enumerate(indices):
        mask = 0
        for qos, j in enumerate(indices):
            if qos > pos and compatible(cx.vertices[i], cx.vertices[j], cx.mode):
                mask |= 1 << qos
        compat_masks[pos] = mask

    count = 0

    def walk(last: int, depth: int, allowed: int, chosen: tuple[int, ...]) -> None:
        nonlocal count
        if depth == dim + 1:
            if not _is_excluded(cx, tuple(indices[p] for p in chosen)):
                count += 1
            return
        rest = allowed
        while rest:
            low = rest & -rest
            p = low.bit_length() - 1
            rest ^= low
            walk(p, depth + 1, allowed & compat_masks[p], chosen + (p,))

    for pos in range(len(indices)):
        walk(pos, 1, compat_masks[pos], (pos,))
    return count
