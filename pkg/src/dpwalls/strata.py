"""Combinatorial strata of the blown-up E6 moduli space, via the flag model.

A stratum label is a strictly increasing chain of sets of pairwise
orthogonal roots of E6 (sizes 1..4), optionally decorated with an A2xA2xA2
subsystem containing every root of the top chain element.  Type strings
follow the a / a2 / a3 / a4 / b naming: one letter per chain element by
size, an optional trailing "b".
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .lattice import LatticeVector, pairing
from .subsystems import (
    RootSubsystem,
    SubsystemError,
    enumerate_vertex_subsystems,
    horizontal_line_map,
    horizontal_roots,
    orthogonal_a1_sets,
    orthogonal_complement,
    roots_to_mask,
    span_closure,
)

_CHAIN_SIZES = {"a": 1, "a2": 2, "a3": 3, "a4": 4}


class StratumLabelError(ValueError):
    pass


@dataclass(frozen=True)
class StratumLabel:
    """A flag S_1 < S_2 < ... of orthogonal A1 sets plus an optional b part."""

    flag: tuple[tuple[LatticeVector, ...], ...]
    b_part: RootSubsystem | None = None

    def type_string(self) -> str:
        parts = []
        for level in self.flag:
            size = len(level)
            parts.append("a" if size == 1 else f"a{size}")
        if self.b_part is not None:
            parts.append("b")
        return "".join(parts)

    def to_json(self) -> dict:
        out: dict = {
            "type": self.type_string(),
            "flag": [[r.to_json() for r in level] for level in self.flag],
        }
        if self.b_part is not None:
            out["b_part"] = self.b_part.to_json()
        return out


def parse_type_string(label: str) -> tuple[tuple[int, ...], bool]:
    """Split e.g. "aa2b" into chain sizes (1, 2) and a b flag."""
    text = label.strip().lower()
    has_b = text.endswith("b")
    if has_b:
        text = text[:-1]
    sizes = []
    for token in re.findall(r"a[234]?", text):
        sizes.append(_CHAIN_SIZES[token])
    if "".join("a" if s == 1 else f"a{s}" for s in sizes) != text:
        raise StratumLabelError(f"malformed stratum label {label!r}")
    if sizes != sorted(set(sizes)):
        raise StratumLabelError(f"chain sizes must strictly increase in {label!r}")
    if not sizes and not has_b:
        raise StratumLabelError("empty stratum label")
    if has_b and sizes and sizes[-1] > 3:
        raise StratumLabelError(
            f"{label!r}: an A2xA2xA2 holds at most 3 pairwise orthogonal roots"
        )
    return tuple(sizes), has_b


@lru_cache(maxsize=None)
def _orth_sets_by_size(size: int) -> tuple[tuple[LatticeVector, ...], ...]:
    return orthogonal_a1_sets(6, size)


@lru_cache(maxsize=None)
def _b_vertices() -> tuple[RootSubsystem, ...]:
    return enumerate_vertex_subsystems(6, "A2^3")


def _chains(sizes: tuple[int, ...]) -> list[tuple[tuple[LatticeVector, ...], ...]]:
    if not sizes:
        return [()]
    levels = [_orth_sets_by_size(s) for s in sizes]
    chains: list[tuple[tuple[LatticeVector, ...], ...]] = []

    def extend(prefix: tuple, depth: int) -> None:
        if depth == len(levels):
            chains.append(prefix)
            return
        prev = set(prefix[-1]) if prefix else None
        for cand in levels[depth]:
            if prev is None or prev < set(cand):
                extend(prefix + (cand,), depth + 1)

    extend((), 0)
    return chains


@lru_cache(maxsize=None)
def enumerate_strata(type_string: str) -> tuple[StratumLabel, ...]:
    """All strata of the given combinatorial type, canonically ordered."""
    sizes, has_b = parse_type_string(type_string)
    out: list[StratumLabel] = []
    for chain in _chains(sizes):
        if not has_b:
            out.append(StratumLabel(chain))
            continue
        top = set(chain[-1]) if chain else set()
        for b in _b_vertices():
            if top <= b.root_set():
                out.append(StratumLabel(chain, b))
    return tuple(sorted(out, key=lambda s: (s.flag, s.b_part.roots if s.b_part else ())))


def count_strata(type_string: str) -> int:
    return len(enumerate_strata(type_string))


def supported_type_strings() -> tuple[str, ...]:
    """The 23 boundary types of the flag model: all strictly increasing
    chains over sizes 1..4, with b allowed only over chains of top size <= 3."""
    names = []
    for r in range(5):
        for sizes in itertools.combinations((1, 2, 3, 4), r):
            base = "".join("a" if s == 1 else f"a{s}" for s in sizes)
            if sizes:
                names.append(base)
            if not sizes or sizes[-1] <= 3:
                names.append(base + "b")
    return tuple(sorted(set(names), key=lambda s: (len(s), s)))


def census() -> dict[str, int]:
    """Counts for every supported type (the model's full boundary census)."""
    return {name: count_strata(name) for name in supported_type_strings()}


# --- Eckardt triples -------------------------------------------------------

@lru_cache(maxsize=None)
def enumerate_eckardt_triples() -> tuple[tuple[LatticeVector, ...], ...]:
    """Unordered triples of pairwise orthogonal horizontal roots of E7 whose
    orthogonal complement has type D4."""
    horiz = set(horizontal_roots(7))
    out = []
    for triple in orthogonal_a1_sets(7, 3):
        if not all(r in horiz for r in triple):
            continue
        comp = orthogonal_complement(span_closure(7, triple))
        if comp.dynkin_type == "D4":
            out.append(triple)
    return tuple(sorted(out))


def eckardt_triples_as_lines() -> tuple[tuple[LatticeVector, ...], ...]:
    """The same triples, written as the corresponding lines of E6."""
    lines = horizontal_line_map(7)
    return tuple(tuple(sorted(lines[r] for r in t)) for t in enumerate_eckardt_triples())
