"""Exact arithmetic in the lattice Z^{n+1} with basis h, e_1, ..., e_n.

The pairing is h^2 = 1, e_i^2 = -1, mixed products 0, so a vector
v = (d; m_1, ..., m_n) pairs as ``u.v = d_u d_v - sum(m_u m_v)``.
Everything is plain integers; no floats appear anywhere in this module.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import lru_cache

MIN_RANK = 5
MAX_RANK = 8
ENUM_MAX_RANK = 7  # enumeration operations stop at E7; E8 is out of scope


class RankError(ValueError):
    """Rank parameter outside the supported range, or a rank mismatch."""


@dataclass(frozen=True, order=True)
class LatticeVector:
    """Integer class (d; m_1..m_n) in the basis (h, e_1, ..., e_n).

    Ordering is lexicographic on the coefficient tuple (d first), which is
    the canonical order used for every enumeration in the package.
    """

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not (MIN_RANK <= self.n <= MAX_RANK):
            raise RankError(f"rank must be in [{MIN_RANK}, {MAX_RANK}], got {self.n}")
        if len(self.coeffs) != self.n + 1:
            raise ValueError(
                f"expected {self.n + 1} coefficients for rank {self.n}, got {len(self.coeffs)}"
            )
        if not all(isinstance(c, int) for c in self.coeffs):
            raise TypeError("coefficients must be integers")

    @property
    def d(self) -> int:
        return self.coeffs[0]

    @property
    def m(self) -> tuple[int, ...]:
        return self.coeffs[1:]

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        _check_same_rank(self, other)
        return LatticeVector(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        _check_same_rank(self, other)
        return LatticeVector(self.n, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.n, tuple(-a for a in self.coeffs))

    def scale(self, k: int) -> "LatticeVector":
        return LatticeVector(self.n, tuple(k * a for a in self.coeffs))

    def dot(self, other: "LatticeVector") -> int:
        return pairing(self, other)

    def restrict(self, m: int) -> "LatticeVector | None":
        """Drop e_{m+1..n}; None if any dropped coefficient is nonzero."""
        if not (MIN_RANK <= m < self.n):
            raise RankError(f"cannot restrict rank {self.n} to rank {m}")
        if any(c != 0 for c in self.coeffs[m + 1 :]):
            return None
        return LatticeVector(m, self.coeffs[: m + 1])

    def extend(self, n: int) -> "LatticeVector":
        """Include into the bigger lattice by zero-padding e-coefficients."""
        if n < self.n:
            raise RankError(f"cannot extend rank {self.n} to smaller rank {n}")
        return LatticeVector(n, self.coeffs + (0,) * (n - self.n))

    def to_text(self) -> str:
        return f"{self.d};{','.join(str(c) for c in self.m)}"

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    @classmethod
    def from_text(cls, text: str) -> "LatticeVector":
        match = re.fullmatch(r"\s*(-?\d+)\s*;\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*", text)
        if match is None:
            raise ValueError(f"not a lattice vector: {text!r}")
        d = int(match.group(1))
        ms = tuple(int(part) for part in match.group(2).split(","))
        return cls(len(ms), (d,) + ms)

    @classmethod
    def from_json(cls, data: list[int] | str) -> "LatticeVector":
        if isinstance(data, str):
            data = json.loads(data)
        coeffs = tuple(int(c) for c in data)
        return cls(len(coeffs) - 1, coeffs)

    def __str__(self) -> str:
        return self.to_text()


def _check_same_rank(u: LatticeVector, v: LatticeVector) -> None:
    if u.n != v.n:
        raise RankError(f"rank mismatch: {u.n} != {v.n}")


def vector(n: int, d: int, *m: int) -> LatticeVector:
    return LatticeVector(n, (d,) + tuple(m))


def h(n: int) -> LatticeVector:
    return LatticeVector(n, (1,) + (0,) * n)


def e(n: int, i: int) -> LatticeVector:
    """Exceptional class e_i, 1-based."""
    if not (1 <= i <= n):
        raise ValueError(f"e_{i} does not exist in rank {n}")
    coeffs = [0] * (n + 1)
    coeffs[i] = 1
    return LatticeVector(n, tuple(coeffs))


def pairing(u: LatticeVector, v: LatticeVector) -> int:
    """Signature-(1, n) product: d_u*d_v - sum of e-coefficient products."""
    _check_same_rank(u, v)
    return u.coeffs[0] * v.coeffs[0] - sum(a * b for a, b in zip(u.coeffs[1:], v.coeffs[1:]))


def canonical_class(n: int) -> LatticeVector:
    """k = -3h + e_1 + ... + e_n."""
    if not (MIN_RANK <= n <= MAX_RANK):
        raise RankError(f"rank must be in [{MIN_RANK}, {MAX_RANK}], got {n}")
    return LatticeVector(n, (-3,) + (1,) * n)


def is_root(v: LatticeVector) -> bool:
    """v.v = -2 and v.k = 0."""
    return pairing(v, v) == -2 and pairing(v, canonical_class(v.n)) == 0


def is_line(v: LatticeVector) -> bool:
    """v.v = -1 and v.k = -1, i.e. the class of a (-1)-curve."""
    k = canonical_class(v.n)
    return pairing(v, v) == -1 and pairing(v, k) == -1


def _check_enum_rank(n: int) -> None:
    if not (MIN_RANK <= n <= ENUM_MAX_RANK):
        raise RankError(f"enumeration supports ranks {MIN_RANK}..{ENUM_MAX_RANK}, got {n}")


@lru_cache(maxsize=None)
def enumerate_roots(n: int) -> tuple[LatticeVector, ...]:
    """All positive roots of E_n (E_5 = D_5), in canonical lexicographic order.

    Positivity convention: the labeled forms e_i - e_j (i < j),
    h - e_i - e_j - e_k (i < j < k), 2h - sum of all but e_i (n = 7),
    and for n = 6 the single root 2h - e_1 - ... - e_6.
    """
    _check_enum_rank(n)
    roots: list[LatticeVector] = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        roots.append(e(n, i) - e(n, j))
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        roots.append(h(n) - e(n, i) - e(n, j) - e(n, k))
    if n == 6:
        roots.append(h(n).scale(2) - sum((e(n, i) for i in range(2, 7)), e(n, 1)))
    if n == 7:
        for i in range(1, 8):
            coeffs = [2] + [-1] * 7
            coeffs[i] = 0
            roots.append(LatticeVector(n, tuple(coeffs)))
    result = tuple(sorted(roots))
    assert all(is_root(r) for r in result)
    return result


@lru_cache(maxsize=None)
def enumerate_lines(n: int) -> tuple[LatticeVector, ...]:
    """All (-1)-curve classes of the degree-(9-n) del Pezzo, canonical order."""
    _check_enum_rank(n)
    lines: list[LatticeVector] = [e(n, i) for i in range(1, n + 1)]
    for i, j in itertools.combinations(range(1, n + 1), 2):
        lines.append(h(n) - e(n, i) - e(n, j))
    for subset in itertools.combinations(range(1, n + 1), 5):
        v = h(n).scale(2)
        for i in subset:
            v = v - e(n, i)
        lines.append(v)
    if n == 7:
        for i in range(1, 8):
            coeffs = [3] + [-1] * 7
            coeffs[i] = -2
            lines.append(LatticeVector(n, tuple(coeffs)))
    result = tuple(sorted(lines))
    assert all(is_line(v) for v in result)
    return result


def brute_force_roots(n: int, d_bound: int = 2, m_bound: int = 1) -> tuple[LatticeVector, ...]:
    """Exhaustive positive-root search over |d| <= d_bound, |m_i| <= m_bound.

    Independent of :func:`enumerate_roots`; used as its oracle. A vector and
    its negative are identified by keeping the lexicographically larger one.
    """
    _check_enum_rank(n)
    found: set[LatticeVector] = set()
    m_range = range(-m_bound, m_bound + 1)
    for d in range(-d_bound, d_bound + 1):
        for m in itertools.product(m_range, repeat=n):
            v = LatticeVector(n, (d,) + m)
            if is_root(v):
                found.add(max(v, -v))
    return tuple(sorted(found))


def brute_force_lines(n: int, d_bound: int = 4, m_lo: int = -3, m_hi: int = 2) -> tuple[LatticeVector, ...]:
    """Exhaustive line search over a box; oracle for :func:`enumerate_lines`."""
    _check_enum_rank(n)
    found = []
    for d in range(-d_bound, d_bound + 1):
        for m in itertools.product(range(m_lo, m_hi + 1), repeat=n):
            v = LatticeVector(n, (d,) + m)
            if is_line(v):
                found.append(v)
    return tuple(sorted(found))


# --- the paper's short labels for positive roots -------------------------

def root_label(v: LatticeVector) -> str:
    """Short label: "ij" for e_i-e_j, "ijk" for h-e_i-e_j-e_k, "i" for
    2h - sum_{j != i} e_j, and "123456" for 2h - e_1 - ... - e_6 in E6."""
    if not is_root(v):
        raise ValueError(f"not a root: {v}")
    n, d, m = v.n, v.d, v.m
    if d == 0:
        i = m.index(1) + 1
        j = m.index(-1) + 1
        return f"{i}{j}"
    if d == 1:
        return "".join(str(i + 1) for i, c in enumerate(m) if c == -1)
    if d == 2:
        zeros = [i + 1 for i, c in enumerate(m) if c == 0]
        if n == 6 and not zeros:
            return "123456"
        if len(zeros) == 1:
            return str(zeros[0])
    raise ValueError(f"no label for root {v}")


def root_from_label(n: int, label: str) -> LatticeVector:
    """Inverse of :func:`root_label`; accepts the alias "7" for the E6 root
    2h - e_1 - ... - e_6 (its image under the E7 embedding)."""
    _check_enum_rank(n)
    label = label.strip()
    if not label.isdigit():
        raise ValueError(f"bad root label: {label!r}")
    if n == 6 and label in ("123456", "7"):
        return LatticeVector(6, (2, -1, -1, -1, -1, -1, -1))
    digits = [int(c) for c in label]
    if any(not (1 <= i <= n) for i in digits) or len(set(digits)) != len(digits):
        raise ValueError(f"bad root label for rank {n}: {label!r}")
    if len(digits) == 1:
        coeffs = [2] + [-1] * n
        coeffs[digits[0]] = 0
        return LatticeVector(n, tuple(coeffs))
    if len(digits) == 2:
        i, j = sorted(digits)
        return e(n, i) - e(n, j)
    if len(digits) == 3:
        v = h(n)
        for i in digits:
            v = v - e(n, i)
        return v
    raise ValueError(f"bad root label: {label!r}")


def line_label(v: LatticeVector) -> str:
    """Readable label for a line class: e3, h12, c5 (conic missing e_5),
    or g1 (the degree-2 class 3h - 2e_i - sum of the rest, n = 7)."""
    if not is_line(v):
        raise ValueError(f"not a line: {v}")
    d, m = v.d, v.m
    if d == 0:
        return f"e{m.index(1) + 1}"
    if d == 1:
        return "h" + "".join(str(i + 1) for i, c in enumerate(m) if c == -1)
    if d == 2:
        missing = [i + 1 for i, c in enumerate(m) if c == 0]
        return "c" + "".join(str(i) for i in missing)
    return f"g{m.index(-2) + 1}"
