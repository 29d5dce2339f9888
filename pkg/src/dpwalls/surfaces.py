"""Component surfaces with exact Picard data and the stable-model engine.

Weight arithmetic is exact: a divisor class depending on the weight c is a
vector of (constant, slope) pairs of Fractions over the component basis.
The restriction of K + cB to a component is computed by adjunction as

    K  +  sum of double curves  +  c * sum of mult * line
       +  c * sum over contracted (-2)-curves g of ((B.g)/2) g,

the last term accounting for components whose (-2)-curves have been pushed
into a singular stable model (the curve records of kind "other").
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

Q = Fraction


class CatalogError(ValueError):
    """Inconsistent or unsupported fiber data."""


# --- weighted classes -------------------------------------------------------

@dataclass(frozen=True)
class WeightedClass:
    """A class whose coefficients are exact affine functions a + b*c."""

    entries: tuple[tuple[Q, Q], ...]

    @classmethod
    def constant(cls, coeffs: Iterable[int | Q]) -> "WeightedClass":
        return cls(tuple((Q(x), Q(0)) for x in coeffs))

    @classmethod
    def linear(cls, const: Iterable[int | Q], slope: Iterable[int | Q]) -> "WeightedClass":
        return cls(tuple((Q(a), Q(b)) for a, b in zip(const, slope, strict=True)))

    def __add__(self, other: "WeightedClass") -> "WeightedClass":
        return WeightedClass(
            tuple((a0 + b0, a1 + b1) for (a0, a1), (b0, b1) in zip(self.entries, other.entries, strict=True))
        )

    def scale(self, k: int | Q) -> "WeightedClass":
        k = Q(k)
        return WeightedClass(tuple((k * a, k * b) for a, b in self.entries))

    def times_c(self) -> "WeightedClass":
        """Multiply by the weight variable (constants become slopes)."""
        if any(b != 0 for _, b in self.entries):
            raise CatalogError("cannot multiply a class that already depends on c")
        return WeightedClass(tuple((Q(0), a) for a, _ in self.entries))

    def at(self, c: Q) -> tuple[Q, ...]:
        c = Q(c)
        return tuple(a + b * c for a, b in self.entries)

    def is_zero_at(self, c: Q) -> bool:
        return all(x == 0 for x in self.at(c))

    def pretty(self, basis: tuple[str, ...]) -> str:
        parts = []
        for (a, b), name in zip(self.entries, basis):
            if a == 0 and b == 0:
                continue
            if b == 0:
                parts.append(f"({a}){name}")
            elif a == 0:
                parts.append(f"({b}c){name}")
            else:
                sign = "+" if b > 0 else "-"
                parts.append(f"({a}{sign}{abs(b)}c){name}")
        return " + ".join(parts) if parts else "0"


def gram_pairing(gram: tuple[tuple[int, ...], ...], u: Iterable, v: Iterable) -> Q:
    u = list(u)
    v = list(v)
    return sum(Q(u[i]) * Q(gram[i][j]) * Q(v[j]) for i in range(len(u)) for j in range(len(v)))


def weighted_pairing(
    gram: tuple[tuple[int, ...], ...], u: WeightedClass, v: WeightedClass
) -> tuple[Q, Q, Q]:
    """Quadratic polynomial (a0, a1, a2) with u(c).v(c) = a0 + a1 c + a2 c^2."""
    a0 = a1 = a2 = Q(0)
    for i, (u0, u1) in enumerate(u.entries):
        row = gram[i]
        for j, (v0, v1) in enumerate(v.entries):
            g = row[j]
            if g:
                a0 += u0 * v0 * g
                a1 += (u0 * v1 + u1 * v0) * g
                a2 += u1 * v1 * g
    return a0, a1, a2


def eval_poly(poly: tuple[Q, Q, Q], c: Q) -> Q:
    a0, a1, a2 = poly
    return a0 + a1 * c + a2 * c * c


# --- components and fibers --------------------------------------------------

LINE = "line"
DOUBLE = "double"
OTHER = "other"  # contracted (-2)-curve of a singular stable model


@dataclass(frozen=True)
class CurveRecord:
    cls: tuple[int, ...]
    kind: str
    mult: int = 1
    labels: tuple[str, ...] = ()
    glue: tuple[str, int] | None = None

    def __post_init__(self) -> None:
        if self.kind not in (LINE, DOUBLE, OTHER):
            raise CatalogError(f"bad curve kind {self.kind!r}")
        if self.kind == LINE and self.mult not in (1, 2, 4):
            raise CatalogError(f"line multiplicity must be 1, 2 or 4, got {self.mult}")


@dataclass(frozen=True)
class SpecialPoint:
    """Curves of one component meeting at a point (indices into curves)."""

    curve_indices: tuple[int, ...]


@dataclass(frozen=True)
class SurfaceComponent:
    cid: str
    role: str
    basis: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    K: tuple[int, ...]
    curves: tuple[CurveRecord, ...] = ()
    extremal: tuple[tuple[int, ...], ...] = ()
    special_points: tuple[SpecialPoint, ...] = ()
    fixed_restriction: WeightedClass | None = None  # tier-2 components

    @property
    def rank(self) -> int:
        return len(self.basis)

    def pair(self, u, v) -> Q:
        return gram_pairing(self.gram, u, v)

    def k_squared(self) -> Q:
        return self.pair(self.K, self.K)

    def doubles(self) -> tuple[tuple[int, CurveRecord], ...]:
        return tuple((i, r) for i, r in enumerate(self.curves) if r.kind == DOUBLE)

    def lines(self) -> tuple[tuple[int, CurveRecord], ...]:
        return tuple((i, r) for i, r in enumerate(self.curves) if r.kind == LINE)


@dataclass(frozen=True)
class FiberComplex:
    fiber_type: str
    degree: int
    chamber: tuple[Q, Q]  # validity interval (lo, hi]
    components: tuple[SurfaceComponent, ...]
    tier: int = 1
    provenance: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()

    def component(self, cid: str) -> SurfaceComponent:
        for comp in self.components:
            if comp.cid == cid:
                return comp
        raise CatalogError(f"no component {cid!r} in fiber {self.fiber_type!r}")

    def component_ids(self) -> tuple[str, ...]:
        return tuple(c.cid for c in self.components)

    def role_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.components:
            out[c.role] = out.get(c.role, 0) + 1
        return out


# --- signatures -------------------------------------------------------------

def signature(gram: tuple[tuple[int, ...], ...]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric integer matrix,
    by exact symmetric Gaussian elimination."""
    n = len(gram)
    m = [[Q(x) for x in row] for row in gram]
    pos = neg = zero = 0
    active = list(range(n))
    while active:
        pivot = next((i for i in active if m[i][i] != 0), None)
        if pivot is None:
            off = next(
                ((i, j) for i in active for j in active if i != j and m[i][j] != 0),
                None,
            )
            if off is None:
                zero += len(active)
                break
            i, j = off
            # make a nonzero diagonal entry: row_i += row_j, col_i += col_j
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            continue
        d = m[pivot][pivot]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(pivot)
        for i in active:
            f = m[i][pivot] / d
            if f != 0:
                for k in range(n):
                    m[i][k] -= f * m[pivot][k]
                for k in range(n):
                    m[k][i] -= f * m[k][pivot]
    return pos, neg, zero


# --- restriction, degree, slc ------------------------------------------------

def polarization_restriction(fiber: FiberComplex, cid: str) -> WeightedClass:
    """Restriction of K + cB to a component, by adjunction."""
    comp = fiber.component(cid)
    if comp.fixed_restriction is not None:
        return comp.fixed_restriction
    rank = comp.rank
    total = WeightedClass.constant(comp.K)
    b_class = [Q(0)] * rank
    for rec in comp.curves:
        if rec.kind == DOUBLE:
            total = total + WeightedClass.constant(rec.cls)
        elif rec.kind == LINE:
            for i, x in enumerate(rec.cls):
                b_class[i] += rec.mult * Q(x)
    for rec in comp.curves:
        if rec.kind == OTHER:
            crossing = gram_pairing(comp.gram, b_class, rec.cls)
            if crossing % 2 != 0:
                raise CatalogError(f"odd crossing with contracted curve on {cid}")
            for i, x in enumerate(rec.cls):
                b_class[i] += (crossing / 2) * Q(x)
    total = total + WeightedClass.constant(b_class).times_c()
    return total


def total_degree(fiber: FiberComplex, c: Q) -> Q:
    """Self-intersection of K + cB summed over the components."""
    c = Q(c)
    out = Q(0)
    for comp in fiber.components:
        r = polarization_restriction(fiber, comp.cid)
        poly = weighted_pairing(comp.gram, r, r)
        out += eval_poly(poly, c)
    return out


def expected_total_degree(degree: int, c: Q) -> Q:
    c = Q(c)
    if degree == 3:
        return 3 * (9 * c - 1) ** 2
    if degree == 4:
        return 4 * (4 * c - 1) ** 2
    raise CatalogError(f"unsupported degree {degree}")


def slc_interval(fiber: FiberComplex) -> Q | None:
    """Largest weight at which the pair stays semi-log-canonical, from the
    catalogued special points: min over points of
    (2 - number of double branches) / (sum of line multiplicities)."""
    bound: Q | None = None
    for comp in fiber.components:
        for pt in comp.special_points:
            doubles = 0
            mults = 0
            for i in pt.curve_indices:
                rec = comp.curves[i]
                if rec.kind == DOUBLE:
                    doubles += 1
                elif rec.kind == LINE:
                    mults += rec.mult
            if mults == 0:
                continue
            value = Q(2 - doubles, mults)
            bound = value if bound is None else min(bound, value)
    return bound


# --- ample intervals ---------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: Q
    hi: Q
    lo_closed: bool
    hi_closed: bool

    def contains(self, c: Q) -> bool:
        if c < self.lo or (c == self.lo and not self.lo_closed):
            return False
        if c > self.hi or (c == self.hi and not self.hi_closed):
            return False
        return True

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


def _rational_roots(poly: tuple[Q, Q, Q]) -> tuple[list[Q], bool]:
    """Rational roots of a (possibly degenerate) quadratic; flag True when
    irrational roots exist."""
    a0, a1, a2 = poly
    if a2 == 0:
        if a1 == 0:
            return [], False
        return [-a0 / a1], False
    disc = a1 * a1 - 4 * a2 * a0
    if disc < 0:
        return [], False
    num, den = disc.numerator, disc.denominator
    rn = _isqrt_exact(num)
    rd = _isqrt_exact(den)
    if rn is None or rd is None:
        return [], True
    sq = Q(rn, rd)
    return sorted({(-a1 - sq) / (2 * a2), (-a1 + sq) / (2 * a2)}), False


def _isqrt_exact(x: int) -> int | None:
    if x < 0:
        return None
    r = int(x**0.5)
    for cand in (r - 1, r, r + 1, r + 2):
        if cand >= 0 and cand * cand == x:
            return cand
    return None


def ample_interval(
    comp: SurfaceComponent,
    restriction: WeightedClass,
    domain: tuple[Q, Q] = (Q(0), Q(1)),
) -> tuple[Interval, ...]:
    """Exact weight set in (domain) where the restriction is ample by the
    Nakai test over the stored extremal classes: D(c)^2 > 0 and D(c).C > 0."""
    if not comp.extremal:
        raise CatalogError(f"component {comp.cid} has an empty extremal list")
    lo, hi = Q(domain[0]), Q(domain[1])
    polys = [weighted_pairing(comp.gram, restriction, restriction)]
    for cls in comp.extremal:
        polys.append(
            weighted_pairing(comp.gram, restriction, WeightedClass.constant(cls))
        )
    points = {lo, hi}
    irrational_polys = []
    for poly in polys:
        roots, irrational = _rational_roots(poly)
        for r in roots:
            if lo < r < hi:
                points.add(r)
        if irrational:
            irrational_polys.append(poly)
    grid = sorted(points)

    def feasible(c: Q) -> bool:
        return all(eval_poly(p, c) > 0 for p in polys)

    pieces: list[Interval] = []
    for idx, g in enumerate(grid):
        if feasible(g):
            pieces.append(Interval(g, g, True, True))
        if idx + 1 < len(grid):
            g2 = grid[idx + 1]
            mid = (g + g2) / 2
            if feasible(mid):
                _check_no_irrational_root_inside(irrational_polys, g, g2, comp.cid)
                pieces.append(Interval(g, g2, False, False))
    return _merge_intervals(pieces)


def _check_no_irrational_root_inside(
    polys: list[tuple[Q, Q, Q]], lo: Q, hi: Q, cid: str
) -> None:
    for a0, a1, a2 in polys:
        if a2 == 0:
            continue
        sign_lo = eval_poly((a0, a1, a2), lo) > 0
        sign_hi = eval_poly((a0, a1, a2), hi) > 0
        vertex = -a1 / (2 * a2)
        dip = lo < vertex < hi and (eval_poly((a0, a1, a2), vertex) > 0) != sign_lo
        if sign_lo != sign_hi or dip:
            raise CatalogError(f"irrational ampleness breakpoint on {cid}; catalog bug")


def _merge_intervals(intervals: list[Interval]) -> tuple[Interval, ...]:
    merged: list[Interval] = []
    for iv in sorted(intervals, key=lambda i: (i.lo, i.hi)):
        if merged:
            last = merged[-1]
            touching = iv.lo < last.hi or (
                iv.lo == last.hi and (iv.lo_closed or last.hi_closed)
            )
            if touching:
                merged[-1] = Interval(
                    last.lo,
                    max(last.hi, iv.hi),
                    last.lo_closed,
                    iv.hi_closed if iv.hi >= last.hi else last.hi_closed,
                )
                continue
        merged.append(iv)
    return tuple(merged)


def restriction_breakpoints(comp: SurfaceComponent, restriction: WeightedClass) -> set[Q]:
    """Rational weights in (0,1) where some Nakai inequality hits zero."""
    points: set[Q] = set()
    polys = [weighted_pairing(comp.gram, restriction, restriction)]
    for cls in comp.extremal:
        polys.append(weighted_pairing(comp.gram, restriction, WeightedClass.constant(cls)))
    for poly in polys:
        roots, _ = _rational_roots(poly)
        for r in roots:
            if 0 < r < 1:
                points.add(r)
    return points


# --- validation ---------------------------------------------------------------

_ROLE_K2 = {
    "P2": 9, "P2_eckardt": 9, "Bl1P2": 8, "F0": 8,
    "Bl1F0": 7, "Bl2F0": 6, "Bl3F0": 5, "Bl4F0": 4, "Bl5F0": 3, "Bl6F0": 2,
    "M05": 5, "X": 4, "Z": 4,
    "wS_0A1": 3, "wS_1A1": 3, "wS_2A1": 3, "wS_3A1": 3, "wS_4A1": 3,
    "wS_A2": 3, "wS_0A1_eck": 2,
}


def validate_component(comp: SurfaceComponent) -> None:
    sig = signature(comp.gram)
    if sig != (1, comp.rank - 1, 0):
        raise CatalogError(f"{comp.cid}: gram signature {sig}, expected (1, {comp.rank - 1}, 0)")
    if comp.role in _ROLE_K2 and comp.k_squared() != _ROLE_K2[comp.role]:
        raise CatalogError(
            f"{comp.cid}: K^2 = {comp.k_squared()} does not match role {comp.role}"
        )
    for rec in comp.curves:
        c2 = comp.pair(rec.cls, rec.cls)
        ck = comp.pair(rec.cls, comp.K)
        if c2 + ck != -2:
            raise CatalogError(
                f"{comp.cid}: curve {rec.cls} has arithmetic genus != 0 (C2={c2}, CK={ck})"
            )
        if rec.kind == LINE and len(rec.labels) != rec.mult:
            raise CatalogError(f"{comp.cid}: line {rec.cls} carries {len(rec.labels)} labels for mult {rec.mult}")


def validate_fiber(fiber: FiberComplex) -> None:
    ids = [c.cid for c in fiber.components]
    if len(set(ids)) != len(ids):
        raise CatalogError("duplicate component ids")
    for comp in fiber.components:
        validate_component(comp)
    # gluing symmetry
    for comp in fiber.components:
        for i, rec in enumerate(comp.curves):
            if rec.glue is None:
                continue
            other_id, j = rec.glue
            other = fiber.component(other_id)
            if j >= len(other.curves) or other.curves[j].glue != (comp.cid, i):
                raise CatalogError(
                    f"asymmetric gluing {comp.cid}[{i}] -> {other_id}[{j}]"
                )
    # connectivity of the gluing graph
    if len(fiber.components) > 1:
        adj: dict[str, set[str]] = {cid: set() for cid in ids}
        for comp in fiber.components:
            for rec in comp.curves:
                if rec.glue is not None:
                    adj[comp.cid].add(rec.glue[0])
                    adj[rec.glue[0]].add(comp.cid)
        seen = {ids[0]}
        stack = [ids[0]]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if seen != set(ids):
            raise CatalogError(f"gluing graph of {fiber.fiber_type} is disconnected")


# --- serialization -------------------------------------------------------------

def fiber_to_json(fiber: FiberComplex) -> dict:
    def curve_json(rec: CurveRecord) -> dict:
        out: dict = {"class": list(rec.cls), "kind": rec.kind, "mult": rec.mult}
        if rec.labels:
            out["labels"] = list(rec.labels)
        if rec.glue is not None:
            out["glue"] = [rec.glue[0], rec.glue[1]]
        return out

    return {
        "fiber_type": fiber.fiber_type,
        "degree": fiber.degree,
        "tier": fiber.tier,
        "chamber": [str(fiber.chamber[0]), str(fiber.chamber[1])],
        "flags": list(fiber.flags),
        "provenance": list(fiber.provenance),
        "components": [
            {
                "id": comp.cid,
                "role": comp.role,
                "basis": list(comp.basis),
                "gram": [list(row) for row in comp.gram],
                "K": list(comp.K),
                "curves": [curve_json(r) for r in comp.curves],
                "extremal": [list(x) for x in comp.extremal],
                "special_points": [list(p.curve_indices) for p in comp.special_points],
                "fixed_restriction": None
                if comp.fixed_restriction is None
                else [[str(a), str(b)] for a, b in comp.fixed_restriction.entries],
            }
            for comp in fiber.components
        ],
    }


def fiber_from_json(data: dict) -> FiberComplex:
    comps = []
    for cj in data["components"]:
        curves = tuple(
            CurveRecord(
                cls=tuple(c["class"]),
                kind=c["kind"],
                mult=c.get("mult", 1),
                labels=tuple(c.get("labels", ())),
                glue=tuple(c["glue"]) if c.get("glue") else None,
            )
            for c in cj["curves"]
        )
        fixed = cj.get("fixed_restriction")
        comps.append(
            SurfaceComponent(
                cid=cj["id"],
                role=cj["role"],
                basis=tuple(cj["basis"]),
                gram=tuple(tuple(row) for row in cj["gram"]),
                K=tuple(cj["K"]),
                curves=curves,
                extremal=tuple(tuple(x) for x in cj["extremal"]),
                special_points=tuple(
                    SpecialPoint(tuple(p)) for p in cj.get("special_points", ())
                ),
                fixed_restriction=None
                if fixed is None
                else WeightedClass(tuple((Q(a), Q(b)) for a, b in fixed)),
            )
        )
    return FiberComplex(
        fiber_type=data["fiber_type"],
        degree=data["degree"],
        chamber=(Q(data["chamber"][0]), Q(data["chamber"][1])),
        components=tuple(comps),
        tier=data.get("tier", 1),
        provenance=tuple(data.get("provenance", ())),
        flags=tuple(data.get("flags", ())),
    )


def fiber_json_roundtrip(fiber: FiberComplex) -> bool:
    text = json.dumps(fiber_to_json(fiber), sort_keys=True)
    again = json.dumps(fiber_to_json(fiber_from_json(json.loads(text))), sort_keys=True)
    return text == again
