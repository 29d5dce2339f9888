"""Stable-model contractions at a wall and chamber-by-chamber models.

At a wall w the restriction R of K + cB degenerates on part of the complex.
All moves are decided against the restrictions evaluated at w on the
incoming complex, then applied together:

* point collapse   - R(w) = 0: the component is deleted and the gluing
  curves left behind on its neighbors are identified in pairs (chains of
  simultaneously collapsing components are followed transitively);
* ruled collapse   - R(w) != 0 but R(w)^2 = 0: the fibers of the ruling
  R(w)-perpendicular direction are contracted, the component collapses
  onto the partner curve of its section double, and its section lines push
  forward there with multiplicities added;
* internal blowdown - a (-1)-curve of degree 0 at w is contracted inside
  its component (the curve must sit at an exceptional basis position);
* a (-2)-curve whose gluing partner disappeared and whose degree is 0
  becomes a contracted curve of the singular stable model (kind "other").

The loop repeats until no move fires, then ampleness slightly below the
wall is verified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .surfaces import (
    CatalogError,
    CurveRecord,
    DOUBLE,
    FiberComplex,
    LINE,
    OTHER,
    SpecialPoint,
    SurfaceComponent,
    WeightedClass,
    ample_interval,
    gram_pairing,
    polarization_restriction,
    restriction_breakpoints,
    slc_interval,
)

Q = Fraction


# --- mutable working state --------------------------------------------------

@dataclass
class _Curve:
    key: int
    cls: list[Q]
    kind: str
    mult: int = 1
    labels: tuple[str, ...] = ()
    glue: tuple[str, int] | None = None  # (component id, curve key)


@dataclass
class _Comp:
    cid: str
    role: str
    basis: list[str]
    gram: list[list[int]]
    K: list[int]
    curves: dict[int, _Curve] = field(default_factory=dict)
    extremal: list[tuple[int, ...]] = field(default_factory=list)
    special: list[tuple[int, ...]] = field(default_factory=list)  # curve keys
    next_key: int = 0

    def pair(self, u, v) -> Q:
        return gram_pairing(tuple(tuple(r) for r in self.gram), u, v)

    def add_curve(self, curve: _Curve) -> int:
        key = curve.key
        self.curves[key] = curve
        return key


def _to_state(fiber: FiberComplex) -> dict[str, _Comp]:
    state: dict[str, _Comp] = {}
    for comp in fiber.components:
        wc = _Comp(
            cid=comp.cid,
            role=comp.role,
            basis=list(comp.basis),
            gram=[list(r) for r in comp.gram],
            K=list(comp.K),
            extremal=[tuple(x) for x in comp.extremal],
            special=[tuple(p.curve_indices) for p in comp.special_points],
        )
        for i, rec in enumerate(comp.curves):
            wc.curves[i] = _Curve(
                key=i,
                cls=[Q(x) for x in rec.cls],
                kind=rec.kind,
                mult=rec.mult,
                labels=rec.labels,
                glue=rec.glue,
            )
        wc.next_key = len(comp.curves)
        state[comp.cid] = wc
    return state


def _freeze(
    fiber: FiberComplex, state: dict[str, _Comp], chamber: tuple[Q, Q]
) -> FiberComplex:
    comps = []
    for cid in sorted(state):
        wc = state[cid]
        keys = sorted(wc.curves)
        key_pos = {k: i for i, k in enumerate(keys)}
        curves = []
        for k in keys:
            cur = wc.curves[k]
            glue = None
            if cur.glue is not None:
                gcid, gkey = cur.glue
                other = state[gcid]
                glue = (gcid, sorted(other.curves).index(gkey))
            cls = tuple(int(x) for x in cur.cls)
            curves.append(CurveRecord(cls, cur.kind, cur.mult, cur.labels, glue))
        specials = []
        for pt in wc.special:
            live = tuple(sorted(key_pos[k] for k in pt if k in key_pos))
            if len(live) >= 2:
                specials.append(SpecialPoint(live))
        comps.append(
            SurfaceComponent(
                cid=wc.cid,
                role=wc.role,
                basis=tuple(wc.basis),
                gram=tuple(tuple(r) for r in wc.gram),
                K=tuple(wc.K),
                curves=tuple(curves),
                extremal=tuple(dict.fromkeys(wc.extremal)),
                special_points=tuple(specials),
            )
        )
    return FiberComplex(
        fiber_type=fiber.fiber_type,
        degree=fiber.degree,
        chamber=chamber,
        components=tuple(comps),
        tier=fiber.tier,
        provenance=fiber.provenance,
        flags=fiber.flags,
    )


def _restriction_of(wc: _Comp) -> WeightedClass:
    rank = len(wc.basis)
    total = [[Q(x), Q(0)] for x in wc.K]
    b_class = [Q(0)] * rank
    for cur in wc.curves.values():
        if cur.kind == DOUBLE:
            for i, x in enumerate(cur.cls):
                total[i][0] += x
        elif cur.kind == LINE:
            for i, x in enumerate(cur.cls):
                b_class[i] += cur.mult * x
    for cur in wc.curves.values():
        if cur.kind == OTHER:
            crossing = wc.pair(b_class, cur.cls)
            for i, x in enumerate(cur.cls):
                b_class[i] += (crossing / 2) * x
    for i in range(rank):
        total[i][1] += b_class[i]
    return WeightedClass(tuple((a, b) for a, b in total))


def _primitive(vec: tuple[Q, ...]) -> tuple[int, ...] | None:
    from math import gcd

    denom = 1
    for x in vec:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return None
    ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


# --- the wall move ------------------------------------------------------------

def stable_model(fiber: FiberComplex, at_wall: Q, verify: bool = True) -> FiberComplex:
    """Stable model of the fiber at the given weight (typically a wall)."""
    if fiber.tier != 1:
        raise CatalogError("stable_model needs tier-1 lattice data")
    w = Q(at_wall)
    state = _to_state(fiber)
    moved = True
    rounds = 0
    any_move = False
    while moved:
        rounds += 1
        if rounds > 20:
            raise CatalogError("stable model did not stabilize")
        moved = _one_round(state, w)
        any_move = any_move or moved
    lo = _chamber_floor(state, w, fiber.degree)
    result = _freeze(fiber, state, (lo, w))
    if verify and any_move:
        probe = (lo + w) / 2
        for comp in result.components:
            r = polarization_restriction(result, comp.cid)
            if not any(iv.contains(probe) for iv in ample_interval(comp, r)):
                raise CatalogError(
                    f"model of {fiber.fiber_type} at {w}: {comp.cid} not ample at {probe}"
                )
    return result


def _one_round(state: dict[str, _Comp], w: Q) -> bool:
    restrictions = {cid: _restriction_of(wc) for cid, wc in state.items()}
    values = {cid: r.at(w) for cid, r in restrictions.items()}

    dead_point: set[str] = set()
    dead_ruled: dict[str, tuple[int, ...]] = {}
    for cid, wc in state.items():
        v = values[cid]
        if all(x == 0 for x in v):
            dead_point.add(cid)
            continue
        if wc.pair(v, v) == 0:
            r = _primitive(v)
            if r is not None and wc.pair(r, r) == 0:
                dead_ruled[cid] = r

    blowdowns: dict[str, list[int]] = {}
    for cid, wc in state.items():
        if cid in dead_point or cid in dead_ruled:
            continue
        v = values[cid]
        for key, cur in wc.curves.items():
            if wc.pair(cur.cls, cur.cls) == -1 and wc.pair(v, cur.cls) == 0:
                blowdowns.setdefault(cid, []).append(key)

    if not dead_point and not dead_ruled and not blowdowns:
        return False

    _apply_collapses(state, dead_point, dead_ruled, values, w)
    planned = {
        (cid, key)
        for cid, keys in blowdowns.items()
        for key in keys
        if cid in state and key in state[cid].curves
    }
    # mutually glued curves blown down together lose the gluing first
    for cid, key in sorted(planned):
        cur = state[cid].curves.get(key)
        if cur is not None and cur.glue is not None and cur.glue in planned:
            ocid, okey = cur.glue
            state[ocid].curves[okey].glue = None
            cur.glue = None
    for cid, key in sorted(planned):
        if cid in state and key in state[cid].curves:
            _blow_down(state, cid, key, w)
    _cleanup_neg2(state, w)
    return True


def _apply_collapses(
    state: dict[str, _Comp],
    dead_point: set[str],
    dead_ruled: dict[str, tuple[int, ...]],
    values: dict[str, tuple[Q, ...]],
    w: Q,
) -> None:
    dead = set(dead_point) | set(dead_ruled)
    if not dead:
        return

    # Ruled collapses first: push section lines onto the section partner.
    for cid, r in dead_ruled.items():
        wc = state[cid]
        section_doubles = [
            c for c in wc.curves.values() if c.kind == DOUBLE and wc.pair(c.cls, r) == 1
        ]
        fiber_doubles = [
            c for c in wc.curves.values() if c.kind == DOUBLE and wc.pair(c.cls, r) == 0
        ]
        if len(section_doubles) != 1:
            raise CatalogError(
                f"ruled collapse of {cid} needs exactly one section double, "
                f"found {len(section_doubles)}"
            )
        if len(section_doubles) + len(fiber_doubles) != sum(
            1 for c in wc.curves.values() if c.kind == DOUBLE
        ):
            raise CatalogError(f"ruled collapse of {cid}: oblique double curve")
        section = section_doubles[0]
        if section.glue is None:
            raise CatalogError(f"ruled collapse of {cid}: unglued section double")
        tgt_cid, tgt_key = section.glue
        if tgt_cid in dead:
            raise CatalogError(
                f"ruled collapse of {cid} onto simultaneously dying {tgt_cid}"
            )
        target = state[tgt_cid]
        image = target.curves[tgt_key]
        pushed_mult = 0
        pushed_labels: list[str] = []
        for cur in wc.curves.values():
            if cur.kind == LINE and wc.pair(cur.cls, r) == 1:
                pushed_mult += cur.mult
                pushed_labels.extend(cur.labels)
        image.kind = LINE
        image.glue = None
        image.mult = pushed_mult
        image.labels = tuple(sorted(pushed_labels))
        if pushed_mult not in (1, 2, 4):
            raise CatalogError(
                f"ruled collapse of {cid} pushes multiplicity {pushed_mult}"
            )

    # Identify gluing curves left behind by point collapses, following chains.
    # Each point-dead component joins its double curves pairwise; ruled-dead
    # components terminate chains at their fiber doubles.
    chain_ends: dict[str, list[tuple[str, int]]] = {}
    for cid in dead_point:
        wc = state[cid]
        dbls = [c for c in wc.curves.values() if c.kind == DOUBLE]
        if len(dbls) > 2:
            raise CatalogError(f"point collapse of {cid} with {len(dbls)} doubles")
        chain_ends[cid] = [c.glue for c in dbls if c.glue is not None]

    # Build the neighbor identification by walking maximal chains of dead
    # point components.
    alive_pairs: list[tuple[tuple[str, int], tuple[str, int]]] = []
    orphans: list[tuple[str, int]] = []
    visited: set[str] = set()
    for cid in dead_point:
        if cid in visited:
            continue
        # walk the chain containing cid
        chain = [cid]
        visited.add(cid)
        ends: list[tuple[str, int]] = []
        frontier = [cid]
        while frontier:
            cur = frontier.pop()
            for slot in chain_ends.get(cur, ()):  # slots = (other cid, key)
                ocid, okey = slot
                if ocid in dead_point:
                    if ocid not in visited:
                        visited.add(ocid)
                        chain.append(ocid)
                        frontier.append(ocid)
                elif ocid in dead_ruled:
                    # collapses to a point on the ruled component's image; the
                    # chain terminates there
                    continue
                else:
                    ends.append(slot)
        if len(ends) == 2:
            alive_pairs.append((ends[0], ends[1]))
        elif len(ends) == 1:
            orphans.append(ends[0])
        elif len(ends) > 2:
            raise CatalogError("point-collapse chain with more than two ends")

    # fiber doubles of ruled components orphan their partners as well
    for cid, r in dead_ruled.items():
        wc = state[cid]
        for c in wc.curves.values():
            if c.kind == DOUBLE and wc.pair(c.cls, r) == 0 and c.glue is not None:
                ocid, okey = c.glue
                if ocid not in dead:
                    orphans.append((ocid, okey))

    for (cid_a, key_a), (cid_b, key_b) in alive_pairs:
        state[cid_a].curves[key_a].glue = (cid_b, key_b)
        state[cid_b].curves[key_b].glue = (cid_a, key_a)

    for cid, key in orphans:
        if cid in dead:
            continue
        cur = state[cid].curves.get(key)
        if cur is not None and cur.kind == DOUBLE:
            cur.glue = None
            cur.kind = OTHER if state[cid].pair(cur.cls, cur.cls) == -2 else cur.kind
            if cur.kind == OTHER:
                _record_contracted_point(state[cid], key)
            elif state[cid].pair(cur.cls, cur.cls) == -1:
                cur.kind = DOUBLE  # keep as unglued; blow-down pass handles it
                cur.glue = None
            else:
                raise CatalogError(
                    f"orphaned double of square {state[cid].pair(cur.cls, cur.cls)} on {cid}"
                )

    for cid in dead:
        del state[cid]

    # gluing references into deleted components are errors unless handled
    for wc in state.values():
        for cur in wc.curves.values():
            if cur.glue is not None and cur.glue[0] not in state:
                cur.glue = None


def _record_contracted_point(wc: _Comp, contracted_key: int) -> None:
    """Lines crossing a contracted (-2)-curve now pass through one singular
    point; record it for the slc check."""
    curve = wc.curves[contracted_key]
    through = [
        key
        for key, cur in wc.curves.items()
        if cur.kind == LINE and wc.pair(cur.cls, curve.cls) > 0
    ]
    if through:
        wc.special.append(tuple(sorted(through)))


def _blow_down(state: dict[str, _Comp], cid: str, key: int, w: Q) -> None:
    wc = state[cid]
    curve = wc.curves[key]
    cls = [int(x) for x in curve.cls]
    unit_positions = [i for i, x in enumerate(cls) if x != 0]
    if len(unit_positions) != 1 or cls[unit_positions[0]] != 1:
        raise CatalogError(
            f"blow-down of non-exceptional class {cls} on {cid}"
        )
    pos = unit_positions[0]
    if curve.glue is not None:
        ocid, okey = curve.glue
        other = state.get(ocid)
        if other is not None and okey in other.curves:
            raise CatalogError(
                f"blow-down of {cid}[{key}] still glued to {ocid}[{okey}]"
            )
    # record the new concurrence of curves through the image point
    through = [
        k
        for k, cur in wc.curves.items()
        if k != key and wc.pair(cur.cls, curve.cls) == 1
    ]
    if len(through) >= 2:
        wc.special.append(tuple(sorted(through)))

    e = curve.cls

    def push(vec) -> list[Q]:
        factor = wc.pair(vec, e)
        pushed = [x + factor * y for x, y in zip(vec, e)]
        del pushed[pos]
        return pushed

    wc.K = [int(x) for x in push([Q(x) for x in wc.K])]
    new_extremal = []
    for ex in wc.extremal:
        vec = push([Q(x) for x in ex])
        if any(vec):
            new_extremal.append(tuple(int(x) for x in vec))
    wc.extremal = list(dict.fromkeys(new_extremal))
    del wc.curves[key]
    for cur in wc.curves.values():
        cur.cls = push(cur.cls)
    del wc.basis[pos]
    wc.gram = [
        [x for j, x in enumerate(row) if j != pos]
        for i, row in enumerate(wc.gram)
        if i != pos
    ]
    wc.special = [tuple(k for k in pt if k != key) for pt in wc.special]
    wc.special = [pt for pt in wc.special if len(pt) >= 2]


def _cleanup_neg2(state: dict[str, _Comp], w: Q) -> None:
    for wc in state.values():
        r = _restriction_of(wc)
        v = r.at(w)
        for key, cur in list(wc.curves.items()):
            if (
                cur.kind == DOUBLE
                and cur.glue is None
                and wc.pair(cur.cls, cur.cls) == -2
                and wc.pair(v, cur.cls) == 0
            ):
                cur.kind = OTHER
                _record_contracted_point(wc, key)


def _chamber_floor(state: dict[str, _Comp], w: Q, degree: int) -> Q:
    lo_domain = Q(1, 9) if degree == 3 else Q(1, 4)
    floor = lo_domain
    for cid in state:
        comp_frozen = _freeze_component_for_breakpoints(state[cid])
        r = polarization_restriction_like(state[cid])
        for bp in restriction_breakpoints(comp_frozen, r):
            if lo_domain < bp < w:
                floor = max(floor, bp)
    return floor


def _freeze_component_for_breakpoints(wc: _Comp) -> SurfaceComponent:
    return SurfaceComponent(
        cid=wc.cid,
        role=wc.role,
        basis=tuple(wc.basis),
        gram=tuple(tuple(r) for r in wc.gram),
        K=tuple(wc.K),
        curves=(),
        extremal=tuple(dict.fromkeys(wc.extremal)),
    )


def polarization_restriction_like(wc: _Comp) -> WeightedClass:
    return _restriction_of(wc)


# --- chamber machinery ---------------------------------------------------------

def fiber_breakpoints(fiber: FiberComplex) -> set[Q]:
    """Rational weights in (0,1) where some component's Nakai inequality or
    the slc bound degenerates."""
    out: set[Q] = set()
    for comp in fiber.components:
        r = polarization_restriction(fiber, comp.cid)
        out |= restriction_breakpoints(comp, r)
    bound = slc_interval(fiber)
    if bound is not None and 0 < bound < 1:
        out.add(bound)
    return out


def is_ample_at(fiber: FiberComplex, c: Q) -> bool:
    for comp in fiber.components:
        r = polarization_restriction(fiber, comp.cid)
        if not any(iv.contains(c) for iv in ample_interval(comp, r)):
            return False
    return True


def domain_low(degree: int) -> Q:
    return Q(1, 9) if degree == 3 else Q(1, 4)


def chamber_model(fiber: FiberComplex, c: Q) -> FiberComplex:
    """Stable model of the fiber type at weight c: the composition of the
    wall moves at every breakpoint above c."""
    c = Q(c)
    if not (domain_low(fiber.degree) < c <= 1):
        raise CatalogError(f"weight {c} outside the domain for degree {fiber.degree}")
    current = fiber
    hi = Q(1)
    while True:
        bps = [b for b in fiber_breakpoints(current) if c <= b < hi]
        if not bps:
            return current
        wall = max(bps)
        nxt = stable_model(current, wall)
        if _same_shape(nxt, current):
            hi = wall
            continue
        current = nxt
        hi = wall


def _same_shape(a: FiberComplex, b: FiberComplex) -> bool:
    return canonical_form(a) == canonical_form(b)


# --- canonical forms ------------------------------------------------------------

def canonical_form(fiber: FiberComplex):
    """Isomorphism-invariant form of the labeled complex: per-component
    invariants refined by neighbor hashing over the gluing graph."""
    comps = fiber.components
    ids = [c.cid for c in comps]
    pos = {cid: i for i, cid in enumerate(ids)}

    def curve_inv(comp: SurfaceComponent, rec: CurveRecord):
        c2 = comp.pair(rec.cls, rec.cls)
        ck = comp.pair(rec.cls, comp.K)
        return (rec.kind, rec.mult, str(c2), str(ck), tuple(sorted(rec.labels)))

    base = []
    adj: list[list[int]] = [[] for _ in comps]
    for i, comp in enumerate(comps):
        curves = tuple(sorted(curve_inv(comp, r) for r in comp.curves))
        specials = tuple(
            sorted(
                tuple(sorted(curve_inv(comp, comp.curves[k]) for k in pt.curve_indices))
                for pt in comp.special_points
            )
        )
        base.append((comp.role, comp.rank, str(comp.k_squared()), curves, specials))
        for rec in comp.curves:
            if rec.glue is not None:
                adj[i].append(pos[rec.glue[0]])
    def digest(obj) -> str:
        import hashlib

        return hashlib.sha256(repr(obj).encode()).hexdigest()[:16]

    colors = [digest(b) for b in base]
    for _ in range(len(comps)):
        colors = [
            digest((colors[i], tuple(sorted(colors[j] for j in adj[i]))))
            for i in range(len(comps))
        ]
    return tuple(sorted(zip(colors, base)))
