"""Built-in encodings of the fiber types of the two universal families.

Tier-1 entries carry full lattice data (bases, Gram matrices, curves with
marked-line labels, gluing); tier-2 entries carry component roles, counts
and per-role restriction formulas only.  Lines are tagged with the line
labels of the ambient marking (degree 4: the 16 lines of the rank-5
lattice, degree 3: the 27 lines of the rank-6 lattice), so that marked
lines can be followed through contractions.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .lattice import LatticeVector, e, enumerate_lines, h, line_label, pairing
from .subsystems import (
    enumerate_vertex_subsystems,
    horizontal_line_map,
    orthogonal_complement,
    restrict_and_classify,
    span_closure,
    subsystem_from_labels,
)
from .surfaces import (
    CatalogError,
    CurveRecord,
    DOUBLE,
    FiberComplex,
    LINE,
    SpecialPoint,
    SurfaceComponent,
    WeightedClass,
    validate_fiber,
)

Q = Fraction


# --- small constructors -----------------------------------------------------

def p2_gram(rank: int) -> tuple[tuple[int, ...], ...]:
    """Gram of (H, E_1, ..., E_{rank-1})."""
    return tuple(
        tuple((1 if i == 0 else -1) if i == j else 0 for j in range(rank))
        for i in range(rank)
    )


def f0_gram(rank: int) -> tuple[tuple[int, ...], ...]:
    """Gram of (f, g, e_1, ..., e_{rank-2})."""
    rows = []
    for i in range(rank):
        row = [0] * rank
        if i == 0:
            row[1] = 1
        elif i == 1:
            row[0] = 1
        else:
            row[i] = -1
        rows.append(tuple(row))
    return tuple(rows)


def unit(rank: int, i: int) -> tuple[int, ...]:
    out = [0] * rank
    out[i] = 1
    return tuple(out)


def _p2_basis(rank: int) -> tuple[str, ...]:
    return ("h",) + tuple(f"e{i}" for i in range(1, rank))


def _f0_basis(rank: int) -> tuple[str, ...]:
    return ("f", "g") + tuple(f"e{i}" for i in range(1, rank - 1))


def component(
    cid: str,
    role: str,
    kind: str,
    rank: int,
    curves: list[CurveRecord],
    extremal: list[tuple[int, ...]],
    special: list[tuple[int, ...]] = (),
) -> SurfaceComponent:
    if kind == "p2":
        gram, basis = p2_gram(rank), _p2_basis(rank)
        K = tuple([-3] + [1] * (rank - 1))
    elif kind == "f0":
        gram, basis = f0_gram(rank), _f0_basis(rank)
        K = tuple([-2, -2] + [1] * (rank - 2))
    else:
        raise CatalogError(f"unknown component kind {kind!r}")
    return SurfaceComponent(
        cid=cid,
        role=role,
        basis=basis,
        gram=gram,
        K=K,
        curves=tuple(curves),
        extremal=tuple(extremal),
        special_points=tuple(SpecialPoint(tuple(p)) for p in special),
    )


def _line(cls, labels, glue=None, mult=None) -> CurveRecord:
    labels = tuple(labels)
    return CurveRecord(tuple(cls), LINE, mult or len(labels), labels, glue)


def _double(cls, glue) -> CurveRecord:
    return CurveRecord(tuple(cls), DOUBLE, 1, (), glue)


def _f0_extremal(rank: int) -> list[tuple[int, ...]]:
    out = [unit(rank, 0), unit(rank, 1)]
    for i in range(2, rank):
        ei = unit(rank, i)
        out.append(ei)
        out.append(tuple(a - b for a, b in zip(unit(rank, 0), ei)))
        out.append(tuple(a - b for a, b in zip(unit(rank, 1), ei)))
    if rank > 2:
        diag = [1, 1] + [-1] * (rank - 2)
        out.append(tuple(diag))
    return out


def _p2_lines_extremal(rank: int) -> list[tuple[int, ...]]:
    out = []
    for i in range(1, rank):
        out.append(unit(rank, i))
    for i, j in itertools.combinations(range(1, rank), 2):
        cls = [0] * rank
        cls[0] = 1
        cls[i] = cls[j] = -1
        out.append(tuple(cls))
    out.append(unit(rank, 0))
    return out


# --- degree-3 and degree-4 ambient labels ------------------------------------

def ambient_labels(degree: int) -> tuple[str, ...]:
    n = 6 if degree == 3 else 5
    return tuple(line_label(v) for v in enumerate_lines(n))


def _hlabel(n_upper: int, root: LatticeVector) -> str:
    """Marked-line label of a horizontal root of E_{n_upper}."""
    return line_label(horizontal_line_map(n_upper)[root])


# --- smooth fibers ------------------------------------------------------------

def build_smooth3() -> FiberComplex:
    rank = 7
    lines = []
    for v in enumerate_lines(6):
        lines.append(_line(v.coeffs, [line_label(v)]))
    comp = component(
        "S",
        "wS_0A1",
        "p2",
        rank,
        lines,
        [tuple(v.coeffs) for v in enumerate_lines(6)],
    )
    return FiberComplex("smooth3", 3, (Q(1, 9), Q(1)), (comp,), provenance=("generic marked cubic surface",))


def build_smooth4() -> FiberComplex:
    # degree-4 del Pezzo written on the F0 basis: f = h-e4, g = h-e5,
    # e'_i = e_i (i<4), e'_4 = h-e4-e5 identifies it with Bl_4 F0.
    rank = 6

    def to_f0(v: LatticeVector) -> tuple[int, ...]:
        a = v.coeffs[0]
        b = list(v.coeffs[1:])
        # h = f+g-e'_4, e1..e3 fixed, e4 = g-e'_4, e5 = f-e'_4
        f = a + b[4]
        g = a + b[3]
        e4p = a + b[3] + b[4]
        return (f, g, b[0], b[1], b[2], e4p)

    lines = []
    for v in enumerate_lines(5):
        lines.append(_line(to_f0(v), [line_label(v)]))
    comp = component(
        "S",
        "Bl4F0",
        "f0",
        rank,
        lines,
        [rec.cls for rec in lines],
    )
    return FiberComplex("smooth4", 4, (Q(1, 4), Q(1)), (comp,), provenance=("generic marked degree-4 del Pezzo",))


# --- the Eckardt augmentation ---------------------------------------------------

ECKARDT_TRIPLE = ("e1", "h12", "c2")  # concurrent triple: e1 + h12 + c2 = -K


def build_smooth3_eckardt() -> FiberComplex:
    """Weight-1 replacement of a cubic with one Eckardt point: the point is
    blown up and a plane with three lines is attached along the exceptional
    curve."""
    base = build_smooth3()
    return apply_eckardt_augmentation(base, ECKARDT_TRIPLE)


def apply_eckardt_augmentation(fiber: FiberComplex, triple: tuple[str, str, str]) -> FiberComplex:
    if len(fiber.components) != 1:
        raise CatalogError("eckardt augmentation is built for the smooth fiber")
    comp = fiber.components[0]
    by_label = {}
    for i, rec in enumerate(comp.curves):
        if rec.kind == LINE:
            for lab in rec.labels:
                by_label[lab] = i
    missing = [t for t in triple if t not in by_label]
    if missing:
        raise CatalogError(f"labels {missing} not on the component")
    idxs = [by_label[t] for t in triple]
    clss = [comp.curves[i].cls for i in idxs]
    total = [sum(col) for col in zip(*clss)]
    if tuple(total) != tuple(-int(x) for x in comp.K):
        raise CatalogError("triple is not concurrent (does not sum to -K)")
    for a, b in itertools.combinations(clss, 2):
        if comp.pair(a, b) != 1:
            raise CatalogError("triple is not pairwise meeting")
    rank = comp.rank + 1
    lift = lambda v: tuple(v) + (0,)
    curves = []
    for i, rec in enumerate(comp.curves):
        cls = lift(rec.cls)
        if i in idxs:
            cls = tuple(x - y for x, y in zip(cls, unit(rank, rank - 1)))
        curves.append(CurveRecord(cls, rec.kind, rec.mult, rec.labels, rec.glue))
    curves.append(_double(unit(rank, rank - 1), ("E", 0)))
    extremal = [lift(x) for x in comp.extremal]
    extremal.append(unit(rank, rank - 1))
    for i in idxs:
        extremal.append(tuple(x - y for x, y in zip(lift(comp.curves[i].cls), unit(rank, rank - 1))))
    big = SurfaceComponent(
        cid=comp.cid,
        role=comp.role + "_eck",
        basis=comp.basis + ("ex",),
        gram=tuple(tuple(list(row) + [0]) for row in comp.gram)
        + (tuple([0] * comp.rank + [-1]),),
        K=tuple(list(comp.K) + [1]),
        curves=tuple(curves),
        extremal=tuple(dict.fromkeys(extremal)),
    )
    plane = component(
        "E",
        "P2_eckardt",
        "p2",
        1,
        [
            _double((1,), (comp.cid, len(curves) - 1)),
            _line((1,), [triple[0]]),
            _line((1,), [triple[1]]),
            _line((1,), [triple[2]]),
        ],
        [(1,)],
    )
    return FiberComplex(
        fiber_type=fiber.fiber_type + "_eckardt",
        degree=fiber.degree,
        chamber=(Q(2, 3), Q(1)),
        components=(big, plane),
        provenance=fiber.provenance + ("eckardt blow-up with attached plane",),
    )


# --- degree 4, boundary divisor fiber -------------------------------------------

def _deg4_structure():
    """Component combinatorics of the fiber over D(45,123) in the rank-5
    moduli space: the two root labels, the four A2^3 subsystems over the
    divisor, and the marked-line labels each carries."""
    hmap = horizontal_line_map(6)
    beta1 = subsystem_from_labels(6, ["45"])
    beta2 = subsystem_from_labels(6, ["123"])
    a23 = []
    for sub in enumerate_vertex_subsystems(6, "A2^3"):
        res, t = restrict_and_classify(sub, 5)
        if t != "A1xA1xA2":
            continue
        rset = set(res.roots)
        if beta1.roots[0].restrict(5) in rset and beta2.roots[0].restrict(5) in rset:
            a23.append(sub)
    if len(a23) != 4:
        raise CatalogError(f"expected 4 A2^3 over the divisor, found {len(a23)}")

    def horiz_labels(sub):
        return sorted(
            _hlabel(6, r) for r in sub.roots if r.coeffs[-1] != 0
        )

    bl1_labels = sorted(
        _hlabel(6, r)
        for r in hmap
        if pairing(r, beta1.roots[0]) == 0
    )
    bl2_labels = sorted(
        _hlabel(6, r)
        for r in hmap
        if pairing(r, beta2.roots[0]) == 0
    )
    return bl1_labels, bl2_labels, [horiz_labels(s) for s in a23]


def build_deg4_div() -> FiberComplex:
    bl1_labels, bl2_labels, a23_labels = _deg4_structure()
    rank = 6
    comps = []
    for name, own in (("B1", bl1_labels), ("B2", bl2_labels)):
        curves = [
            _double((1, 1, -1, -1, -1, -1), ("B2" if name == "B1" else "B1", 0)),
        ]
        for k in range(4):
            other = "Q" + str(k + 1)
            curves.append(_double(unit(rank, 2 + k), (other, 0 if name == "B1" else 1)))
        for k in range(4):
            shared = [lab for lab in a23_labels[k] if lab in own]
            if len(shared) != 2:
                raise CatalogError("bad deg4 label incidence")
            f_cls = tuple(a - b for a, b in zip(unit(rank, 0), unit(rank, 2 + k)))
            g_cls = tuple(a - b for a, b in zip(unit(rank, 1), unit(rank, 2 + k)))
            curves.append(_line(f_cls, [shared[0]]))
            curves.append(_line(g_cls, [shared[1]]))
        comps.append(
            component(name, "Bl4F0", "f0", rank, curves, _f0_extremal(rank))
        )
    for k in range(4):
        own = a23_labels[k]
        b1_side = [lab for lab in own if lab in bl1_labels]
        b2_side = [lab for lab in own if lab in bl2_labels]
        if len(b1_side) != 2 or len(b2_side) != 2:
            raise CatalogError("bad A2^3 label split")
        curves = [
            _double((1, 0), ("B1", 1 + k)),
            _double((0, 1), ("B2", 1 + k)),
            _line((0, 1), [b1_side[0]]),
            _line((0, 1), [b1_side[1]]),
            _line((1, 0), [b2_side[0]]),
            _line((1, 0), [b2_side[1]]),
        ]
        comps.append(component("Q" + str(k + 1), "F0", "f0", 2, curves, _f0_extremal(2)))
    return FiberComplex(
        "deg4_div",
        4,
        (Q(1, 2), Q(1)),
        tuple(comps),
        provenance=("fiber over a boundary divisor of the degree-4 family",),
    )


def build_deg4_codim2() -> FiberComplex:
    """Fiber over a codimension-2 stratum: a 4-cycle of Bl P^2(4) planes
    with two F0 strips along each edge."""
    hmap = horizontal_line_map(6)
    b45 = subsystem_from_labels(6, ["45"]).roots[0]
    b123 = subsystem_from_labels(6, ["123"]).roots[0]
    b12 = subsystem_from_labels(6, ["12"]).roots[0]
    b345 = subsystem_from_labels(6, ["345"]).roots[0]
    cycle = [(b45, b12), (b12, b123), (b123, b345), (b345, b45)]
    m_names = ["M1", "M2", "M3", "M4"]

    def perp_labels(pair):
        return sorted(
            _hlabel(6, r)
            for r in hmap
            if pairing(r, pair[0]) == 0 and pairing(r, pair[1]) == 0
        )

    m_labels = [perp_labels(p) for p in cycle]
    # F0 strips: along the edge shared by two adjacent planes sit the two
    # A2^3 subsystems that contain the shared root and map onto the other
    # boundary divisor of the stratum.
    a23s = enumerate_vertex_subsystems(6, "A2^3")
    strips = []
    shared_roots = [b12, b123, b345, b45]  # edge between M_i and M_{i+1}
    divisor_pairs = {b12: (b45, b123), b345: (b45, b123), b45: (b12, b345), b123: (b12, b345)}
    for idx, root in enumerate(shared_roots):
        target = divisor_pairs[root]
        need = {r.restrict(5) for r in target}
        found = []
        for sub in a23s:
            if root not in sub.root_set():
                continue
            res, _ = restrict_and_classify(sub, 5)
            if need <= set(res.roots):
                found.append(sub)
        if len(found) != 2:
            raise CatalogError(f"expected 2 strips on edge {idx}, found {len(found)}")
        strips.append(found)

    comps = []
    rank = 5
    strip_names = {}
    for idx in range(4):
        for s in range(2):
            strip_names[(idx, s)] = f"F{idx + 1}{'ab'[s]}"
    # plane components: M_{idx} has left edge idx-1 and right edge idx
    for i, name in enumerate(m_names):
        left, right = (i - 1) % 4, i
        curves = [
            _double((1, -1, -1, 0, 0), (m_names[(i - 1) % 4], 1)),
            _double((1, 0, 0, -1, -1), (m_names[(i + 1) % 4], 0)),
        ]
        # four strip gluings: E1,E2 to the left-edge strips, E3,E4 right
        for s in range(2):
            curves.append(_double(unit(rank, 1 + s), (strip_names[(left, s)], _strip_port(strips, left, s, i))))
        for s in range(2):
            curves.append(_double(unit(rank, 3 + s), (strip_names[(right, s)], _strip_port(strips, right, s, i))))
        # lines: the four crosses, each through one left and one right point
        own = m_labels[i]
        placed = []
        seen_cls = set()
        for lab in own:
            lpos = next(s for s in range(2) if lab in _strip_labels(strips, left, s))
            rpos = next(s for s in range(2) if lab in _strip_labels(strips, right, s))
            cls = [1, 0, 0, 0, 0]
            cls[1 + lpos] -= 1
            cls[3 + rpos] -= 1
            if tuple(cls) in seen_cls:
                raise CatalogError(f"line class collision on {name}")
            seen_cls.add(tuple(cls))
            placed.append(_line(tuple(cls), [lab]))
        curves.extend(placed)
        comps.append(
            component(name, "M05", "p2", rank, curves, _p2_lines_extremal(rank))
        )
    # strip components
    for idx in range(4):
        for s in range(2):
            name = strip_names[(idx, s)]
            labs = _strip_labels(strips, idx, s)
            mi, mj = idx, (idx + 1) % 4
            left_share = sorted(set(labs) & set(m_labels[mi]))
            right_share = sorted(set(labs) & set(m_labels[mj]))
            if len(left_share) != 2 or len(right_share) != 2:
                raise CatalogError("bad strip label split")
            curves = [
                _double((1, 0), (m_names[mi], 4 + s)),
                _double((0, 1), (m_names[mj], 2 + s)),
                _line((0, 1), [left_share[0]]),
                _line((0, 1), [left_share[1]]),
                _line((1, 0), [right_share[0]]),
                _line((1, 0), [right_share[1]]),
            ]
            comps.append(component(name, "F0", "f0", 2, curves, _f0_extremal(2)))
    return FiberComplex(
        "deg4_codim2",
        4,
        (Q(1, 2), Q(1)),
        tuple(comps),
        provenance=("fiber over a codimension-2 stratum of the degree-4 family",),
    )


def _strip_labels(strips, idx, s):
    sub = strips[idx][s]
    return sorted(_hlabel(6, r) for r in sub.roots if r.coeffs[-1] != 0)


def _strip_port(strips, idx, s, plane_index):
    """Index of the strip's double curve glued to the given plane: port 0
    faces M_{idx}, port 1 faces M_{idx+1}."""
    return 0 if plane_index == idx else 1

# --- degree 3: type a ------------------------------------------------------------

def build_a() -> FiberComplex:
    """Fiber over an A1 boundary divisor: the resolution of a one-nodal
    cubic, the blowup of F0 at the six diagonal points, and six F0 strips."""
    hmap = horizontal_line_map(7)
    beta0 = subsystem_from_labels(6, ["123456"]).roots[0]
    cross_labels = {}
    for r, ln in hmap.items():
        if pairing(r.restrict(6) or r - r, beta0) == 0 and r.restrict(6) is not None:
            pass
    # labels on the node component: lines orthogonal to the stratum root
    ws_labels = sorted(
        line_label(ln)
        for ln in enumerate_lines(6)
        if pairing(ln, beta0) == 0
    )
    if len(ws_labels) != 15:
        raise CatalogError("expected 15 lines on the nodal component")
    rank_ws = 7
    ws_curves = [
        _double((2, -1, -1, -1, -1, -1, -1), ("T", 0)),
    ]
    for i in range(1, 7):
        ws_curves.append(_double(unit(rank_ws, i), (f"P{i}", 1)))
    for i, j in itertools.combinations(range(1, 7), 2):
        cls = [0] * rank_ws
        cls[0] = 1
        cls[i] = cls[j] = -1
        ws_curves.append(_line(tuple(cls), [f"h{i}{j}"]))
    ws_extremal = [rec.cls for rec in ws_curves]
    ws = component("W", "wS_1A1", "p2", rank_ws, ws_curves, ws_extremal)

    rank_t = 8
    t_curves = [
        _double((1, 1, -1, -1, -1, -1, -1, -1), ("W", 0)),
    ]
    for i in range(1, 7):
        t_curves.append(_double(unit(rank_t, 1 + i), (f"P{i}", 0)))
    for i in range(1, 7):
        f_min_e = tuple(a - b for a, b in zip(unit(rank_t, 0), unit(rank_t, 1 + i)))
        g_min_e = tuple(a - b for a, b in zip(unit(rank_t, 1), unit(rank_t, 1 + i)))
        t_curves.append(_line(f_min_e, [f"e{i}"]))
        t_curves.append(_line(g_min_e, [f"c{i}"]))
    t = component("T", "Bl6F0", "f0", rank_t, t_curves, _f0_extremal(rank_t))

    comps = [ws, t]
    for i in range(1, 7):
        curves = [
            _double((1, 0), ("T", i)),       # fiber side: e_i on T
            _double((0, 1), ("W", i)),       # section side: E_i on the node comp
            _line((0, 1), [f"e{i}"]),
            _line((0, 1), [f"c{i}"]),
        ]
        for j in range(1, 7):
            if j == i:
                continue
            a, b = min(i, j), max(i, j)
            curves.append(_line((1, 0), [f"h{a}{b}"]))
        comps.append(component(f"P{i}", "F0", "f0", 2, curves, _f0_extremal(2)))
    return FiberComplex(
        "a",
        3,
        (Q(1, 2), Q(1)),
        tuple(comps),
        provenance=("fiber over an A1 boundary divisor",),
    )


# --- degree 3: type b ------------------------------------------------------------

_B_FACTORS = (("123", "456"), ("12", "13"), ("45", "46"))


def _b_structure():
    """Factors of the A2^3 stratum, the nine A3x A3 subsystems over it
    grouped by the pair of factors they restrict to, and label sets."""
    factors = [subsystem_from_labels(6, gens) for gens in _B_FACTORS]
    factor_roots = [set(f.roots) for f in factors]
    pair_families: dict[tuple[int, int], list] = {(0, 1): [], (0, 2): [], (1, 2): []}
    for sub in enumerate_vertex_subsystems(7, "A3^2"):
        res, t = restrict_and_classify(sub, 6)
        if t != "A2xA2":
            continue
        rset = set(res.roots)
        members = [i for i in range(3) if factor_roots[i] <= rset]
        if len(members) == 2 and rset == factor_roots[members[0]] | factor_roots[members[1]]:
            pair_families[tuple(members)].append(sub)
    for pair, subs in pair_families.items():
        if len(subs) != 3:
            raise CatalogError(f"expected 3 strips over factors {pair}")
    def horiz(sub):
        return frozenset(
            _hlabel(7, r) for r in sub.roots if r.coeffs[-1] != 0
        )
    family_labels = {
        pair: [horiz(s) for s in subs] for pair, subs in pair_families.items()
    }
    # labels of each wS component: orthogonal to its factor
    hmap = horizontal_line_map(7)
    ws_labels = []
    for f in factors:
        labs = set()
        for r, ln in hmap.items():
            if all(pairing(r, x.extend(7)) == 0 for x in f.roots):
                labs.add(line_label(ln))
        ws_labels.append(labs)
    return family_labels, ws_labels


def build_b() -> FiberComplex:
    family_labels, ws_labels = _b_structure()
    pairs = [(0, 1), (0, 2), (1, 2)]
    names = {pair: [f"R{pair[0]}{pair[1]}{k}" for k in range(3)] for pair in pairs}
    rank = 7
    comps = []
    # gamma slots on W_i: families in sorted order; first family -> E1..E3,
    # second family -> E4..E6.
    slot: dict[tuple[int, tuple[int, int], int], int] = {}
    for w in range(3):
        fams = [p for p in pairs if w in p]
        for fi, pair in enumerate(fams):
            for k in range(3):
                slot[(w, pair, k)] = 1 + 3 * fi + k
    for w in range(3):
        fams = [p for p in pairs if w in p]
        others = [p[0] if p[1] == w else p[1] for p in fams]
        curves = []
        # plane-plane doubles: L over the triple of each family
        for fi, pair in enumerate(fams):
            other_w = others[fi]
            cls = [0] * rank
            cls[0] = 1
            for k in range(3):
                cls[slot[(w, pair, k)]] = -1
            curves.append(_double(tuple(cls), (f"W{other_w}", _b_mirror_port(pairs, other_w, w))))
        # strip doubles
        for fi, pair in enumerate(fams):
            for k in range(3):
                port = 0 if pair[0] == w else 1
                curves.append(
                    _double(unit(rank, slot[(w, pair, k)]), (names[pair][k], port))
                )
        # lines
        for lab in sorted(ws_labels[w]):
            idx = []
            for pair in fams:
                ks = [k for k in range(3) if lab in family_labels[pair][k]]
                if len(ks) != 1:
                    raise CatalogError(f"label {lab} not uniquely on family {pair}")
                idx.append(slot[(w, pair, ks[0])])
            cls = [0] * rank
            cls[0] = 1
            cls[idx[0]] = cls[idx[1]] = -1
            curves.append(_line(tuple(cls), [lab]))
        extremal = [rec.cls for rec in curves]
        comps.append(component(f"W{w}", "wS_A2", "p2", rank, curves, extremal))
    for pair in pairs:
        for k in range(3):
            labs = family_labels[pair][k]
            left = sorted(labs & ws_labels[pair[0]])
            right = sorted(labs & ws_labels[pair[1]])
            if len(left) != 3 or len(right) != 3:
                raise CatalogError("bad strip label split in type b")
            curves = [
                _double((1, 0), (f"W{pair[0]}", 2 + _b_slot_pos(pairs, pair[0], pair, k))),
                _double((0, 1), (f"W{pair[1]}", 2 + _b_slot_pos(pairs, pair[1], pair, k))),
            ]
            for lab in left:
                curves.append(_line((0, 1), [lab]))
            for lab in right:
                curves.append(_line((1, 0), [lab]))
            comps.append(component(names[pair][k], "F0", "f0", 2, curves, _f0_extremal(2)))
    return FiberComplex(
        "b",
        3,
        (Q(1, 3), Q(1)),
        tuple(comps),
        provenance=("fiber over an A2^3 boundary divisor",),
    )


def _b_mirror_port(pairs, other_w: int, w: int) -> int:
    """Curve index of the W_other double glued back to W_w (the plane-plane
    doubles come first, ordered by the family list of W_other)."""
    fams = [p for p in pairs if other_w in p]
    for fi, pair in enumerate(fams):
        partner = pair[0] if pair[1] == other_w else pair[1]
        if partner == w:
            return fi
    raise CatalogError("broken plane adjacency in type b")


def _b_slot_pos(pairs, w: int, pair, k: int) -> int:
    """Position of the (pair, k) strip double among W_w's strip doubles."""
    fams = [p for p in pairs if w in p]
    pos = 0
    for fi, f in enumerate(fams):
        for kk in range(3):
            if f == pair and kk == k:
                return pos
            pos += 1
    raise CatalogError("strip not attached to this plane")
