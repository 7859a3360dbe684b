"""Colored framed tangle diagrams in Morse form and the universal invariant.

A diagram is a stack of rows read bottom to top.  Each row is a list of
events over strand positions: `id`, `cup`, `cap`, `x+` (the strand entering
at bottom-left passes over), `x-` (it passes under).  Positions are 0-based
bottom strand indices; a cup's position is the gap it is inserted into.
Unlisted positions are implicit `id` events.

Bead placement: at a positive crossing with both strands upward the first
R-matrix leg sits on the over strand and the second on the under strand
(negative crossings use the inverse R-matrix the same way); a leg whose
strand points downward is built from the color-negated R-matrix and wrapped
in the antipode.  Caps and cups carry pivot beads on the extrema where the
orientation points left: g on such caps, g^-1 on such cups.  Beads multiply
along each component against the orientation (the bead met later multiplies
on the left).  These conventions are pinned by the move suite: exactly one
of the two crossing-leg assignments passes it, and the winner ships frozen
in data/bead_convention.json.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import NamedTuple

from .pbw import (Color, ONE_MON, TensorElem, antipode, _mul_mon, pivot,
                  pivot_inv)
from .ribbon import r_inverse, r_matrix
from .scalars import RootData


class DiagramError(ValueError):
    def __init__(self, message: str, row: int | None = None, pos=None):
        loc = ""
        if row is not None:
            loc = f" (row {row}" + (f", position {pos}" if pos is not None else "") + ")"
        super().__init__(message + loc)
        self.row = row
        self.pos = pos


EVENT_KINDS = ("id", "cup", "cap", "x+", "x-")


class Event(NamedTuple):
    kind: str
    pos: int


@dataclass
class Component:
    color: Color
    orient: str = "up"            # direction at the anchor segment
    anchor: tuple | None = None   # (boundary, position); default: discovery segment

    def __post_init__(self):
        self.color = Color(self.color)
        if self.orient not in ("up", "down"):
            raise DiagramError(f"bad orientation {self.orient!r}")


def _bead_convention() -> str:
    try:
        text = resources.files("hvsl2.data").joinpath("bead_convention.json").read_text()
        return json.loads(text)["crossing_first_leg"]
    except (FileNotFoundError, KeyError, json.JSONDecodeError):
        return "over"


class _RowLayout(NamedTuple):
    events: list          # normalized events (explicit ids)
    consumed: list        # bottom position -> (event index, leg)
    produced: list        # top position -> (event index, leg)
    ev_bottom: dict       # event index -> list of bottom positions
    ev_top: dict          # event index -> list of top positions


def _layout_row(events: list[Event], width: int, row_idx: int) -> _RowLayout:
    order = {"cup": 0, "id": 1, "cap": 1, "x+": 1, "x-": 1}
    evs = sorted(events, key=lambda e: (e.pos, order[e.kind]))
    for e in evs:
        if e.kind not in EVENT_KINDS:
            raise DiagramError(f"unknown event {e.kind!r}", row_idx, e.pos)
    out: list[Event] = []
    consumed: list = []
    produced: list = []
    ev_bottom: dict = {}
    ev_top: dict = {}
    b = t = 0

    def emit(kind, nb, nt):
        idx = len(out)
        out.append(Event(kind, b))
        ev_bottom[idx] = list(range(b, b + nb))
        ev_top[idx] = list(range(t, t + nt))
        for _ in range(nb):
            consumed.append((idx, len(consumed) - b))
        for _ in range(nt):
            produced.append((idx, len(produced) - t))
        return idx

    def autofill(upto):
        nonlocal b, t
        while b < upto:
            emit("id", 1, 1)
            b += 1
            t += 1

    seen_cup_gap = None
    for e in evs:
        if e.pos < 0:
            raise DiagramError("negative position", row_idx, e.pos)
        if e.kind == "cup":
            if e.pos > width:
                raise DiagramError("cup beyond row width", row_idx, e.pos)
            autofill(e.pos)
            if e.pos < b:
                raise DiagramError("overlapping events", row_idx, e.pos)
            if seen_cup_gap == e.pos:
                raise DiagramError("two cups at one gap", row_idx, e.pos)
            seen_cup_gap = e.pos
            emit("cup", 0, 2)
            t += 2
            continue
        if e.pos < b:
            raise DiagramError("overlapping events", row_idx, e.pos)
        autofill(e.pos)
        if e.kind == "id":
            emit("id", 1, 1)
            b += 1
            t += 1
        elif e.kind == "cap":
            if b + 1 >= width:
                raise DiagramError("cap needs two strands", row_idx, e.pos)
            emit("cap", 2, 0)
            b += 2
        else:
            if b + 1 >= width:
                raise DiagramError("crossing needs two strands", row_idx, e.pos)
            emit(e.kind, 2, 2)
            b += 2
            t += 2
    autofill(width)
    # fix the consumed/produced leg fields (they were appended with a trick)
    consumed = []
    produced = []
    for idx, ev in enumerate(out):
        for leg, p in enumerate(ev_bottom[idx]):
            while len(consumed) <= p:
                consumed.append(None)
            consumed[p] = (idx, leg)
        for leg, p in enumerate(ev_top[idx]):
            while len(produced) <= p:
                produced.append(None)
            produced[p] = (idx, leg)
    return _RowLayout(out, consumed, produced, ev_bottom, ev_top)


class _Crossing(NamedTuple):
    row: int
    kind: str
    comps: tuple          # (left comp, right comp) by bottom legs
    dirs: tuple           # directions of the bottom-leg strands
    sign: int
    over_leg: int         # bottom leg index of the over strand


class _Site(NamedTuple):
    kind: str             # "cap", "cup" or "x"
    ref: int              # crossing id for "x"; entered leg for cap/cup
    role: str             # "over"/"under" for crossings, "" otherwise


@dataclass
class _Trace:
    widths: list
    layouts: list
    seg_comp: dict
    seg_dir: dict
    ncomp: int
    discovery: list
    sites: list           # per component: list of _Site in traversal order
    crossings: list       # list of _Crossing
    rotation: list        # per component: rotation number (signed half-turn count / 2)
    open_ends: list
    open_comps: set


class GDiagram:
    """A validated Morse diagram over a scalar ring."""

    def __init__(self, ring: RootData, rows: list, components: list,
                 open_component: int | None = None, bottom_width: int | None = None):
        self.ring = ring
        self.rows = [[e if isinstance(e, Event) else Event(*e) for e in row]
                     for row in rows]
        self.components = [c if isinstance(c, Component) else Component(*c)
                           for c in components]
        self.open_component = open_component
        if bottom_width is None:
            bottom_width = 1 if open_component is not None else 0
        self.bottom_width = bottom_width
        self._trace: _Trace | None = None
        self.validate()

    # -- structural pass ----------------------------------------------------

    def validate(self) -> _Trace:
        if self._trace is not None:
            return self._trace
        widths = [self.bottom_width]
        layouts = []
        for ri, row in enumerate(self.rows):
            lay = _layout_row(row, widths[-1], ri)
            layouts.append(lay)
            widths.append(len(lay.produced))
        if widths[-1] != widths[0]:
            raise DiagramError(
                f"top boundary width {widths[-1]} != bottom width {widths[0]}",
                len(self.rows) - 1)
        trace = self._build_trace(widths, layouts)
        if len(self.components) != trace.ncomp:
            raise DiagramError(
                f"{trace.ncomp} components traced, {len(self.components)} declared")
        if self.open_component is not None:
            oc = self.open_component
            if not 0 <= oc < trace.ncomp:
                raise DiagramError(f"open component {oc} out of range")
            if oc not in trace.open_comps:
                raise DiagramError("the open component owns no boundary strand")
        self._trace = trace
        return trace

    def _neighbors(self, widths, layouts):
        """Segment adjacency for component discovery."""
        adj: dict = {}

        def link(s1, s2):
            adj.setdefault(s1, []).append(s2)
            adj.setdefault(s2, []).append(s1)

        for ri, lay in enumerate(layouts):
            for idx, ev in enumerate(lay.events):
                bot = [(ri, p) for p in lay.ev_bottom[idx]]
                top = [(ri + 1, p) for p in lay.ev_top[idx]]
                if ev.kind == "id":
                    link(bot[0], top[0])
                elif ev.kind == "cup":
                    link(top[0], top[1])
                elif ev.kind == "cap":
                    link(bot[0], bot[1])
                else:
                    link(bot[0], top[1])
                    link(bot[1], top[0])
        return adj

    def _build_trace(self, widths, layouts) -> _Trace:
        adj = self._neighbors(widths, layouts)
        segments = [(b, p) for b in range(len(widths)) for p in range(widths[b])]
        seg_comp: dict = {}
        discovery = []
        for seg in segments:
            if seg in seg_comp:
                continue
            comp = len(discovery)
            discovery.append(seg)
            stack = [seg]
            seg_comp[seg] = comp
            while stack:
                s = stack.pop()
                for t in adj.get(s, ()):
                    if t not in seg_comp:
                        seg_comp[t] = comp
                        stack.append(t)
        ncomp = len(discovery)
        # resolve anchors and walk each component
        seg_dir: dict = {}
        sites: list = [[] for _ in range(ncomp)]
        rotation = [Fraction(0)] * ncomp
        crossings: list = []
        crossing_ids: dict = {}
        open_ends = [(0, p) for p in range(widths[0])] + \
            [(len(widths) - 1, p) for p in range(widths[-1])]

        order = list(range(ncomp))
        if self.components and len(self.components) == ncomp and \
                any(c.anchor is not None for c in self.components):
            # map declared components to traced ones through their anchors
            remap = {}
            for ci, c in enumerate(self.components):
                seg = c.anchor if c.anchor is not None else discovery[ci]
                if seg not in seg_comp:
                    raise DiagramError(f"anchor {seg} is not a segment")
                remap[ci] = seg_comp[seg]
            if sorted(remap.values()) != list(range(ncomp)):
                raise DiagramError("anchors do not match components bijectively")
            inverse = {v: k for k, v in remap.items()}
            seg_comp = {s: inverse[c] for s, c in seg_comp.items()}
            discovery = [self.components[i].anchor or discovery[remap[i]]
                         for i in range(ncomp)]
        open_comps = {seg_comp[e] for e in open_ends}

        nb = len(widths)
        for comp in range(ncomp):
            start = discovery[comp]
            cdef = self.components[comp] if comp < len(self.components) else None
            d0 = 1 if (cdef is None or cdef.orient == "up") else -1
            ends = [e for e in open_ends if seg_comp[e] == comp]
            if ends:
                # open strand: orientation at a boundary end equals the flow
                # direction; start the walk at the inflow end
                if start not in ends:
                    raise DiagramError(
                        "open component anchor must be a boundary end")
                inflow = (start[0] == 0 and d0 == 1) or \
                    (start[0] == nb - 1 and d0 == -1)
                if not inflow:
                    if len(ends) != 2:
                        raise DiagramError("open component with odd ends")
                    other = [e for e in ends if e != start][0]
                    start, d0 = other, (1 if other[0] == 0 else -1)
            self._walk(comp, start, d0, widths, layouts, seg_comp, seg_dir,
                       sites, rotation, crossings, crossing_ids)
        return _Trace(widths, layouts, seg_comp, seg_dir, ncomp, discovery,
                      sites, crossings, rotation, open_ends, open_comps)

    def _walk(self, comp, start, d0, widths, layouts, seg_comp, seg_dir,
              sites, rotation, crossings, crossing_ids):
        nb = len(widths)
        state = (start[0], start[1], d0)
        first = True
        while True:
            b, p, d = state
            if not first and (b, p, d) == (start[0], start[1], d0):
                break
            if (b, p) in seg_dir and first is False and seg_dir[(b, p)] != d:
                raise DiagramError("inconsistent orientation propagation")
            seg_dir[(b, p)] = d
            first = False
            if d == 1:
                if b == nb - 1:
                    break  # open top end
                lay = layouts[b]
                idx, leg = lay.consumed[p]
                ev = lay.events[idx]
                if ev.kind == "id":
                    state = (b + 1, lay.ev_top[idx][0], 1)
                elif ev.kind == "cap":
                    sites[comp].append(_Site("cap", leg, ""))
                    rotation[comp] += Fraction(1, 2) if leg == 1 else Fraction(-1, 2)
                    other = lay.ev_bottom[idx][1 - leg]
                    state = (b, other, -1)
                else:
                    cid = self._crossing_id(b, idx, ev, layouts, seg_comp,
                                            crossings, crossing_ids)
                    over_leg = 0 if ev.kind == "x+" else 1
                    role = "over" if leg == over_leg else "under"
                    sites[comp].append(_Site("x", cid, role))
                    state = (b + 1, lay.ev_top[idx][1 - leg], 1)
            else:
                if b == 0:
                    break  # open bottom end
                lay = layouts[b - 1]
                idx, leg = lay.produced[p]
                ev = lay.events[idx]
                if ev.kind == "id":
                    state = (b - 1, lay.ev_bottom[idx][0], -1)
                elif ev.kind == "cup":
                    sites[comp].append(_Site("cup", leg, ""))
                    rotation[comp] += Fraction(1, 2) if leg == 0 else Fraction(-1, 2)
                    other = lay.ev_top[idx][1 - leg]
                    state = (b, other, 1)
                else:
                    cid = self._crossing_id(b - 1, idx, ev, layouts, seg_comp,
                                            crossings, crossing_ids)
                    over_leg = 0 if ev.kind == "x+" else 1
                    bottom_leg = 1 - leg
                    role = "over" if bottom_leg == over_leg else "under"
                    sites[comp].append(_Site("x", cid, role))
                    state = (b - 1, lay.ev_bottom[idx][bottom_leg], -1)

    def _crossing_id(self, row, idx, ev, layouts, seg_comp, crossings, crossing_ids):
        key = (row, idx)
        cid = crossing_ids.get(key)
        if cid is None:
            cid = len(crossings)
            crossing_ids[key] = cid
            crossings.append(None)  # placeholder; filled after directions known
            lay = layouts[row]
            bl = [(row, p) for p in lay.ev_bottom[idx]]
            crossings[cid] = {"row": row, "idx": idx, "kind": ev.kind,
                              "bot": bl,
                              "comps": (seg_comp[bl[0]], seg_comp[bl[1]]),
                              "over_leg": 0 if ev.kind == "x+" else 1}
        return cid

    # -- derived data ---------------------------------------------------------

    def crossing_records(self) -> list[_Crossing]:
        tr = self.validate()
        out = []
        for c in tr.crossings:
            d1 = tr.seg_dir[c["bot"][0]]
            d2 = tr.seg_dir[c["bot"][1]]
            eps = 1 if c["kind"] == "x+" else -1
            out.append(_Crossing(c["row"], c["kind"], c["comps"], (d1, d2),
                                 eps * d1 * d2, c["over_leg"]))
        return out

    def writhe(self, comp: int) -> int:
        return sum(c.sign for c in self.crossing_records()
                   if c.comps == (comp, comp))

    def linking(self, i: int, j: int) -> int:
        if i == j:
            return self.writhe(i)
        tot = sum(c.sign for c in self.crossing_records()
                  if set(c.comps) == {i, j})
        assert tot % 2 == 0
        return tot // 2

    def colors(self) -> list[Color]:
        return [c.color for c in self.components]

    def rotation_number(self, comp: int) -> Fraction:
        return self.validate().rotation[comp]

    # -- diagram surgeries ------------------------------------------------------

    def reversed_component(self, i: int) -> "GDiagram":
        """Orientation flipped and color negated on component i (closed only)."""
        if self.open_component == i:
            raise DiagramError("cannot reverse the open component")
        comps = []
        tr = self.validate()
        for ci, c in enumerate(self.components):
            anchor = c.anchor or tr.discovery[ci]
            if ci == i:
                comps.append(Component(-c.color,
                                       "down" if c.orient == "up" else "up", anchor))
            else:
                comps.append(Component(c.color, c.orient, anchor))
        return GDiagram(self.ring, self.rows, comps, self.open_component)

    def with_colors(self, colors) -> "GDiagram":
        comps = [Component(col, c.orient, c.anchor)
                 for col, c in zip(colors, self.components)]
        return GDiagram(self.ring, self.rows, comps, self.open_component)


# ---------------------------------------------------------------------------
# parsing and serialization


def parse_color(text: str):
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError as exc:
        raise DiagramError(f"bad color syntax {text!r}") from exc


def parse_diagram(text: str, ring: RootData | None = None) -> GDiagram:
    """Parse the line-oriented diagram format; builds the ring from the
    header unless one is supplied."""
    rows: list[list[Event]] = []
    comps: dict[int, Component] = {}
    open_comp = None
    ell = None
    eta: Fraction | int = 1
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "ring":
            for fieldspec in rest.split():
                k, _, v = fieldspec.partition("=")
                if k == "ell":
                    ell = int(v)
                elif k == "eta":
                    eta = Fraction(v)
                else:
                    raise DiagramError(f"unknown ring field {k!r} (line {ln})")
        elif head == "component":
            bits = rest.split()
            idx = int(bits[0])
            color = None
            orient = "up"
            anchor = None
            for fieldspec in bits[1:]:
                k, _, v = fieldspec.partition("=")
                if k == "color":
                    color = parse_color(v)
                elif k == "orient":
                    orient = v
                elif k == "anchor":
                    bb, _, pp = v.partition(":")
                    anchor = (int(bb), int(pp))
                else:
                    raise DiagramError(f"unknown component field {k!r} (line {ln})")
            if color is None:
                raise DiagramError(f"component {idx} missing color (line {ln})")
            comps[idx] = Component(color, orient, anchor)
        elif head == "open":
            open_comp = int(rest)
        elif head == "row:" or head == "row":
            row = []
            body = rest if head == "row:" else rest.partition(":")[2]
            for tok in body.split():
                kind, _, pos = tok.partition("@")
                if not pos:
                    raise DiagramError(f"event needs @position: {tok!r} (line {ln})")
                if kind not in EVENT_KINDS:
                    raise DiagramError(f"unknown event {kind!r} (line {ln})")
                row.append(Event(kind, int(pos)))
            rows.append(row)
        else:
            raise DiagramError(f"unknown directive {head!r} (line {ln})")
    if ring is None:
        if ell is None:
            raise DiagramError("missing ring header")
        ring = RootData(ell, eta=eta)
    if comps:
        n = max(comps) + 1
        if sorted(comps) != list(range(n)):
            raise DiagramError("component indices must be 0..n-1")
        comp_list = [comps[i] for i in range(n)]
    else:
        comp_list = []
    return GDiagram(ring, rows, comp_list, open_comp)


def serialize_diagram(d: GDiagram) -> str:
    lines = [f"ring ell={d.ring.ell}"]
    for i, c in enumerate(d.components):
        col = c.color.lift()
        col_s = str(col) if isinstance(col, Fraction) else \
            f"{col.real}+{col.imag}i"
        extra = f" anchor={c.anchor[0]}:{c.anchor[1]}" if c.anchor else ""
        lines.append(f"component {i} color={col_s} orient={c.orient}{extra}")
    if d.open_component is not None:
        lines.append(f"open {d.open_component}")
    for lay in d.validate().layouts:
        evs = " ".join(f"{e.kind}@{e.pos}" for e in lay.events if e.kind != "id")
        lines.append(f"row: {evs}".rstrip())
    return "\n".join(lines) + "\n"


def load_diagram(name: str, ring: RootData | None = None) -> GDiagram:
    """Load a curated diagram shipped with the package (data/diagrams)."""
    text = resources.files("hvsl2.data.diagrams").joinpath(name).read_text()
    return parse_diagram(text, ring)


# ---------------------------------------------------------------------------
# bead elements and the universal invariant


def crossing_tensor(ring: RootData, kind: str, over_color: Color, under_color: Color,
                    over_dir: int, under_dir: int,
                    convention: str | None = None) -> TensorElem:
    """The decorated R-element of a crossing; legs ordered (over, under),
    graded by the component colors."""
    if convention is None:
        convention = _bead_convention()
    oc = over_color if over_dir > 0 else -over_color
    uc = under_color if under_dir > 0 else -under_color
    key = ("xbead", convention, kind, oc, uc, over_dir > 0, under_dir > 0)
    val = ring.cache.get(key)
    if val is not None:
        return val
    if convention == "over":
        base = r_matrix(ring, oc, uc) if kind == "x+" else r_inverse(ring, oc, uc)
    else:
        base = (r_matrix(ring, uc, oc) if kind == "x+"
                else r_inverse(ring, uc, oc)).flip()
    if over_dir < 0:
        base = base.apply_at(0, antipode, over_color)
    if under_dir < 0:
        base = base.apply_at(1, antipode, under_color)
    ring.cache[key] = base
    return val if val is not None else base


def universal_invariant(d: GDiagram, rotations: dict | None = None,
                        convention: str | None = None) -> TensorElem:
    """The universal invariant: one tensor leg per component, the open leg
    (if any) holding the honest tangle element.

    ``rotations`` moves the marked point of closed components by the given
    number of bead sites (the raw product changes by a cyclic rotation)."""
    ring = d.ring
    tr = d.validate()
    colors = d.colors()
    ncomp = tr.ncomp
    cache_key = None
    if rotations is None and convention is None:
        cache_key = "_J"
        cached = getattr(d, "_J", None)
        if cached is not None:
            return cached
    cross_tensors: dict[int, TensorElem] = {}
    recs = d.crossing_records()
    for cid, c in enumerate(recs):
        oc = colors[c.comps[c.over_leg]]
        uc = colors[c.comps[1 - c.over_leg]]
        cross_tensors[cid] = crossing_tensor(
            ring, c.kind, oc, uc, c.dirs[c.over_leg], c.dirs[1 - c.over_leg],
            convention)
    all_sites = []
    for comp in range(ncomp):
        sites = list(tr.sites[comp])
        if rotations and comp in rotations and comp not in tr.open_comps:
            k = rotations[comp] % len(sites) if sites else 0
            sites = sites[k:] + sites[:k]
        all_sites.append(sites)
    all_sites = _fuse_crossing_runs(ring, all_sites, cross_tensors)
    cross_terms = {cid: [(k[0], k[1], s) for k, s in te.terms.items()]
                   for cid, te in cross_tensors.items()}
    state: dict = {((ONE_MON,) * ncomp, ()): ring.one}
    for comp in range(ncomp):
        sites = all_sites[comp]
        a = colors[comp]
        for site in sites:
            new_state: dict = {}
            if site.kind in ("cap", "cup"):
                if site.kind == "cap":
                    bead = pivot(ring, a) if site.ref == 1 else None
                else:
                    bead = pivot_inv(ring, a) if site.ref == 1 else None
                if bead is None:
                    continue
                bead_terms = list(bead.terms.items())
                for (mons, pend), coef in state.items():
                    for bm, bc in bead_terms:
                        acc: dict = {}
                        _mul_mon(ring, a, bm, mons[comp], coef * bc, acc)
                        for m2, c2 in acc.items():
                            key = (mons[:comp] + (m2,) + mons[comp + 1:], pend)
                            old = new_state.get(key)
                            nc = c2 if old is None else old + c2
                            if nc.is_zero():
                                new_state.pop(key, None)
                            else:
                                new_state[key] = nc
            else:
                cid = site.ref
                for (mons, pend), coef in state.items():
                    pend_d = dict(pend)
                    if cid in pend_d:
                        # second passage: consume the stored partner leg
                        choices = [(pend_d.pop(cid), ring.one, None)]
                    elif site.role == "over":
                        choices = [(t[0], t[2], t[1]) for t in cross_terms[cid]]
                    else:
                        choices = [(t[1], t[2], t[0]) for t in cross_terms[cid]]
                    base_pend = tuple(sorted(pend_d.items()))
                    for bm, bc, partner in choices:
                        if partner is None:
                            npend = base_pend
                        else:
                            pd = dict(pend_d)
                            pd[cid] = partner
                            npend = tuple(sorted(pd.items()))
                        acc: dict = {}
                        _mul_mon(ring, a, bm, mons[comp], coef * bc, acc)
                        for m2, c2 in acc.items():
                            key = (mons[:comp] + (m2,) + mons[comp + 1:], npend)
                            old = new_state.get(key)
                            nc = c2 if old is None else old + c2
                            if nc.is_zero():
                                new_state.pop(key, None)
                            else:
                                new_state[key] = nc
            state = new_state
    out: dict = {}
    for (mons, pend), coef in state.items():
        assert not pend, "unconsumed crossing leg"
        old = out.get(mons)
        nc = coef if old is None else old + coef
        if nc.is_zero():
            out.pop(mons, None)
        else:
            out[mons] = nc
    res = TensorElem(ring, tuple(colors), out)
    if cache_key is not None:
        d._J = res
    return res


# ---------------------------------------------------------------------------
# closure and doubling


def closure(d: GDiagram) -> GDiagram:
    """Close the open strand with a return arc on the left; the arc adds one
    positive rotation, so the closed invariant is the class of g times the
    open element."""
    if d.open_component is None:
        raise DiagramError("closure needs an open component")
    tr = d.validate()
    rows = [[Event("cup", 0)]] + \
        [[Event(e.kind, e.pos + 1) for e in row] for row in d.rows] + \
        [[Event("cap", 0)]]
    comps = []
    for ci, c in enumerate(d.components):
        b0, p0 = c.anchor or tr.discovery[ci]
        comps.append(Component(c.color, c.orient, (b0 + 1, p0 + 1)))
    return GDiagram(d.ring, rows, comps, None)


def double_component(d: GDiagram, i: int, a, b) -> GDiagram:
    """Replace component i (colored a+b) by two blackboard-parallel copies
    colored a (left copy) and b (right copy)."""
    a, b = Color(a), Color(b)
    if not 0 <= i < len(d.components):
        raise DiagramError(f"component {i} out of range")
    if d.components[i].color != a + b:
        raise DiagramError(f"colors {a}+{b} do not sum to the component color")
    tr = d.validate()

    doubled_pos = [sorted(p for bb in [bnd] for p in range(tr.widths[bnd])
                          if tr.seg_comp[(bnd, p)] == i)
                   for bnd in range(len(tr.widths))]

    def pmap(bnd, pos):
        older = sum(1 for p in doubled_pos[bnd] if p < pos)
        return pos + older

    new_rows: list[list[Event]] = []
    bmap = [0]
    for r, lay in enumerate(tr.layouts):
        offset = 0
        block: list[list[Event]] = []
        for idx, ev in enumerate(lay.events):
            if ev.kind == "id":
                continue
            if ev.kind == "cup":
                comp = tr.seg_comp[(r + 1, lay.ev_top[idx][0])]
                base = pmap(r, ev.pos) + offset
                if comp == i:
                    rowsx = [[Event("cup", base)], [Event("cup", base + 1)]]
                    offset += 4
                else:
                    rowsx = [[Event("cup", base)]]
                    offset += 2
            elif ev.kind == "cap":
                comp = tr.seg_comp[(r, lay.ev_bottom[idx][0])]
                base = pmap(r, ev.pos) + offset
                if comp == i:
                    rowsx = [[Event("cap", base + 1)], [Event("cap", base)]]
                    offset -= 4
                else:
                    rowsx = [[Event("cap", base)]]
                    offset -= 2
            else:
                cl = tr.seg_comp[(r, lay.ev_bottom[idx][0])]
                cr = tr.seg_comp[(r, lay.ev_bottom[idx][1])]
                base = pmap(r, ev.pos) + offset
                k = ev.kind
                if cl != i and cr != i:
                    rowsx = [[Event(k, base)]]
                elif cl == i and cr != i:
                    rowsx = [[Event(k, base + 1)], [Event(k, base)]]
                elif cl != i and cr == i:
                    rowsx = [[Event(k, base)], [Event(k, base + 1)]]
                else:
                    rowsx = [[Event(k, base + 1)], [Event(k, base)],
                             [Event(k, base + 2)], [Event(k, base + 1)]]
            block.extend(rowsx)
        if not block:
            block = [[]]
        new_rows.extend(block)
        bmap.append(len(new_rows))

    comps = []
    for ci, c in enumerate(d.components):
        b0, p0 = c.anchor or tr.discovery[ci]
        if ci == i:
            comps.append(Component(a, c.orient, (bmap[b0], pmap(b0, p0))))
            comps.append(Component(b, c.orient, (bmap[b0], pmap(b0, p0) + 1)))
        else:
            comps.append(Component(c.color, c.orient, (bmap[b0], pmap(b0, p0))))
    oc = d.open_component
    if oc is not None and oc > i:
        oc += 1
    elif oc == i:
        oc = None
    bw = sum(2 if tr.seg_comp[(0, p)] == i else 1 for p in range(tr.widths[0]))
    return GDiagram(d.ring, new_rows, comps, oc, bottom_width=bw)


# ---------------------------------------------------------------------------
# evaluations and move checks


def factor_functionals(ring: RootData, a: Color, reps: bool = True) -> list:
    """The cyclic-invariant functionals usable on one closed leg."""
    from .integrals import mu_functional, mu_mod_functional
    from .linalg import SingularSystemError
    out = [("mu", mu_functional(ring, a))]
    if a.in_Gprime():
        try:
            out.append(("mup", mu_mod_functional(ring, a)))
        except SingularSystemError:
            pass
        if reps:
            try:
                from .repeval import module_trace_functional
                for k in range(ring.ellprime):
                    out.append((f"tr{k}", module_trace_functional(ring, a, k)))
            except SingularSystemError:
                pass
    return out


def j_evaluations(d: GDiagram, J: TensorElem | None = None,
                  reps: bool = True) -> dict:
    """All product-functional evaluations of the invariant of a closed
    diagram: {(label per leg): Scalar}."""
    if d.open_component is not None:
        raise DiagramError("j_evaluations needs a closed diagram")
    ring = d.ring
    if J is None:
        J = universal_invariant(d)
    out = {(): J}
    for _ in range(J.nlegs):
        nxt = {}
        for labels, t in out.items():
            for name, f in factor_functionals(ring, t.grades[0], reps):
                nxt[labels + (name,)] = t.contract_at(0, f)
        out = nxt
    return out


def hh0_tensor_reduce(J: TensorElem):
    """Leg-wise canonical coordinates modulo commutators (finite subalgebra
    legs only)."""
    from .pbw import hh0_basis
    ring = J.ring
    bases = [hh0_basis(ring, g) for g in J.grades]
    out: dict = {}
    for key, c in J.terms.items():
        parts = []
        for leg, m in enumerate(key):
            red = bases[leg].echelon.residual({m: ring.one})
            parts.append(list(red.items()))
        stack = [((), ring.one)]
        for part in parts:
            stack = [(k + (m,), s * cc) for k, s in stack for m, cc in part]
        for k, s in stack:
            nc = out.get(k)
            nc = c * s if nc is None else nc + c * s
            if nc.is_zero():
                out.pop(k, None)
            else:
                out[k] = nc
    return TensorElem(ring, J.grades, out)


def invariants_agree(d1: GDiagram, d2: GDiagram, reps: bool = True,
                     hh0: bool = False) -> tuple[bool, list]:
    """Compare two diagrams through every available evaluation; returns
    (all equal, list of failing labels)."""
    ring = d1.ring
    fails = []
    if d1.open_component is not None or d2.open_component is not None:
        if (d1.open_component is None) != (d2.open_component is None):
            return False, ["open/closed mismatch"]
        J1 = universal_invariant(d1)
        J2 = universal_invariant(d2)
        if J1.grades != J2.grades:
            return False, ["grade mismatch"]
        j = d1.open_component
        if d2.open_component != j:
            return False, ["open index mismatch"]
        from .integrals import mu_functional
        for i in sorted((i for i in range(J1.nlegs) if i != j), reverse=True):
            J1 = J1.contract_at(i, mu_functional(ring, J1.grades[i]))
            J2 = J2.contract_at(i, mu_functional(ring, J2.grades[i]))
        if not (J1 - J2).is_zero():
            fails.append("open factor")
        return not fails, fails
    e1 = j_evaluations(d1, reps=reps)
    e2 = j_evaluations(d2, reps=reps)
    if set(e1) != set(e2):
        return False, ["label sets differ"]
    for k, v in e1.items():
        if not (v - e2[k]).is_zero():
            fails.append(k)
    if hh0:
        from .pbw import is_integral_gamma
        J1 = universal_invariant(d1)
        J2 = universal_invariant(d2)
        ok = all(is_integral_gamma(ring, m.gamma)
                 for t in (J1, J2) for key in t.terms for m in key)
        if ok and hh0_tensor_reduce(J1) != hh0_tensor_reduce(J2):
            fails.append("hh0")
    return not fails, fails


def check_moves(pairs, reps: bool = True, hh0: bool = False) -> list:
    """Run invariance comparisons on curated diagram pairs; returns a report
    with one entry per pair."""
    report = []
    for name, d1, d2 in pairs:
        ok, fails = invariants_agree(d1, d2, reps=reps, hh0=hh0)
        report.append({"name": name, "ok": ok, "failures": fails})
    return report


def cut_component(d: GDiagram, j: int, segment: tuple | None = None,
                  routing: str = "over") -> GDiagram:
    """Open component j by cutting at a segment (default: its anchor) and
    routing the two ends to the boundary: the lower end left and down, the
    upper end right and up, the routing arcs passing over (or under) the
    strands they cross."""
    if d.open_component is not None:
        raise DiagramError("diagram already open")
    if not 0 <= j < len(d.components):
        raise DiagramError(f"component {j} out of range")
    tr = d.validate()
    if segment is None:
        segment = d.components[j].anchor or tr.discovery[j]
    b, p = segment
    if tr.seg_comp.get((b, p)) != j:
        raise DiagramError(f"segment {segment} does not lie on component {j}")
    W = tr.widths[b]
    # both cut ends detour to the right edge along the same path, each strand
    # in between crossed twice on the same side (an RII-cancelling pair), then
    # ride the outermost column to the bottom and top boundaries
    k_right = "x+" if routing == "over" else "x-"
    k_left = "x-" if routing == "over" else "x+"
    block: list[list[Event]] = []
    for q in range(p, W - 1):
        block.append([Event(k_right, q)])
    block.append([Event("cap", W - 1)])
    block.append([Event("cup", W - 1)])
    for q in range(W - 2, p - 1, -1):
        block.append([Event(k_left, q)])
    rows = [list(r) for r in d.rows[:b]] + block + [list(r) for r in d.rows[b:]]
    nblock = len(block)
    comps = []
    cut_dir = tr.seg_dir[(b, p)]
    for ci, c in enumerate(d.components):
        if ci == j:
            comps.append(Component(c.color, "down" if cut_dir > 0 else "up",
                                   (0, 0)))
            continue
        b0, p0 = c.anchor or tr.discovery[ci]
        comps.append(Component(c.color, c.orient,
                               (b0 + nblock, p0) if b0 > b else (b0, p0)))
    return GDiagram(d.ring, rows, comps, j)


def _fuse_crossing_runs(ring: RootData, all_sites: list, cross_tensors: dict) -> list:
    """Fuse consecutive crossing sites that are adjacent on both strands into
    a single virtual crossing (the factorwise product of their decorated
    tensors); collapses braid words so the expansion state stays small."""
    sites = [list(s) for s in all_sites]
    next_id = max(cross_tensors, default=-1) + 1
    while True:
        occ: dict[int, list] = {}
        for ci, lst in enumerate(sites):
            for ix, s in enumerate(lst):
                if s.kind == "x":
                    occ.setdefault(s.ref, []).append((ci, ix))
        fused = False
        for cid, places in occ.items():
            if len(places) != 2:
                continue
            nxt = None
            for (ci, ix) in places:
                if ix + 1 < len(sites[ci]) and sites[ci][ix + 1].kind == "x":
                    cand = sites[ci][ix + 1].ref
                    if cand != cid and len(occ.get(cand, ())) == 2:
                        follows = all(
                            any(cj == pj and jx == px + 1
                                for (pj, px) in places)
                            for (cj, jx) in occ[cand])
                        if follows:
                            nxt = cand
                            break
            if nxt is None:
                continue
            # arrange both tensors with legs ordered (strand0, strand1),
            # strand0 being the strand of the first occurrence of cid
            (a_ci, a_ix), (b_ci, b_ix) = places
            role_a1 = sites[a_ci][a_ix].role
            role_a2 = sites[a_ci][a_ix + 1].role
            t1 = cross_tensors[cid]
            t2 = cross_tensors[nxt]
            t1a = t1 if role_a1 == "over" else t1.flip()
            t2a = t2 if role_a2 == "over" else t2.flip()
            cross_tensors[next_id] = t2a * t1a
            sites[a_ci][a_ix] = _Site("x", next_id, "over")
            sites[b_ci][b_ix] = _Site("x", next_id, "under")
            del sites[a_ci][a_ix + 1]
            lst = sites[b_ci]
            for jx in range(len(lst)):
                if lst[jx].kind == "x" and lst[jx].ref == nxt:
                    del lst[jx]
                    break
            next_id += 1
            fused = True
            break
        if not fused:
            return sites


# ---------------------------------------------------------------------------
# curated diagram builders


def round_unknot(ring: RootData, color, kinks: int = 0) -> GDiagram:
    """0-framed round unknot (counterclockwise, so J is the pivot), with
    optional positive (kinks > 0) or negative (kinks < 0) curls."""
    rows = [[Event("cup", 0)]]
    rows += [[Event("x-" if kinks > 0 else "x+", 0)]] * abs(kinks)
    rows += [[Event("cap", 0)]]
    return GDiagram(ring, rows, [Component(Color(color), "down")])


def open_strand(ring: RootData, color, orient: str = "up") -> GDiagram:
    return GDiagram(ring, [[Event("id", 0)]], [Component(Color(color), orient)],
                    open_component=0)


def braid_closure_diagram(ring: RootData, word, colors, nstrands: int) -> GDiagram:
    """Closure of a braid word [(position, kind), ...] on upward strands."""
    rows = [[Event("cup", i)] for i in range(nstrands)]
    rows += [[Event(kind, g)] for g, kind in word]
    rows += [[Event("cap", i)] for i in range(nstrands - 1, -1, -1)]
    return GDiagram(ring, rows, [Component(Color(c)) for c in colors])


def curl_pair(ring: RootData, color, orient: str = "up"):
    """The two same-writhe open curls related by the framed first move."""
    dr = GDiagram(ring, [[Event("cup", 1)], [Event("x+", 0)], [Event("cap", 1)]],
                  [Component(Color(color), orient)], open_component=0)
    dl = GDiagram(ring, [[Event("cup", 0)], [Event("x+", 1)], [Event("cap", 0)]],
                  [Component(Color(color), orient)], open_component=0)
    return dr, dl


def rii_pair(ring: RootData, c1, c2, o1: str = "up", o2: str = "up"):
    comps = [Component(Color(c1), o1), Component(Color(c2), o2)]
    flat = GDiagram(ring, [[Event("cup", 0)], [Event("cup", 2)],
                           [Event("cap", 0)], [Event("cap", 0)]], comps)
    poked = GDiagram(ring, [[Event("cup", 0)], [Event("cup", 2)],
                            [Event("x+", 1)], [Event("x-", 1)],
                            [Event("cap", 0)], [Event("cap", 0)]], comps)
    return flat, poked


def riii_pair(ring: RootData, c1, c2):
    left = braid_closure_diagram(
        ring, [(0, "x+"), (1, "x+"), (0, "x+")], [c1, c2], 3)
    right = braid_closure_diagram(
        ring, [(1, "x+"), (0, "x+"), (1, "x+")], [c1, c2], 3)
    return left, right


def marked_point_pair(ring: RootData, c1, c2):
    """The same Hopf link with the marked point of component 0 moved to a
    different segment (the raw bead word rotates; evaluations agree)."""
    rows = [[Event("cup", 0)], [Event("cup", 2)], [Event("x+", 1)],
            [Event("x+", 1)], [Event("cap", 0)], [Event("cap", 0)]]
    d1 = GDiagram(ring, rows, [Component(Color(c1)), Component(Color(c2))])
    tr = d1.validate()
    segs = sorted(s for s, c in tr.seg_comp.items() if c == 0)
    other = segs[-1]
    d2 = GDiagram(ring, rows, [Component(Color(c1), "up", other),
                               Component(Color(c2))])
    return d1, d2


def slide_pair_one(ring: RootData, color):
    """S^2 x S^1 presented by a 0-framed unknot, against the presentation
    obtained by sliding it over a +1-framed 0-colored stabilizing unknot."""
    d1 = round_unknot(ring, color)
    a = Color(color)
    rows = [[Event("cup", 0)], [Event("cup", 2)], [Event("x-", 0)],
            [Event("x+", 1)], [Event("x+", 1)], [Event("x-", 2)],
            [Event("cap", 0)], [Event("cap", 0)]]
    d2 = GDiagram(ring, rows, [Component(a), Component(-a)])
    return d1, d2


def slide_pair_two(ring: RootData):
    """S^3 as a (2,1)-framed Hopf link against the (+1,+1) unlink it slides
    to, both 0-colored."""
    rows1 = [[Event("cup", 0)], [Event("cup", 2)], [Event("x-", 0)],
             [Event("x-", 0)], [Event("x+", 1)], [Event("x+", 1)],
             [Event("x-", 2)], [Event("cap", 0)], [Event("cap", 0)]]
    d1 = GDiagram(ring, rows1, [Component(Color(0)), Component(Color(0))])
    rows2 = [[Event("cup", 0)], [Event("x-", 0)], [Event("cap", 0)],
             [Event("cup", 0)], [Event("x-", 0)], [Event("cap", 0)]]
    d2 = GDiagram(ring, rows2, [Component(Color(0)), Component(Color(0))])
    return d1, d2


def curated_pairs(ring: RootData) -> list:
    """The move-suite diagram pairs compared by every evaluation."""
    from fractions import Fraction as F
    a, b = F(1, 2), F(1, 3)
    out = []
    out.append(("rii", *rii_pair(ring, a, b)))
    out.append(("rii-mixed", *rii_pair(ring, a, b, "up", "down")))
    out.append(("riii", *riii_pair(ring, a, b)))
    out.append(("curl", *curl_pair(ring, a)))
    out.append(("marked-point", *marked_point_pair(ring, a, b)))
    return out


def check_reversal(d: GDiagram, i: int, reps: bool = True) -> bool:
    """Prop: reversing component i (color negated) applies the antipode to
    the i-th factor; verified through evaluations."""
    J1 = universal_invariant(d.reversed_component(i))
    J2 = universal_invariant(d).apply_at(i, antipode, -d.colors()[i])
    e1 = _tensor_evaluations(J1, reps)
    e2 = _tensor_evaluations(J2, reps)
    return set(e1) == set(e2) and all((e1[k] - e2[k]).is_zero() for k in e1)


def check_doubling(d: GDiagram, i: int, a, b, reps: bool = True) -> bool:
    """Prop: doubling component i into colors (a, b) applies the coproduct
    to the i-th factor; verified through evaluations."""
    a, b = Color(a), Color(b)
    J1 = universal_invariant(double_component(d, i, a, b))
    J2 = universal_invariant(d).coproduct_at(i, a, b)
    e1 = _tensor_evaluations(J1, reps)
    e2 = _tensor_evaluations(J2, reps)
    return set(e1) == set(e2) and all((e1[k] - e2[k]).is_zero() for k in e1)


def _tensor_evaluations(J: TensorElem, reps: bool = True) -> dict:
    out = {(): J}
    for _ in range(J.nlegs):
        nxt = {}
        for labels, t in out.items():
            for name, f in factor_functionals(J.ring, t.grades[0], reps):
                nxt[labels + (name,)] = t.contract_at(0, f)
        out = nxt
    return out


def reverse_component(d: GDiagram, i: int) -> GDiagram:
    """Orientation reversal with color negation on component i."""
    return d.reversed_component(i)
