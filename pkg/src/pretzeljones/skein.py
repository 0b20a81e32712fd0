"""Brute-force Kauffman bracket of decorated planar diagrams.

A PlanarDiagram is a port graph: nodes are crossings, projector boxes,
fixed matching boxes, cups and caps; edges glue ports pairwise.  bracket()
contracts the graph with a frontier sweep, maintaining a linear combination
of pairings on the open ports, so cabled diagrams stay far away from the
2^(crossings) blowup.

Projector boxes expand through the integer table [n]! * JW_n; the single
global factor 1/[n]! per box is restored at the end, which keeps every
intermediate coefficient an integer Laurent polynomial.

Conventions, fixed once: crossing ports are NW=0, NE=1, SW=2, SE=3; for a
type "A" crossing (overstrand from lower left to upper right) the identity
smoothing carries q^(-1/2) and the turnback smoothing q^(+1/2); type "B" is
the mirror.  A positive entry in a pretzel word gives type "A" crossings.
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional, Sequence, Tuple

from . import qring, tl
from .qring import ONE, HalfLaurent, RatFunc
from .tl import Matching

_PORT_SHIFT = 1 << 20

_ID_SMOOTH = (2, 3, 0, 1)   # NW-SW, NE-SE
_TURNBACK = (1, 0, 3, 2)    # NW-NE, SW-SE
_HALF_POS = HalfLaurent.monomial(1)
_HALF_NEG = HalfLaurent.monomial(-1)


class DiagramError(ValueError):
    pass


class PlanarDiagram:
    """Port graph in embedding order.  Ports of a node are numbered; boxes
    put the first half of the ports on one side and the second half on the
    other, crossings use NW=0, NE=1, SW=2, SE=3.
    """

    def __init__(self):
        self.nodes: List[tuple] = []
        self.edges: List[Tuple[Tuple[int, int], Tuple[int, int]]] = []
        self.free_loops = 0
        self._taken = set()

    # -- construction

    def _add(self, node) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def add_jw(self, size: int) -> int:
        if size < 1:
            raise DiagramError("projector boxes need at least one strand")
        return self._add(("jw", size))

    def add_elem(self, m: Matching) -> int:
        return self._add(("elem", m))

    def add_crossing(self, kind: str) -> int:
        if kind not in ("A", "B"):
            raise DiagramError("crossing kind must be 'A' or 'B'")
        return self._add(("crossing", kind))

    def add_cup(self) -> int:
        return self._add(("cup",))

    def add_cap(self) -> int:
        return self._add(("cap",))

    def add_loops(self, count: int = 1):
        self.free_loops += count

    def port_count(self, i: int) -> int:
        node = self.nodes[i]
        if node[0] == "jw":
            return 2 * node[1]
        if node[0] == "elem":
            return 2 * node[1].n
        if node[0] == "crossing":
            return 4
        return 2

    def connect(self, a: Tuple[int, int], b: Tuple[int, int],
                mult: int = 1, reverse: bool = False):
        """Glue `mult` parallel strands starting at ports a and b."""
        if mult < 1:
            raise DiagramError("multiplicity must be positive")
        for i in range(mult):
            pa = (a[0], a[1] + i)
            pb = (b[0], b[1] + (mult - 1 - i if reverse else i))
            for p in (pa, pb):
                if not (0 <= p[1] < self.port_count(p[0])):
                    raise DiagramError(f"no port {p[1]} on node {p[0]}")
                if p in self._taken:
                    raise DiagramError(f"port {p} glued twice")
            if pa == pb:
                raise DiagramError("cannot glue a port to itself")
            self._taken.add(pa)
            self._taken.add(pb)
            self.edges.append((pa, pb))

    def open_ports(self) -> List[Tuple[int, int]]:
        out = []
        for i in range(len(self.nodes)):
            for p in range(self.port_count(i)):
                if (i, p) not in self._taken:
                    out.append((i, p))
        return out

    # -- serialization (the CLI --diagram-in format)

    def to_json(self) -> str:
        nodes = []
        for node in self.nodes:
            if node[0] == "jw":
                nodes.append({"type": "jw", "size": node[1]})
            elif node[0] == "elem":
                nodes.append({"type": "elem", "pairs": node[1].to_text()})
            elif node[0] == "crossing":
                nodes.append({"type": "crossing", "kind": node[1]})
            else:
                nodes.append({"type": node[0]})
        edges = [{"a": list(a), "b": list(b)} for a, b in self.edges]
        return json.dumps(
            {"nodes": nodes, "edges": edges, "free_loops": self.free_loops},
            indent=2)

    @staticmethod
    def from_json(text: str) -> "PlanarDiagram":
        data = json.loads(text)
        d = PlanarDiagram()
        for spec in data["nodes"]:
            t = spec["type"]
            if t == "jw":
                d.add_jw(int(spec["size"]))
            elif t == "elem":
                d.add_elem(Matching.from_text(spec["pairs"]))
            elif t == "crossing":
                d.add_crossing(spec["kind"])
            elif t == "cup":
                d.add_cup()
            elif t == "cap":
                d.add_cap()
            else:
                raise DiagramError(f"unknown node type {t!r}")
        for e in data.get("edges", []):
            d.connect(tuple(e["a"]), tuple(e["b"]),
                      mult=int(e.get("mult", 1)),
                      reverse=bool(e.get("reverse", False)))
        d.free_loops = int(data.get("free_loops", 0))
        return d


def _branches(node) -> List[Tuple[Tuple[int, ...], object, int]]:
    """Expansion of one node: (internal pairing, coefficient, extra den size).

    For a projector box the coefficients come from the integer table and the
    third component records the box size whose [size]! joins the global
    denominator.
    """
    kind = node[0]
    if kind == "crossing":
        if node[1] == "A":
            return [(_ID_SMOOTH, _HALF_NEG, 0), (_TURNBACK, _HALF_POS, 0)]
        return [(_ID_SMOOTH, _HALF_POS, 0), (_TURNBACK, _HALF_NEG, 0)]
    if kind == "elem":
        return [(node[1].mate, ONE, 0)]
    if kind in ("cup", "cap"):
        return [((1, 0), ONE, 0)]
    if kind == "jw":
        size = node[1]
        table = tl._w_table(size)
        return [(m.mate, c, size) for m, c in table.terms.items()]
    raise DiagramError(f"unknown node kind {kind!r}")


def _contraction_order(d: PlanarDiagram) -> List[int]:
    """Greedy minimal-frontier order: absorb next the node that shrinks the
    set of open ends the most, breaking ties by embedding order.

    Projector boxes lose ties against everything else: each box branches
    into its whole expansion, so it is absorbed only once the surroundings
    have been contracted onto it and most branches die or merge instantly.
    """
    n = len(d.nodes)
    partner = {}
    for a, b in d.edges:
        partner[a] = b
        partner[b] = a
    done = [False] * n
    order = []
    for _ in range(n):
        best, best_key = None, None
        for v in range(n):
            if done[v]:
                continue
            ports = d.port_count(v)
            inside = 0
            for p in range(ports):
                u = partner[(v, p)][0]
                if u == v or done[u]:
                    inside += 1
            gain = inside - (ports - inside)
            key = (gain, d.nodes[v][0] != "jw")
            if best is None or key > best_key:
                best, best_key = v, key
        order.append(best)
        done[best] = True
    return order


def bracket(d: PlanarDiagram) -> RatFunc:
    """Exact Kauffman bracket of a closed decorated diagram."""
    open_ports = d.open_ports()
    if open_ports:
        raise DiagramError(f"diagram has {len(open_ports)} unglued ports")
    partner = {}
    for a, b in d.edges:
        partner[a] = b
        partner[b] = a

    enc = lambda p: p[0] * _PORT_SHIFT + p[1]
    order = _contraction_order(d)
    processed = [False] * len(d.nodes)

    # states: canonical open-end pairing -> integer-Laurent coefficient
    states: Dict[tuple, HalfLaurent] = {(): tl.delta_power(d.free_loops)}
    den: Dict[int, int] = {}

    for v in order:
        node = d.nodes[v]
        nports = d.port_count(v)
        kind = node[0]
        vports = [enc((v, p)) for p in range(nports)]
        ext = []  # static per-port: ('self', q) | ('fresh', end) | None (open)
        for p in range(nports):
            u, q = partner[(v, p)]
            if u == v:
                ext.append(("self", enc((v, q))))
            elif processed[u]:
                ext.append(None)
            else:
                ext.append(("fresh", enc((u, q))))
        branches = None
        new_states: Dict[tuple, HalfLaurent] = {}
        for pairing, coeff in states.items():
            D = {}
            for a, b in pairing:
                D[a] = b
                D[b] = a

            def term(p):
                e = ext[p]
                if e is None:
                    y = D[vports[p]]
                    if y // _PORT_SHIFT == v:
                        return ("port", y % _PORT_SHIFT)
                    return ("ext", y)
                if e[0] == "self":
                    return ("port", e[1] % _PORT_SHIFT)
                return ("ext", e[1])

        # resolve each port once per state
            terms = [term(p) for p in range(nports)]
            if kind == "jw":
                size = node[1]
                dead = False
                for p in range(nports):
                    t = terms[p]
                    if t[0] == "port" and ((p < size) == (t[1] < size)) \
                            and t[1] != p:
                        dead = True  # a cup or cap straight into the box
                        break
                if dead:
                    continue
            if branches is None:
                branches = _branches(node)
            for mate, bcoeff, bsize in branches:
                loops = 0
                consumed = [False] * nports
                pairs = []
                for p in range(nports):
                    if consumed[p] or terms[p][0] == "port":
                        continue
                    left = terms[p][1]
                    cur = p
                    while True:
                        consumed[cur] = True
                        q = mate[cur]
                        consumed[q] = True
                        t = terms[q]
                        if t[0] == "ext":
                            pairs.append((left, t[1]))
                            break
                        cur = t[1]
                for p in range(nports):
                    if consumed[p]:
                        continue
                    cur = p
                    while not consumed[cur]:
                        consumed[cur] = True
                        q = mate[cur]
                        consumed[q] = True
                        cur = terms[q][1]
                    loops += 1
                newD = dict(D)
                for p in range(nports):
                    newD.pop(vports[p], None)
                for a, b in pairs:
                    newD.pop(a, None)
                    newD.pop(b, None)
                for a, b in pairs:
                    if a != b:
                        newD[a] = b
                        newD[b] = a
                key = tuple(sorted((a, b) for a, b in newD.items() if a < b))
                c = coeff * bcoeff
                if loops:
                    c = c * tl.delta_power(loops)
                if not c:
                    continue
                s = new_states.get(key)
                s = c if s is None else s + c
                if s:
                    new_states[key] = s
                elif key in new_states:
                    del new_states[key]
        if branches is not None and branches[0][2]:
            size = branches[0][2]
            for j in range(2, size + 1):
                den[j] = den.get(j, 0) + 1
        states = new_states
        processed[v] = True
        if not states:
            break

    total = states.get((), qring.ZERO)
    return RatFunc.from_qint_factors(total, den)


# The bracket of a closed diagram is a scalar; with every projector expanded
# the denominators divide out, so the value is a Laurent polynomial wrapped
# in its factored rational form.
BracketValue = RatFunc


# ---------------------------------------------------------------------------
# diagram builders


def unknot_diagram(n: int) -> PlanarDiagram:
    """JW_n closed up on itself: the color-n unknot."""
    d = PlanarDiagram()
    box = d.add_jw(n)
    for i in range(n):
        d.connect((box, i), (box, n + i))
    return d


def theta_network(a: int, b: int, c: int) -> PlanarDiagram:
    """Two trivalent vertices joined by bands of a, b, c strands, each band
    carrying its projector.  Bracket equals qring.theta(a, b, c).
    """
    if not qring.admissible(a, b, c):
        raise DiagramError(f"({a}, {b}, {c}) is not admissible")
    x = (a + b - c) // 2
    y = (b + c - a) // 2
    z = (c + a - b) // 2
    d = PlanarDiagram()
    box = {}
    for name, size in (("a", a), ("b", b), ("c", c)):
        box[name] = d.add_jw(size) if size else None

    def hook(name, side, idx):
        # side 0: left ends of the band, side 1: right ends
        sizes = {"a": a, "b": b, "c": c}
        return (box[name], idx + side * sizes[name])

    for side in (0, 1):
        for t in range(1, x + 1):
            d.connect(hook("a", side, a - t), hook("b", side, t - 1))
        for t in range(1, y + 1):
            d.connect(hook("b", side, b - t), hook("c", side, t - 1))
        for t in range(1, z + 1):
            d.connect(hook("a", side, t - 1), hook("c", side, c - t))
    return d


def _trace_pretzel(w: Sequence[int]):
    """Traverse the underlying curve of P(w).

    Top and bottom boundary columns are numbered 0..2R-1; region i owns
    columns 2i, 2i+1 and transposes them iff |w_i| is odd.  The closure arcs
    pair columns (1,2)(3,4)...(2R-1,0) on both boundaries.

    Returns (passes, comp_columns): passes[i] holds the vertical directions
    (-1 down, +1 up) of the two strand passes through region i, and
    comp_columns has one representative top column per link component.
    """
    R = len(w)
    if R < 1:
        raise DiagramError("empty pretzel word")

    def thr(col):
        return col ^ 1 if w[col >> 1] % 2 else col

    def cl(col):
        return (col + 1) % (2 * R) if col % 2 else (col - 1) % (2 * R)

    passes: List[List[int]] = [[] for _ in range(R)]
    seg_done = [False] * (2 * R)  # vertical segments, named by top column
    comp_columns = []
    for s in range(2 * R):
        if seg_done[s]:
            continue
        comp_columns.append(s)
        col, down = s, True
        while True:
            seg = col if down else thr(col)
            seg_done[seg] = True
            passes[seg >> 1].append(-1 if down else 1)
            col = cl(thr(col))
            down = not down
            if down and col == s:
                break
    return passes, comp_columns


def pretzel_components(w: Sequence[int]) -> int:
    """Number of link components of the pretzel P(w)."""
    return len(_trace_pretzel(list(w))[1])


def writhe(w: Sequence[int]) -> int:
    """Signed crossing count of the standard oriented diagram of P(w).

    All crossings of one region share a sign: positive regions contribute
    +w_i when their two strands run parallel and -w_i when antiparallel,
    and reversing the orientation of the knot changes nothing.
    """
    passes, comps = _trace_pretzel(list(w))
    if len(comps) != 1:
        raise DiagramError("writhe is only defined here for knots")
    total = 0
    for wi, p in zip(w, passes):
        parallel = 1 if p[0] == p[1] else -1
        total += wi * parallel
    return total


def cable_pretzel(w: Sequence[int], n: int) -> PlanarDiagram:
    """Standard pretzel diagram, every strand replaced by an n-cable, one
    projector per link component, blackboard framing.
    """
    w = list(w)
    R = len(w)
    if R < 1:
        raise DiagramError("empty pretzel word")
    if n < 1:
        raise DiagramError("cable width must be positive")
    d = PlanarDiagram()
    width = 2 * R * n

    # frontier[s] = (node, port) waiting to be glued downward at slot s
    frontier: List[Optional[Tuple[int, int]]] = [None] * width

    def cap_row():
        # closure arcs: column pairs (1,2)(3,4)...(2R-1,0), cabled and nested
        for i in range(R - 1):
            left, right = (2 * i + 1) * n, (2 * i + 2) * n
            for t in range(n):
                c = d.add_cap()
                frontier[left + t] = (c, 0)
                frontier[right + n - 1 - t] = (c, 1)
        for t in range(n):  # outer arcs around everything
            c = d.add_cap()
            frontier[(2 * R - 1) * n + n - 1 - t] = (c, 0)
            frontier[t] = (c, 1)

    cap_row()

    # one projector per component, on a representative column of each
    reps = _trace_pretzel(w)[1]
    for col in reps:
        box = d.add_jw(n)
        for t in range(n):
            d.connect(frontier[col * n + t], (box, t))
            frontier[col * n + t] = (box, n + t)

    def crossing_at(slot: int, kind: str):
        x = d.add_crossing(kind)
        d.connect(frontier[slot], (x, 0))
        d.connect(frontier[slot + 1], (x, 1))
        frontier[slot] = (x, 2)
        frontier[slot + 1] = (x, 3)

    for i, wi in enumerate(w):
        kind = "A" if wi > 0 else "B"
        base = 2 * i * n
        for _ in range(abs(wi)):
            # one cable crossing = n^2 elementary crossings
            for a in range(n):
                for b in range(n):
                    crossing_at(base + n + a - b - 1, kind)

    # bottom closure mirrors the top
    for i in range(R - 1):
        left, right = (2 * i + 1) * n, (2 * i + 2) * n
        for t in range(n):
            c = d.add_cup()
            d.connect(frontier[left + t], (c, 0))
            d.connect(frontier[right + n - 1 - t], (c, 1))
    for t in range(n):
        c = d.add_cup()
        d.connect(frontier[(2 * R - 1) * n + n - 1 - t], (c, 0))
        d.connect(frontier[t], (c, 1))
    return d


# ---------------------------------------------------------------------------
# fused skeletons
#
# After fusing the two cables of every twist region into an even channel and
# untwisting, the leftover diagram is a necklace: per region a center box of
# width 2k_i framed by turnback arcs, and per junction one projector box of
# width n in the top arc and one in the bottom arc.  The wiring level below
# works on a plain involution over named box ports, so enumeration code can
# substitute basis matchings into boxes and strip closable circles before
# committing to a PlanarDiagram.


def fused_skeleton(n: int, k: Sequence[int]):
    """Port pairing and box table of the fused untwisted pretzel skeleton.

    Boxes are keyed ("cen", i) width 2k_i, ("jt", i), ("jb", i) width n.
    Ports of a box of width s are (key, 0..s-1) on one side and
    (key, s..2s-1) on the other.  Junction i joins region i to region i+1
    cyclically; crossing a junction reverses strand order.
    """
    k = tuple(k)
    R = len(k)
    if R < 2:
        raise DiagramError("need at least two twist regions")
    if n < 1:
        raise DiagramError("cable width must be positive")
    for ki in k:
        if not 0 <= ki <= n:
            raise DiagramError(f"channel {ki} not admissible at width {n}")
    pair: Dict[tuple, tuple] = {}
    boxes: Dict[tuple, int] = {}

    def join(a, b):
        pair[a] = b
        pair[b] = a

    for i in range(R):
        boxes[("jt", i)] = n
        boxes[("jb", i)] = n
        if k[i]:
            boxes[("cen", i)] = 2 * k[i]
    for i in range(R):
        ki = k[i]
        cen = ("cen", i)

        def L(s, i=i):
            return (("jt", (i - 1) % R), n + (n - 1 - s))

        def Rt(s, i=i):
            return (("jt", i), s)

        def BL(s, i=i):
            return (("jb", (i - 1) % R), n + (n - 1 - s))

        def BR(s, i=i):
            return (("jb", i), s)

        for t in range(n - ki):
            join(L(ki + t), Rt(n - ki - 1 - t))
            join(BL(ki + t), BR(n - ki - 1 - t))
        for s in range(ki):
            join(L(s), (cen, s))
            join(Rt(n - ki + s), (cen, ki + s))
            join(BL(s), (cen, 2 * ki + s))
            join(BR(n - ki + s), (cen, 3 * ki + s))
    return pair, boxes


def splice_box(pair: dict, boxes: dict, key, mate: Sequence[int]) -> int:
    """Replace box `key` by the fixed matching `mate`, gluing its chains
    into the pairing.  Mutates pair/boxes; returns closed loops created.
    """
    size = boxes.pop(key)
    nports = 2 * size
    if len(mate) != nports:
        raise DiagramError(f"matching size {len(mate)//2} on box of width {size}")
    ext = [pair.pop((key, j)) for j in range(nports)]
    terms = []
    for j in range(nports):
        x = ext[j]
        if x[0] == key:
            terms.append(("port", x[1]))
        else:
            terms.append(("ext", x))
    loops = 0
    consumed = [False] * nports
    for j in range(nports):
        if consumed[j] or terms[j][0] == "port":
            continue
        left = terms[j][1]
        cur = j
        while True:
            consumed[cur] = True
            q = mate[cur]
            consumed[q] = True
            t = terms[q]
            if t[0] == "ext":
                pair[left] = t[1]
                pair[t[1]] = left
                break
            cur = t[1]
    for j in range(nports):
        if consumed[j]:
            continue
        cur = j
        while not consumed[cur]:
            consumed[cur] = True
            q = mate[cur]
            consumed[q] = True
            cur = terms[q][1]
        loops += 1
    return loops


def strip_circles(pair: dict, boxes: dict, key) -> int:
    """Remove strands of box `key` that close onto themselves at an edge of
    the box (partial trace).  The removal coefficient is NOT applied here;
    callers account for it.  Returns the number of strands removed.
    """
    removed = 0
    while boxes[key] > 0:
        s = boxes[key]
        if pair.get((key, s - 1)) == (key, 2 * s - 1):
            dead = (s - 1, 2 * s - 1)
        elif pair.get((key, 0)) == (key, s):
            dead = (0, s)
        else:
            break
        del pair[(key, dead[0])]
        del pair[(key, dead[1])]
        remap = {}
        keep_top = [j for j in range(s) if j != dead[0]]
        keep_bot = [j for j in range(s, 2 * s) if j != dead[1]]
        for newj, oldj in enumerate(keep_top + keep_bot):
            remap[oldj] = newj
        entries = []
        for oldj, newj in remap.items():
            x = pair.pop((key, oldj), None)
            if x is not None:
                entries.append((newj, x))
        for newj, x in entries:
            if x[0] == key:
                x = (key, remap[x[1]])
            pair[(key, newj)] = x
            pair[x] = (key, newj)
        boxes[key] = s - 1
        removed += 1
    return removed


def wiring_diagram(pair: dict, boxes: dict, free_loops: int = 0) -> PlanarDiagram:
    """Commit a wiring-level skeleton to a PlanarDiagram."""
    d = PlanarDiagram()
    idx = {}
    for key in sorted(k for k in boxes if boxes[k] > 0):
        idx[key] = d.add_jw(boxes[key])
    seen = set()
    for a, b in pair.items():
        if a in seen:
            continue
        seen.add(a)
        seen.add(b)
        d.connect((idx[a[0]], a[1]), (idx[b[0]], b[1]))
    d.free_loops = free_loops
    return d


def fused_diagram(n: int, k: Sequence[int]) -> PlanarDiagram:
    """The fused untwisted skeleton S_k as a closed diagram."""
    pair, boxes = fused_skeleton(n, k)
    return wiring_diagram(pair, boxes)


def build_T_k_sigma(w: Sequence[int], n: int, k: Sequence[int],
                    sigma) -> PlanarDiagram:
    """Leftover diagram of state (k, sigma): center boxes of regions 1..m
    and interior junction boxes replaced by the chosen matchings, closable
    circles stripped.  sigma is (d, sigma_t, sigma_b) with d a tuple of m
    matchings (entries for k_i = 0 may be the empty matching) and sigma_t,
    sigma_b tuples of m-1 matchings; sigma_b[i] must live at the width left
    after the circles of that junction are stripped.
    """
    k = tuple(k)
    R = len(k)
    if len(w) != R:
        raise DiagramError("w and k lengths differ")
    d_list, st_list, sb_list = sigma
    if len(d_list) != R - 1 or len(st_list) != R - 2 or len(sb_list) != R - 2:
        raise DiagramError("choice vector shape does not match the word")
    pair, boxes = fused_skeleton(n, k)
    loops = 0
    for i in range(1, R):
        if k[i] == 0:
            continue
        m = d_list[i - 1]
        if m.n != 2 * k[i]:
            raise DiagramError(f"d_{i} has {m.n} strands, needs {2 * k[i]}")
        loops += splice_box(pair, boxes, ("cen", i), m.mate)
    for i in range(1, R - 1):
        loops += splice_box(pair, boxes, ("jt", i), st_list[i - 1].mate)
        c = strip_circles(pair, boxes, ("jb", i))
        sb = sb_list[i - 1]
        if sb.n != n - c:
            raise DiagramError(
                f"junction {i} leaves width {n - c}, sigma_b has {sb.n}")
        loops += splice_box(pair, boxes, ("jb", i), sb.mate)
    return wiring_diagram(pair, boxes, loops)


def build_script_T(n: int, k0: int) -> PlanarDiagram:
    """The tight leftover element: center box of width 2k₀ framed by four
    width-n projectors, everything between collapsed to identity wiring.
    """
    if not 0 <= k0 <= n:
        raise DiagramError(f"k0 = {k0} not admissible at width {n}")
    pair, boxes = fused_skeleton(n, (k0, k0))
    loops = 0
    if k0:
        loops = splice_box(pair, boxes, ("cen", 1),
                           Matching.identity(2 * k0).mate)
    return wiring_diagram(pair, boxes, loops)
