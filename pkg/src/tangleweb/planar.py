"""Planar diagrams as rotation systems on the disk.

A diagram has boundary points 1..n on the top line and 1'..m' on the bottom,
trivalent internal vertices each carrying a cyclic (counterclockwise) triple
of half-edges, an edge pairing on half-edges, and a counter of free circles.
The circle order of boundary points is 1,...,n,m',...,1'.

Crossings are not representable here; words lose their crossings (via the
derived switch rules) before arriving.
"""

from __future__ import annotations

from .tangle import Generator, TangleWord


class PlanarError(ValueError):
    pass


TOP = "t"
BOT = "b"
VERT = "v"


class PlanarDiagram:
    """Mutable while being built or rewritten; treated as immutable once it
    participates in a LinComb (hash and equality go through the canonical
    encoding, which is cached)."""

    __slots__ = ("n_in", "n_out", "rot", "pairing", "top", "bot", "loops",
                 "loc", "_next_h", "_next_v", "_enc")

    def __init__(self, n_in, n_out):
        self.n_in = n_in
        self.n_out = n_out
        self.rot = {}        # vertex id -> (h, h, h) counterclockwise
        self.pairing = {}    # half-edge -> half-edge
        self.top = [None] * n_in
        self.bot = [None] * n_out
        self.loops = 0
        self.loc = {}        # half-edge -> (VERT, vid, slot) | (TOP, i) | (BOT, j)
        self._next_h = 0
        self._next_v = 0
        self._enc = None

    # -------------------------------------------------- construction

    def new_halfedge(self):
        h = self._next_h
        self._next_h += 1
        return h

    def add_vertex(self, triple):
        vid = self._next_v
        self._next_v += 1
        self.rot[vid] = tuple(triple)
        for slot, h in enumerate(triple):
            self.loc[h] = (VERT, vid, slot)
        self._enc = None
        return vid

    def drop_vertex(self, vid):
        for h in self.rot[vid]:
            self.loc.pop(h, None)
            self.pairing.pop(h, None)
        del self.rot[vid]
        self._enc = None

    def set_top(self, i, h):
        self.top[i] = h
        self.loc[h] = (TOP, i)

    def set_bot(self, j, h):
        self.bot[j] = h
        self.loc[h] = (BOT, j)

    def pair(self, h1, h2):
        self.pairing[h1] = h2
        self.pairing[h2] = h1
        self._enc = None

    def copy(self):
        d = PlanarDiagram(self.n_in, self.n_out)
        d.rot = dict(self.rot)
        d.pairing = dict(self.pairing)
        d.top = list(self.top)
        d.bot = list(self.bot)
        d.loops = self.loops
        d.loc = dict(self.loc)
        d._next_h = self._next_h
        d._next_v = self._next_v
        return d

    # -------------------------------------------------- basic queries

    def vertex_count(self):
        return len(self.rot)

    def edge_count(self):
        return len(self.pairing) // 2

    def sigma(self, h):
        """Next half-edge counterclockwise around the vertex of h."""
        kind, vid, slot = self.loc[h]
        triple = self.rot[vid]
        return triple[(slot + 1) % 3]

    def is_boundary_h(self, h):
        return self.loc[h][0] != VERT

    def circle_positions(self):
        """Boundary references in circle order 1..n, m'..1'."""
        refs = [(TOP, i) for i in range(self.n_in)]
        refs += [(BOT, j) for j in range(self.n_out - 1, -1, -1)]
        return refs

    def boundary_halfedge(self, ref):
        kind, idx = ref
        return self.top[idx] if kind == TOP else self.bot[idx]

    def face_next(self, h):
        """Successor along the face walk; None when the walk exits at the boundary."""
        p = self.pairing[h]
        if self.is_boundary_h(p):
            return None
        return self.sigma(p)

    def internal_faces(self):
        """Internal faces as tuples of half-edges (cycles of face_next)."""
        faces = []
        seen = set()
        for h0 in self.pairing:
            if h0 in seen or self.is_boundary_h(h0):
                continue
            walk = [h0]
            cur = h0
            closed = False
            while True:
                cur = self.face_next(cur)
                if cur is None:
                    break
                if cur == h0:
                    closed = True
                    break
                walk.append(cur)
            seen.update(walk)
            if closed:
                faces.append(tuple(walk))
        return faces

    def components(self):
        """Connected components as (frozen vertex set, frozen boundary ref set)."""
        comps = []
        seen_h = set()
        for ref in self.circle_positions():
            h0 = self.boundary_halfedge(ref)
            if h0 in seen_h:
                continue
            comp_v, comp_b = set(), set()
            stack = [h0]
            while stack:
                h = stack.pop()
                if h in seen_h:
                    continue
                seen_h.add(h)
                where = self.loc[h]
                if where[0] == VERT:
                    vid = where[1]
                    if vid not in comp_v:
                        comp_v.add(vid)
                        stack.extend(self.rot[vid])
                else:
                    comp_b.add(where[:2])
                stack.append(self.pairing[h])
            comps.append((frozenset(comp_v), frozenset(comp_b)))
        reached = set()
        for cv, _ in comps:
            reached |= cv
        left = set(self.rot) - reached
        while left:
            comp_v = set()
            stack = [min(left)]
            while stack:
                v = stack.pop()
                if v in comp_v:
                    continue
                comp_v.add(v)
                for h in self.rot[v]:
                    w = self.loc[self.pairing[h]]
                    if w[0] == VERT:
                        stack.append(w[1])
            comps.append((frozenset(comp_v), frozenset()))
            left -= comp_v
        return comps

    # -------------------------------------------------- validity

    def check_valid(self):
        """Structural and planarity invariants; raises PlanarError."""
        for h, p in self.pairing.items():
            if self.pairing.get(p) != h or p == h:
                raise PlanarError("pairing is not a fixed-point-free involution")
            if h not in self.loc:
                raise PlanarError(f"half-edge {h} has no location")
        for i, h in enumerate(self.top):
            if h is None or self.loc.get(h) != (TOP, i):
                raise PlanarError(f"top boundary {i} inconsistent")
        for j, h in enumerate(self.bot):
            if h is None or self.loc.get(h) != (BOT, j):
                raise PlanarError(f"bottom boundary {j} inconsistent")
        for vid, triple in self.rot.items():
            if len(triple) != 3 or len(set(triple)) != 3:
                raise PlanarError(f"vertex {vid} is not trivalent")
            for slot, h in enumerate(triple):
                if self.loc.get(h) != (VERT, vid, slot):
                    raise PlanarError(f"vertex {vid} slot {slot} inconsistent")
                if h not in self.pairing:
                    raise PlanarError(f"vertex {vid} slot {slot} is unpaired")
        self._check_genus()
        return True

    def _check_genus(self):
        """Euler check of the boundary closure: the map must embed in the disk
        with the declared circle order."""
        sigma = {}
        for vid, triple in self.rot.items():
            for slot, h in enumerate(triple):
                sigma[h] = triple[(slot + 1) % 3]
        pairing = dict(self.pairing)
        refs = self.circle_positions()
        k = len(refs)
        hub = []
        nxt = self._next_h
        for ref in refs:
            b = self.boundary_halfedge(ref)
            arc_b, arc_hub = nxt, nxt + 1
            nxt += 2
            pairing[arc_b] = arc_hub
            pairing[arc_hub] = arc_b
            sigma[b] = arc_b
            sigma[arc_b] = b
            hub.append(arc_hub)
        for idx in range(k):
            sigma[hub[idx]] = hub[(idx + 1) % k]

        if not pairing:
            return

        comp = {}
        tag = 0
        for h0 in pairing:
            if h0 in comp:
                continue
            stack = [h0]
            while stack:
                h = stack.pop()
                if h in comp:
                    continue
                comp[h] = tag
                stack.append(pairing[h])
                stack.append(sigma[h])
            tag += 1

        from collections import defaultdict
        verts = defaultdict(int)
        edges = defaultdict(int)
        faces = defaultdict(int)
        for vid, triple in self.rot.items():
            verts[comp[triple[0]]] += 1
        if k:
            hub_tag = comp[hub[0]]
            verts[hub_tag] += 1  # the hub vertex
            for ref in refs:
                verts[comp[self.boundary_halfedge(ref)]] += 1
        for h, p in pairing.items():
            if h < p:
                edges[comp[h]] += 1
        seen = set()
        for h0 in pairing:
            if h0 in seen:
                continue
            cur = h0
            while True:
                seen.add(cur)
                cur = sigma[pairing[cur]]
                if cur == h0:
                    break
            faces[comp[h0]] += 1
        for t in edges:
            euler = verts[t] - edges[t] + faces[t]
            if euler != 2:
                raise PlanarError(f"not a disk embedding (Euler characteristic {euler})")

    # -------------------------------------------------- canonical encoding

    def canonical_encoding(self):
        """Deterministic serialization; equal iff the diagrams are equivalent.

        Components attached to the boundary are walked breadth-first from
        their smallest circle position; closed components minimize over all
        starting half-edges.  Re-entry into a known vertex records the slot
        relative to the first entry, so the stored rotation phase is
        irrelevant.
        """
        if self._enc is not None:
            return self._enc

        def encode_from(h0):
            out = []
            entry_slot = {}
            names = {}
            queue = [h0]
            qi = 0
            while qi < len(queue):
                h = queue[qi]
                qi += 1
                p = self.pairing[h]
                where = self.loc[p]
                if where[0] != VERT:
                    out.append(f"{where[0]}{where[1]}")
                    continue
                vid, slot = where[1], where[2]
                if vid in names:
                    rel = (slot - entry_slot[vid]) % 3
                    out.append(f"V{names[vid]}.{rel}")
                    continue
                names[vid] = len(names)
                entry_slot[vid] = slot
                out.append(f"N{names[vid]}")
                s1 = self.sigma(p)
                queue.append(s1)
                queue.append(self.sigma(s1))
            return ",".join(out), set(names)

        chunks = []
        covered_refs = set()
        covered_verts = set()
        for ref in self.circle_positions():
            if ref in covered_refs:
                continue
            enc, verts = encode_from(self.boundary_halfedge(ref))
            covered_verts |= verts
            chunks.append(f"{ref[0]}{ref[1]}:{enc}")
            covered_refs |= self._refs_of_component(ref)

        closed_chunks = []
        left = set(self.rot) - covered_verts
        while left:
            comp_v = set()
            stack = [min(left)]
            while stack:
                v = stack.pop()
                if v in comp_v:
                    continue
                comp_v.add(v)
                for h in self.rot[v]:
                    w = self.loc[self.pairing[h]]
                    if w[0] == VERT:
                        stack.append(w[1])
            best = None
            for v in comp_v:
                for h in self.rot[v]:
                    enc, _ = encode_from(h)
                    if best is None or enc < best:
                        best = enc
            closed_chunks.append(f"c:{best}")
            left -= comp_v
        chunks.extend(sorted(closed_chunks))
        enc = (f"{self.n_in}>{self.n_out}|o{self.loops}|" + ";".join(chunks)).encode()
        self._enc = enc
        return enc

    def _refs_of_component(self, ref):
        refs = set()
        stack = [self.boundary_halfedge(ref)]
        seen_h = set()
        while stack:
            h = stack.pop()
            if h in seen_h:
                continue
            seen_h.add(h)
            where = self.loc[h]
            if where[0] == VERT:
                stack.extend(self.rot[where[1]])
            else:
                refs.add(where[:2])
            stack.append(self.pairing[h])
        return refs

    def __eq__(self, other):
        return (isinstance(other, PlanarDiagram)
                and self.canonical_encoding() == other.canonical_encoding())

    def __hash__(self):
        return hash(self.canonical_encoding())

    def __repr__(self):
        return (f"PlanarDiagram({self.n_in}->{self.n_out}, V={self.vertex_count()}, "
                f"E={self.edge_count()}, loops={self.loops})")

    def to_json_obj(self):
        hnames = {}

        def name(h):
            if h not in hnames:
                hnames[h] = len(hnames)
            return hnames[h]

        return {
            "boundary_top": self.n_in,
            "boundary_bottom": self.n_out,
            "top": [name(h) for h in self.top],
            "bot": [name(h) for h in self.bot],
            "vertices": [{"rot": [name(h) for h in self.rot[v]]} for v in sorted(self.rot)],
            "edges": sorted(sorted((name(h), name(p))) for h, p in self.pairing.items() if h < p),
            "loops": self.loops,
        }


# ------------------------------------------------------------------ words

def word_to_planar(word: TangleWord) -> PlanarDiagram:
    """Trace a crossing-free word into a planar diagram."""
    if word.has_crossing():
        raise PlanarError("crossings cannot be drawn; eliminate them first")
    d = PlanarDiagram(word.n_in, word.n_out)
    open_ends = []
    for i in range(word.n_in):
        t = d.new_halfedge()
        e = d.new_halfedge()
        d.set_top(i, t)
        d.pair(t, e)
        open_ends.append(e)

    for slice_ in word.slices:
        pos = 0
        new_open = []
        for gen in slice_:
            if gen is Generator.ID:
                new_open.append(open_ends[pos])
                pos += 1
            elif gen is Generator.CAP:
                a, b = open_ends[pos], open_ends[pos + 1]
                pa, pb = d.pairing[a], d.pairing[b]
                del d.pairing[a], d.pairing[b]
                if pa == b:
                    d.loops += 1
                else:
                    d.pair(pa, pb)
                pos += 2
            elif gen is Generator.CUP:
                a = d.new_halfedge()
                b = d.new_halfedge()
                d.pair(a, b)
                new_open.extend([a, b])
            elif gen is Generator.MULT:
                a, b = open_ends[pos], open_ends[pos + 1]
                out0, out1 = d.new_halfedge(), d.new_halfedge()
                d.add_vertex((a, out0, b))   # ccw (in_left, out, in_right)
                d.pair(out0, out1)
                new_open.append(out1)
                pos += 2
            elif gen is Generator.COMULT:
                a = open_ends[pos]
                l0, l1 = d.new_halfedge(), d.new_halfedge()
                r0, r1 = d.new_halfedge(), d.new_halfedge()
                d.add_vertex((a, l0, r0))    # ccw (in, out_left, out_right)
                d.pair(l0, l1)
                d.pair(r0, r1)
                new_open.extend([l1, r1])
                pos += 1
            else:
                raise PlanarError(f"unexpected generator {gen}")
        open_ends = new_open

    for j, e in enumerate(open_ends):
        d.set_bot(j, e)
    d.check_valid()
    return d


def planar_to_word(diag: PlanarDiagram, _selfcheck=True) -> TangleWord:
    """Extract a slice word evaluating to the same morphism.

    Greedy frontier sweep: cap adjacent returning strands, merge adjacent
    strands meeting at a vertex, otherwise expand through a vertex.  The
    result is verified by re-tracing, so a convention slip fails loudly
    instead of silently changing values.
    """
    d = diag
    n, m = d.n_in, d.n_out
    frontier = [d.top[i] for i in range(n)]   # consumed-side half-edges
    slices = []
    for _ in range(d.loops):
        # free circles become literal cup/cap pairs
        slices.append([Generator.CUP] + [Generator.ID] * n)
        slices.append([Generator.CAP] + [Generator.ID] * n)
    pending = set(d.rot)

    def far(h):
        return d.pairing[h]

    def vertex_at(h):
        w = d.loc[h]
        return w[1] if w[0] == VERT else None

    guard = 0
    limit = 20 * (len(d.rot) + d.edge_count() + n + m + 4)
    while True:
        guard += 1
        if guard > limit:
            raise PlanarError("slicing did not terminate; invalid diagram?")
        acted = False

        def above(h):
            w = d.loc[h]
            return w[0] == TOP or (w[0] == VERT and w[1] not in pending)

        # 1. cap adjacent strands that are two sides of one edge bending back up
        for i in range(len(frontier) - 1):
            if (far(frontier[i]) == frontier[i + 1]
                    and above(frontier[i]) and above(frontier[i + 1])):
                slices.append([Generator.ID] * i + [Generator.CAP]
                              + [Generator.ID] * (len(frontier) - i - 2))
                del frontier[i:i + 2]
                acted = True
                break
        if acted:
            continue
        # 2. merge two adjacent strands at a shared vertex (rotation-compatible)
        for i in range(len(frontier) - 1):
            a, b = far(frontier[i]), far(frontier[i + 1])
            va, vb = vertex_at(a), vertex_at(b)
            if va is not None and va == vb and va in pending and d.sigma(d.sigma(a)) == b:
                slices.append([Generator.ID] * i + [Generator.MULT]
                              + [Generator.ID] * (len(frontier) - i - 2))
                pending.discard(va)
                frontier[i:i + 2] = [d.sigma(a)]
                acted = True
                break
        if acted:
            continue
        # 3. expand the leftmost strand ending at a pending vertex; merging is
        #    only an optimization, a comult plus a later cap is always sound
        for i, h in enumerate(frontier):
            v = vertex_at(far(h))
            if v is not None and v in pending:
                a = far(h)
                slices.append([Generator.ID] * i + [Generator.COMULT]
                              + [Generator.ID] * (len(frontier) - i - 1))
                pending.discard(v)
                frontier[i:i + 1] = [d.sigma(a), d.sigma(d.sigma(a))]
                acted = True
                break
        if acted:
            continue
        # 4. done?
        if (not pending and len(frontier) == m
                and all(d.loc[far(h)][0] == BOT for h in frontier)):
            break
        # 5. seed an unreached component with a cup
        if not _seed_component(d, frontier, pending, slices):
            raise PlanarError("slicing is stuck; invalid diagram?")

    order = [d.loc[far(h)] for h in frontier]
    if order != [(BOT, j) for j in range(m)]:
        raise PlanarError(f"bottom strands out of order: {order}")
    word = TangleWord(n, m, slices)
    if _selfcheck:
        redone = word_to_planar(word)
        if redone.canonical_encoding() != diag.canonical_encoding():
            raise PlanarError("slicing round-trip mismatch")
    return word


def _seed_component(d, frontier, pending, slices):
    """Insert a cup opening a component unreached from the top boundary.

    Only fires when the sweep is stuck, i.e. every current strand runs to
    the bottom boundary; insertion keeps bottom indices increasing.
    """
    target = None
    for comp_v, comp_b in d.components():
        if comp_v and not (comp_v <= pending):
            continue
        if any(r[0] == TOP for r in comp_b):
            continue
        if not comp_v and comp_b:
            hs = [d.boundary_halfedge(r) for r in comp_b]
            if any(h in frontier or d.pairing[h] in frontier for h in hs):
                continue
        if not comp_v and not comp_b:
            continue
        target = (comp_v, comp_b)
        break
    if target is None:
        return False
    comp_v, comp_b = target
    if comp_b:
        jmin = min(r[1] for r in comp_b)
        seed_b = d.bot[jmin]
        a, b = d.pairing[seed_b], seed_b
    else:
        v0 = min(comp_v)
        h = d.rot[v0][0]
        a, b = h, d.pairing[h]

    insert_at = len(frontier)
    if comp_b:
        jmin = min(r[1] for r in comp_b)
        for i, h in enumerate(frontier):
            w = d.loc[d.pairing[h]]
            if w[0] == BOT and w[1] > jmin:
                insert_at = i
                break
    slices.append([Generator.ID] * insert_at + [Generator.CUP]
                  + [Generator.ID] * (len(frontier) - insert_at))
    frontier[insert_at:insert_at] = [a, b]
    return True
