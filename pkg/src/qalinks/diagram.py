"""Planar link diagrams as combinatorial maps.

A diagram is a list of crossings, each with four half-edge slots in
counterclockwise cyclic order, plus an involution pairing half-edges into
arcs.  Half-edge ``h`` lives at crossing ``h // 4``, slot ``h % 4``.  The
strand through slots 0 and 2 passes under; slots 1 and 3 carry the over
strand.  Changing a crossing is therefore a rotation of its slot labels
by one, which leaves the underlying planar map untouched.

An orientation is stored as the set of half-edges along which the strand
leaves its crossing; one choice of direction per link component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional


class MalformedDiagram(ValueError):
    """The pairing or slot data does not describe a planar link diagram."""


class UnorientedDiagram(ValueError):
    """Operation requires an orientation but none is attached."""


def _crossing(h: int) -> int:
    return h // 4


def _slot(h: int) -> int:
    return h % 4


WHITE = 0
BLACK = 1


def chi(white_corners: tuple[int, int]) -> int:
    """Goeritz sign of a crossing from which corner pair is white.

    Calibrated together with the signature correction so that the standard
    positive trefoil has signature -2.
    """
    return 1 if white_corners == (1, 3) else -1


@dataclass(frozen=True)
class Coloring:
    faces: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]
    unbounded: int

    def white_faces(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.colors) if c == WHITE)

    def black_faces(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.colors) if c == BLACK)


@dataclass(frozen=True)
class TaitEdge:
    u: int
    v: int
    sign: int
    crossing: int


@dataclass(frozen=True)
class SignedTaitGraph:
    vertices: tuple[int, ...]
    edges: tuple[TaitEdge, ...]


@dataclass(frozen=True)
class Diagram:
    pairing: tuple[int, ...]
    free_loops: int = 0
    orientation: Optional[frozenset[int]] = None

    @property
    def n(self) -> int:
        return len(self.pairing) // 4

    def validate(self) -> None:
        pr = self.pairing
        if len(pr) % 4 != 0:
            raise MalformedDiagram("half-edge count not a multiple of 4")
        for h, p in enumerate(pr):
            if not 0 <= p < len(pr) or pr[p] != h or p == h:
                raise MalformedDiagram(f"pairing is not a fixed-point-free involution at {h}")
        if self.free_loops < 0:
            raise MalformedDiagram("negative free loop count")
        # Euler formula per connected piece: V - E + F = 2
        for piece in self.pieces():
            v = len(piece)
            e = 2 * v
            f = sum(1 for fc in self.faces()
                    if fc and _crossing(fc[0]) in piece)
            if v - e + f != 2:
                raise MalformedDiagram("map is not planar (Euler formula fails)")
        if self.orientation is not None:
            out = self.orientation
            for a, b in self.strand_orbit_pairs():
                if not (a <= out and not (b & out)) and not (b <= out and not (a & out)):
                    raise MalformedDiagram("orientation is not a consistent direction choice")

    # ------------------------------------------------------------------ faces

    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Boundary orbits h -> rotate(pair(h)); one orbit per face.

        Each free loop contributes one extra (empty) face; a diagram that is
        nothing but free loops gets one more for the unbounded region.
        """
        pr = self.pairing
        seen = [False] * len(pr)
        out = []
        for h0 in range(len(pr)):
            if seen[h0]:
                continue
            orbit = []
            h = h0
            while not seen[h]:
                seen[h] = True
                orbit.append(h)
                p = pr[h]
                h = 4 * _crossing(p) + (_slot(p) + 1) % 4
            out.append(tuple(orbit))
        extra = self.free_loops + (1 if self.n == 0 and self.free_loops else 0)
        out.extend(() for _ in range(extra))
        return tuple(out)

    def face_index(self) -> dict[int, int]:
        """half-edge -> face id (position in faces())."""
        idx = {}
        for i, f in enumerate(self.faces()):
            for h in f:
                idx[h] = i
        return idx

    def corner_face(self, face_idx: dict[int, int], c: int, k: int) -> int:
        """Face holding the corner between slots k and k+1 of crossing c."""
        return face_idx[4 * c + (k + 1) % 4]

    # --------------------------------------------------------- checkerboard

    def checkerboard(self) -> "Coloring":
        """Proper 2-coloring of the faces with the unbounded face white.

        The unbounded face of a bare combinatorial map is a choice; we take
        the face with the most half-edges (ties by smallest half-edge id).
        Requires a connected diagram.
        """
        if self.n == 0:
            if self.free_loops != 1:
                raise MalformedDiagram("checkerboard needs a connected diagram")
            return Coloring(faces=((), ()), colors=(WHITE, BLACK), unbounded=0)
        if not self.is_connected():
            raise MalformedDiagram("checkerboard needs a connected diagram")
        faces = self.faces()
        idx = self.face_index()
        unbounded = max(range(len(faces)),
                        key=lambda i: (len(faces[i]), -min(faces[i])))
        colors = [None] * len(faces)
        colors[unbounded] = WHITE
        stack = [unbounded]
        while stack:
            f = stack.pop()
            for h in faces[f]:
                g = idx[self.pairing[h]]
                want = BLACK if colors[f] == WHITE else WHITE
                if colors[g] is None:
                    colors[g] = want
                    stack.append(g)
                elif colors[g] != want:
                    raise MalformedDiagram("faces are not checkerboard-colorable")
        return Coloring(faces=faces, colors=tuple(colors), unbounded=unbounded)

    def white_corners(self, col: "Coloring", c: int) -> tuple[int, int]:
        """The two corner indices of crossing c lying in white faces."""
        idx = {h: i for i, f in enumerate(col.faces) for h in f}
        k0 = idx[4 * c + 1]  # face of corner 0
        return (0, 2) if col.colors[k0] == WHITE else (1, 3)

    def black_graph(self, col: "Coloring") -> "SignedTaitGraph":
        """One signed edge per crossing joining its two black corners."""
        idx = {h: i for i, f in enumerate(col.faces) for h in f}
        vertices = tuple(i for i, cl in enumerate(col.colors) if cl == BLACK)
        edges = []
        for c in range(self.n):
            white = self.white_corners(col, c)
            bk = 1 if white == (0, 2) else 0
            u = idx[4 * c + (bk + 1) % 4]
            v = idx[4 * c + (bk + 3) % 4]
            edges.append(TaitEdge(u, v, chi(white), c))
        return SignedTaitGraph(vertices, tuple(edges))

    # ----------------------------------------------------------- connectivity

    def pieces(self) -> list[set[int]]:
        """Connected components of the 4-valent graph (crossing sets)."""
        pr = self.pairing
        seen: set[int] = set()
        out = []
        for c0 in range(self.n):
            if c0 in seen:
                continue
            comp = {c0}
            stack = [c0]
            while stack:
                c = stack.pop()
                for s in range(4):
                    c2 = _crossing(pr[4 * c + s])
                    if c2 not in comp:
                        comp.add(c2)
                        stack.append(c2)
            seen |= comp
            out.append(comp)
        return out

    def is_split(self) -> bool:
        pieces = len(self.pieces()) + self.free_loops
        return pieces > 1

    def is_connected(self) -> bool:
        return not self.is_split() and (self.n > 0 or self.free_loops == 1)

    # -------------------------------------------------------------- strands

    def _strand_next(self, h: int) -> int:
        """Follow the strand: cross the arc, pass straight through."""
        p = self.pairing[h]
        return 4 * _crossing(p) + (_slot(p) + 2) % 4

    def strand_orbit_pairs(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        """Per component, the two direction orbits (sets of departure half-edges)."""
        seen: set[int] = set()
        out = []
        for h0 in range(4 * self.n):
            if h0 in seen:
                continue
            fwd = []
            h = h0
            while h not in seen:
                seen.add(h)
                fwd.append(h)
                h = self._strand_next(h)
            rev = frozenset(self.pairing[h] for h in fwd)
            seen |= rev
            out.append((frozenset(fwd), rev))
        return out

    @property
    def components(self) -> int:
        return len(self.strand_orbit_pairs()) + self.free_loops

    def orientations(self) -> list["Diagram"]:
        """All 2^(m-1) orientation classes (first component's direction fixed)."""
        pairs = self.strand_orbit_pairs()
        if not pairs:
            return [Diagram(self.pairing, self.free_loops, frozenset())]
        outs = [[pairs[0][0]]] + [[a, b] for a, b in pairs[1:]]
        result = []
        choice = [0] * len(outs)
        total = 1
        for o in outs[1:]:
            total *= 2
        for mask in range(total):
            sel = frozenset()
            m = mask
            sel = sel | outs[0][0]
            for i in range(1, len(outs)):
                sel = sel | outs[i][m % 2]
                m //= 2
            result.append(Diagram(self.pairing, self.free_loops, sel))
        return result

    def oriented(self) -> "Diagram":
        """Attach the default orientation (first direction of each component)."""
        sel = frozenset().union(*(a for a, _ in self.strand_orbit_pairs())) \
            if self.n else frozenset()
        return Diagram(self.pairing, self.free_loops, sel)

    def require_orientation(self) -> frozenset[int]:
        if self.orientation is None:
            raise UnorientedDiagram("diagram has no orientation attached")
        return self.orientation

    def crossing_sign(self, c: int) -> int:
        """+1 or -1 under the right-hand convention (writhe of the standard
        positive trefoil is +3)."""
        out = self.require_orientation()
        u_out = 0 if 4 * c + 0 in out else 2
        o_out = 1 if 4 * c + 1 in out else 3
        return 1 if (o_out - u_out) % 4 == 1 else -1

    def writhe(self) -> int:
        return sum(self.crossing_sign(c) for c in range(self.n))

    # ------------------------------------------------------- local surgeries

    def _surgery(self, removed: set[int], joins: list[tuple[int, int]]) -> "Diagram":
        """Delete crossings in ``removed``; ``joins`` connect their slots
        pairwise internally.  Closed internal cycles become free loops."""
        join_of = {}
        for a, b in joins:
            join_of[a] = b
            join_of[b] = a
        removed_h = {4 * c + s for c in removed for s in range(4)}
        assert set(join_of) == removed_h
        old_n = self.n
        keep = [c for c in range(old_n) if c not in removed]
        relabel = {c: i for i, c in enumerate(keep)}

        def chase(h: int) -> Optional[int]:
            # h is a removed half-edge reached from outside; follow joins/arcs
            seen = set()
            while h in removed_h:
                if h in seen:
                    return None  # closed internal cycle
                seen.add(h)
                h = self.pairing[join_of[h]]
            return h

        new_pairing = [0] * (4 * len(keep))
        visited_removed: set[int] = set()
        for c in keep:
            for s in range(4):
                h = 4 * c + s
                p = self.pairing[h]
                trail = []
                while p in removed_h:
                    trail.append(p)
                    p = self.pairing[join_of[p]]
                visited_removed.update(trail)
                visited_removed.update(join_of[t] for t in trail)
                new_h = 4 * relabel[c] + s
                new_p = 4 * relabel[_crossing(p)] + _slot(p)
                new_pairing[new_h] = new_p
        loops = 0
        left = removed_h - visited_removed
        while left:
            h = next(iter(left))
            cyc = set()
            while h not in cyc:
                cyc.add(h)
                h2 = join_of[h]
                cyc.add(h2)
                h = self.pairing[h2]
            left -= cyc
            loops += 1
        return Diagram(tuple(new_pairing), self.free_loops + loops, None)

    def resolve(self, c: int, kind: str) -> "Diagram":
        """Smooth crossing c.  Kind "zero" joins slots (1,2) and (3,0);
        kind "infinity" joins (0,1) and (2,3)."""
        if not 0 <= c < self.n:
            raise MalformedDiagram(f"no crossing {c}")
        if kind == "zero":
            joins = [(4 * c + 1, 4 * c + 2), (4 * c + 3, 4 * c + 0)]
        elif kind == "infinity":
            joins = [(4 * c + 0, 4 * c + 1), (4 * c + 2, 4 * c + 3)]
        else:
            raise ValueError(f"unknown resolution kind {kind!r}")
        return self._surgery({c}, joins)

    def oriented_resolution_kind(self, c: int) -> str:
        """The smoothing at c compatible with the attached orientation."""
        out = self.require_orientation()
        u_out = 0 if 4 * c in out else 2
        # orientation smoothing joins each outgoing slot with the incoming
        # slot of the other strand adjacent to it
        o_in = 3 if 4 * c + 1 in out else 1
        pair = {u_out, o_in}
        return "zero" if pair in ({1, 2}, {0, 3}) else "infinity"

    def resolve_oriented(self, c: int) -> tuple["Diagram", "Diagram"]:
        """(L0, Linf): L0 is the orientation-respecting smoothing carrying
        the induced orientation; Linf is returned unoriented."""
        kind0 = self.oriented_resolution_kind(c)
        kind_inf = "infinity" if kind0 == "zero" else "zero"
        d0 = self.resolve(c, kind0)
        dinf = self.resolve(c, kind_inf)
        d0o = d0._inherit_orientation(self, {c})
        return d0o, dinf

    def _inherit_orientation(self, parent: "Diagram", removed: set[int]) -> "Diagram":
        """Reorient self so surviving arcs keep their direction from parent."""
        pout = parent.require_orientation()
        keep = [c for c in range(parent.n) if c not in removed]
        relabel = {c: i for i, c in enumerate(keep)}
        hint = set()
        for c in keep:
            for s in range(4):
                if 4 * c + s in pout:
                    hint.add(4 * relabel[c] + s)
        sel: set[int] = set()
        for a, b in self.strand_orbit_pairs():
            if a & hint or not (b & hint):
                sel |= a
            else:
                sel |= b
        return Diagram(self.pairing, self.free_loops, frozenset(sel))

    def crossing_change(self, c: int) -> "Diagram":
        """Flip over/under at c (rotate its slot labels by one)."""
        if not 0 <= c < self.n:
            raise MalformedDiagram(f"no crossing {c}")

        def remap(h: int) -> int:
            return 4 * c + (_slot(h) + 1) % 4 if _crossing(h) == c else h

        inverse = {remap(4 * c + s): 4 * c + s for s in range(4)}
        new_pairing = [0] * len(self.pairing)
        for h in range(len(self.pairing)):
            src = inverse.get(h, h)
            new_pairing[h] = remap(self.pairing[src])
        orient = None
        if self.orientation is not None:
            orient = frozenset(remap(h) for h in self.orientation)
        return Diagram(tuple(new_pairing), self.free_loops, orient)

    def mirror(self) -> "Diagram":
        d = self
        for c in range(self.n):
            d = d.crossing_change(c)
        return d

    # -------------------------------------------------------------- Seifert

    def seifert_circles(self) -> list[tuple[int, ...]]:
        """Orbits of the orientation-respecting smoothing (departure half-edges)."""
        out = self.require_orientation()
        seen: set[int] = set()
        circles = []
        for h0 in sorted(out):
            if h0 in seen:
                continue
            circ = []
            h = h0
            while h not in seen:
                seen.add(h)
                circ.append(h)
                p = self.pairing[h]  # arrival half-edge
                c, s = _crossing(p), _slot(p)
                if s % 2 == 0:  # arrived on the under strand: leave on over
                    h = 4 * c + (1 if 4 * c + 1 in out else 3)
                else:
                    h = 4 * c + (0 if 4 * c in out else 2)
            circles.append(tuple(circ))
        return circles

    def seifert_state(self) -> tuple[int, int]:
        """(number of Seifert circles, writhe)."""
        s = len(self.seifert_circles()) + self.free_loops
        return s, self.writhe()

    def seifert_genus_diagram(self):
        """Genus of the Seifert-algorithm surface: (c - s + 2 - m)/2."""
        from .cfrac import Rational
        s, _ = self.seifert_state()
        return Rational(self.n - s + 2 - self.components, 2)

    def is_special(self) -> bool:
        """Orientation smoothing merges same-colored corners at every crossing."""
        if self.n == 0:
            return True
        col = self.checkerboard()
        merged = set()
        for c in range(self.n):
            kind = self.oriented_resolution_kind(c)
            # kind "infinity" joins slots (0,1),(2,3): merges corners 0 and 2
            merged_corner = 0 if kind == "infinity" else 1
            white = self.white_corners(col, c)
            merged.add("white" if merged_corner in white else "black")
        return len(merged) == 1

    # -------------------------------------------------------------- simplify

    def _find_r1(self) -> Optional[tuple[int, int]]:
        for c in range(self.n):
            for s in range(4):
                if self.pairing[4 * c + s] == 4 * c + (s + 1) % 4:
                    return c, s
        return None

    def _find_r2(self) -> Optional[tuple[int, int, int, int]]:
        pr = self.pairing
        for f in self.faces():
            if len(f) != 2:
                continue
            h1, h2 = f
            c, j1 = _crossing(h1), _slot(h1)
            dd, k1 = _crossing(h2), _slot(h2)
            if c == dd:
                continue
            j = (j1 - 1) % 4  # arcs of the bigon leave slots j+1 (at c), k+1 (at dd)
            k = (k1 - 1) % 4
            # strand entering c on slot j+1 exits the bigon arc at dd slot k
            if (j + 1) % 2 == k % 2:  # same strand over (or under) at both
                return c, j, dd, k
        return None

    def simplify(self) -> "Diagram":
        """Remove R1 kinks and cancelling R2 pairs until none remain."""
        d = self
        while True:
            r1 = d._find_r1()
            if r1 is not None:
                c, a = r1
                joins = [(4 * c + (a + 1) % 4, 4 * c + (a + 2) % 4),
                         (4 * c + (a + 3) % 4, 4 * c + a)]
                d = d._surgery({c}, joins)
                continue
            r2 = d._find_r2()
            if r2 is not None:
                c, j, dd, k = r2
                joins = [(4 * c + (j + 1) % 4, 4 * c + (j + 3) % 4),
                         (4 * c + j, 4 * c + (j + 2) % 4),
                         (4 * dd + k, 4 * dd + (k + 2) % 4),
                         (4 * dd + (k + 1) % 4, 4 * dd + (k + 3) % 4)]
                d = d._surgery({c, dd}, joins)
                continue
            return d

    # ------------------------------------------------------------- predicates

    def is_alternating(self) -> bool:
        """Over/under alternates along every strand."""
        for fwd, _ in self.strand_orbit_pairs():
            for h in fwd:
                p = self.pairing[h]
                if _slot(h) % 2 == _slot(p) % 2:
                    return False
        return True

    def is_positive(self) -> bool:
        return self.n > 0 and all(self.crossing_sign(c) == 1 for c in range(self.n))

    def is_negative(self) -> bool:
        return self.n > 0 and all(self.crossing_sign(c) == -1 for c in range(self.n))

    # --------------------------------------------------------- canonical key

    def canonical_key(self) -> bytes:
        """Deterministic key, equal for relabelings of the same map (including
        a relabeling reflection of the plane)."""
        if self.n == 0:
            return f"loops:{self.free_loops}".encode()
        best = None
        for refl in (False, True):
            pr = self.pairing if not refl else self._reflected_pairing()
            for h0 in range(4 * self.n):
                enc = _traversal_encoding(pr, h0)
                if best is None or enc < best:
                    best = enc
        return (f"loops:{self.free_loops};" + best).encode()

    def _reflected_pairing(self) -> tuple[int, ...]:
        def remap(h: int) -> int:
            return 4 * _crossing(h) + (-_slot(h)) % 4

        new = [0] * len(self.pairing)
        for h in range(len(self.pairing)):
            new[remap(h)] = remap(self.pairing[h])
        return tuple(new)


def _traversal_encoding(pairing: tuple[int, ...], h0: int) -> str:
    """BFS relabeling starting from h0; crossings anchored so the discovery
    slot maps to 0 (under) or 1 (over), preserving under/over strands."""
    n = len(pairing) // 4
    order: dict[int, int] = {}
    offset: dict[int, int] = {}

    def norm(h: int) -> tuple[int, int]:
        c = _crossing(h)
        return order[c], (_slot(h) - offset[c]) % 4

    c0 = _crossing(h0)
    order[c0] = 0
    s0 = _slot(h0)
    offset[c0] = s0 if s0 % 2 == 0 else s0 - 1
    queue = [c0]
    qi = 0
    edges = []
    while qi < len(queue):
        c = queue[qi]
        qi += 1
        for k in range(4):
            h = 4 * c + (offset[c] + k) % 4
            p = pairing[h]
            c2 = _crossing(p)
            if c2 not in order:
                order[c2] = len(order)
                s2 = _slot(p)
                offset[c2] = s2 if s2 % 2 == 0 else s2 - 1
                queue.append(c2)
    if len(order) < n:
        # disconnected: encode remaining pieces deterministically afterwards
        rest = sorted(c for c in range(n) if c not in order)
        for c in rest:
            order[c] = len(order)
            offset[c] = 0
    for c in sorted(order, key=lambda c: order[c]):
        for k in range(4):
            h = 4 * c + (offset[c] + k) % 4
            edges.append(norm(pairing[h]))
    return ",".join(f"{a}.{b}" for a, b in edges)


# ---------------------------------------------------------------- PD codes

def from_pd(tuples: Iterable[tuple[int, int, int, int]]) -> Diagram:
    """Build a diagram from PD-style 4-tuples of arc labels, listed in
    counterclockwise order with an over-strand half-edge first."""
    tuples = [tuple(t) for t in tuples]
    seen: dict[int, list[int]] = {}
    for c, t in enumerate(tuples):
        if len(t) != 4:
            raise MalformedDiagram(f"crossing {c}: expected 4 arc labels")
        for pos, label in enumerate(t):
            slot = (pos + 1) % 4  # position 0 (over strand) -> slot 1
            seen.setdefault(label, []).append(4 * c + slot)
    pairing = [0] * (4 * len(tuples))
    for label, hs in seen.items():
        if len(hs) != 2:
            raise MalformedDiagram(f"arc label {label} appears {len(hs)} times")
        a, b = hs
        pairing[a] = b
        pairing[b] = a
    d = Diagram(tuple(pairing))
    d.validate()
    return d


UNKNOT = Diagram((), free_loops=1)
