"""Exact link invariants: determinant, signature, genus certificates.

The determinant is computed two independent ways (Goeritz matrix and a
signed spanning-tree count on the Tait graph) and cross-checked against a
Seifert-matrix oracle; the signature comes from the Goeritz form with the
Gordon-Litherland correction.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cfrac import Rational
from .diagram import Diagram, SignedTaitGraph, chi


class SplitLink(ValueError):
    """Operation needs a non-split diagram."""


# ------------------------------------------------------- exact linear algebra

def det_exact(rows: list[list[int]]) -> int:
    """Determinant of an integer matrix, exact."""
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for i in range(n):
        pivot = next((r for r in range(i, n) if a[r][i] != 0), None)
        if pivot is None:
            return 0
        if pivot != i:
            a[i], a[pivot] = a[pivot], a[i]
            det = -det
        det *= a[i][i]
        inv = 1 / a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] * inv
            if f:
                for cc in range(i, n):
                    a[r][cc] -= f * a[i][cc]
    assert det.denominator == 1
    return int(det)


def signature_exact(rows: list[list[int]]) -> int:
    """Signature of a symmetric integer matrix via congruence diagonalization."""
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    sig = 0
    for i in range(n):
        if a[i][i] == 0:
            j = next((r for r in range(i + 1, n) if a[r][r] != 0), None)
            if j is not None:
                for k in range(n):
                    a[i][k], a[j][k] = a[j][k], a[i][k]
                for k in range(n):
                    a[k][i], a[k][j] = a[k][j], a[k][i]
            else:
                j = next((c for c in range(i + 1, n) if a[i][c] != 0), None)
                if j is None:
                    continue  # zero row: null direction
                s = 1 if 2 * a[i][j] + a[j][j] != 0 else -1
                for k in range(n):
                    a[i][k] += s * a[j][k]
                for k in range(n):
                    a[k][i] += s * a[k][j]
        d = a[i][i]
        sig += 1 if d > 0 else -1
        for r in range(i + 1, n):
            f = a[r][i] / d
            if f:
                for k in range(n):
                    a[r][k] -= f * a[i][k]
                for k in range(n):
                    a[k][r] -= f * a[k][i]
    return sig


# ----------------------------------------------------------------- Goeritz

def goeritz_matrix(d: Diagram) -> list[list[int]]:
    """Quadratic form on white regions X1..Xn with the unbounded X0 deleted."""
    col = d.checkerboard()
    whites = col.white_faces()
    pos = {f: i for i, f in enumerate(whites)}
    idx = {h: i for i, f in enumerate(col.faces) for h in f}
    m = len(whites)
    g = [[0] * m for _ in range(m)]
    for c in range(d.n):
        wc = d.white_corners(col, c)
        f1 = idx[4 * c + (wc[0] + 1) % 4]
        f2 = idx[4 * c + (wc[1] + 1) % 4]
        if f1 == f2:
            continue
        x = chi(wc)
        i, j = pos[f1], pos[f2]
        g[i][j] -= x
        g[j][i] -= x
    for i in range(m):
        g[i][i] = -sum(g[i][j] for j in range(m) if j != i)
    x0 = pos[col.unbounded]
    return [[g[i][j] for j in range(m) if j != x0]
            for i in range(m) if i != x0]


def det_goeritz(d: Diagram) -> int:
    """|det| of the Goeritz matrix; requires a connected diagram."""
    if not d.is_connected():
        raise SplitLink("determinant routines need a connected diagram")
    return abs(det_exact(goeritz_matrix(d)))


# ------------------------------------------------------------ spanning trees

def _tree_sum(vertices: frozenset, edges: dict) -> int:
    """Sum over spanning trees of the product of edge weights.

    ``edges`` maps frozenset({u, v}) to an integer weight (parallel edges
    pre-merged, loops dropped).
    """
    if len(vertices) == 1:
        return 1
    if not edges:
        return 0
    ends, w = next(iter(edges.items()))
    u, v = tuple(ends)
    rest = {e: x for e, x in edges.items() if e != ends}
    total = _tree_sum(vertices, rest)  # delete
    if w:
        merged = {}
        for e, x in rest.items():
            e2 = frozenset(u if node == v else node for node in e)
            if len(e2) == 1:
                continue  # loop created by contraction
            merged[e2] = merged.get(e2, 0) + x
        merged = {e: x for e, x in merged.items() if x}
        total += w * _tree_sum(vertices - {v}, merged)
    return total


def det_spanning_trees(b: SignedTaitGraph) -> int:
    """|sum over spanning trees of the product of edge signs|."""
    vertices = frozenset(b.vertices)
    if not vertices:
        raise SplitLink("empty Tait graph")
    edges: dict = {}
    for e in b.edges:
        if e.u == e.v:
            continue
        key = frozenset((e.u, e.v))
        edges[key] = edges.get(key, 0) + e.sign
    edges = {e: x for e, x in edges.items() if x}
    reach = {next(iter(vertices))}
    frontier = list(reach)
    adj: dict = {}
    for e in edges:
        a, bb = tuple(e)
        adj.setdefault(a, []).append(bb)
        adj.setdefault(bb, []).append(a)
    while frontier:
        x = frontier.pop()
        for y in adj.get(x, ()):
            if y not in reach:
                reach.add(y)
                frontier.append(y)
    if reach != vertices:
        return 0
    return abs(_tree_sum(vertices, edges))


def determinant(d: Diagram) -> int:
    """det(L); 0 for split diagrams."""
    if d.is_split():
        return 0
    return det_goeritz(d)


# ---------------------------------------------------------------- signature

# Gordon-Litherland correction: a crossing is type II when its orientation
# smoothing merges the two white corners; mu is the signed count of type II
# crossings.  Both choices below are fixed by the calibration suite
# (sigma(positive trefoil) = -2, sigma(positive Hopf) = -1, sigma(fig8) = 0).
_TYPE_II_MERGES_WHITE = True
_MU_SIGN = 1


def signature(d: Diagram) -> int:
    """sig(Goeritz) minus the Gordon-Litherland correction."""
    if not d.is_connected():
        raise SplitLink("signature needs a connected diagram")
    d.require_orientation()
    if d.n == 0:
        return 0
    col = d.checkerboard()
    sig = signature_exact(goeritz_matrix(d))
    mu = 0
    for c in range(d.n):
        kind = d.oriented_resolution_kind(c)
        merged_corner = 0 if kind == "infinity" else 1
        merges_white = merged_corner in d.white_corners(col, c)
        if merges_white == _TYPE_II_MERGES_WHITE:
            mu += d.crossing_sign(c)
    return sig - _MU_SIGN * mu


# ------------------------------------------------------------------- genus

@dataclass(frozen=True)
class GenusCertificate:
    genus: int
    method: str


def find_positive_orientation(d: Diagram) -> Optional[Diagram]:
    """An orientation making every crossing positive, or None."""
    if d.n == 0:
        return d.oriented()
    for o in d.orientations():
        if o.is_positive():
            return o
    return None


def find_negative_orientation(d: Diagram) -> Optional[Diagram]:
    if d.n == 0:
        return d.oriented()
    for o in d.orientations():
        if o.is_negative():
            return o
    return None


def genus_certified(d: Diagram) -> Optional[GenusCertificate]:
    """Certified link genus when a minimality theorem applies, else None.

    Reduced alternating and positive (or negative) diagrams realize the
    genus of their Seifert-algorithm surface.
    """
    s = d.simplify()
    if s.is_split():
        return None
    if s.is_alternating():
        g = s.oriented().seifert_genus_diagram()
        return GenusCertificate(g.num, "alternating-reduced")
    o = find_positive_orientation(s) or find_negative_orientation(s)
    if o is not None:
        g = o.seifert_genus_diagram()
        return GenusCertificate(g.num, "positive-diagram")
    return None


def is_definite(g: int, sigma: int, m: int) -> bool:
    """g(L) = (|sigma(L)| - (m - 1)) / 2 exactly."""
    return 2 * g == abs(sigma) - (m - 1)


def lps_check(d: Diagram, g: int) -> str:
    """Width bound w(D) <= s(D) + 2 g(L) + m - 2 for homogeneous diagrams.

    Returns "equality" (iff the diagram is positive) or "strict"; raises
    if the bound fails.
    """
    s, w = d.seifert_state()
    bound = s + 2 * g + d.components - 2
    if abs(w) > bound:
        raise AssertionError(f"width bound violated: |{w}| > {bound}")
    return "equality" if w == bound else "strict"


def homogeneous_genus_lower_bound(d: Diagram) -> int:
    """g(D) - c^-(D), a lower bound for g(L) on homogeneous diagrams."""
    g = d.seifert_genus_diagram()
    c_neg = sum(1 for c in range(d.n) if d.crossing_sign(c) == -1)
    return g.num - c_neg


# --------------------------------------------------------- identity checks

@dataclass(frozen=True)
class ConwayRelationReport:
    proviso_ok: bool
    det_identity: Optional[bool] = None
    sigma_relation: Optional[bool] = None
    e_relation: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return bool(self.proviso_ok and self.det_identity
                    and self.sigma_relation and self.e_relation)


def _negative_count(d: Diagram) -> int:
    return sum(1 for c in range(d.n) if d.crossing_sign(c) == -1)


def mo_relations_check(d: Diagram, p: int) -> ConwayRelationReport:
    """Signature/determinant relations for the Conway triple at crossing p."""
    d0, dinf = d.resolve_oriented(p)
    det_l = determinant(d)
    det0 = determinant(d0)
    detinf = determinant(dinf)
    if det0 == 0 or detinf == 0:
        return ConwayRelationReport(proviso_ok=False)
    det_id = det_l == det0 + detinf
    sgn = d.crossing_sign(p)
    if sgn == 1:
        sigma_rel = signature(d) == signature(d0) - 1
    else:
        sigma_rel = signature(d) == signature(d0) + 1
    e_rel = False
    for o in dinf.orientations():
        e = _negative_count(o) - _negative_count(d0)
        if signature(d) - signature(o) == -e:
            e_rel = True
            break
    return ConwayRelationReport(True, det_id, sigma_rel, e_rel)


def st_trichotomy_check(gp: int, gm: int, g0: int, m: int, m0: int) -> int:
    """Which of the three genus patterns holds for an L+/L-/L0 triple."""
    a = 2 * gp + m - 1
    b = 2 * gm + m - 1
    c = 2 * g0 + m0  # = 1 + 2 g0 + m0 - 1
    matches = []
    if a == b and a >= c:
        matches.append(1)
    if a == c and c > b:
        matches.append(2)
    if b == c and c > a:
        matches.append(3)
    if len(matches) != 1:
        raise AssertionError(
            f"trichotomy violated for {(gp, gm, g0, m, m0)}: {matches}")
    return matches[0]
