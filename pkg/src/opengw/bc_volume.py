"""Signed lattice volumes of boundary-cycle graphs.

A boundary-cycle graph records how boundary circles degenerate under a
gluing: each vertex is one half of a gluing segment, the directed edges
run along the glued ("new") boundary cycles, and wavy pairs identify
the two halves of each segment.  Walking a new cycle and jumping across
the wavy partner at each step traces out the original ("old") cycles.
Loops stand for boundary circles untouched by the gluing; they carry a
(new, old) perimeter pair that must agree.

The volume measures the ways of spreading boundary degree over the
segments so that every cycle, new and old, closes up with its
prescribed perimeter.  Concretely, one real variable per directed edge
is subject to the cycle-sum equalities and a strict sign constraint
(each segment is traversed in the direction of its new cycle), certain
circuit functionals are quantized to integers, and what remains is a
finite union of rational polytopes whose volumes are summed exactly.
The result is weighted by the product of new perimeters and a sign for
each wavy segment joining cycles of opposite orientation.

Polytope volumes are computed twice, by independent exact methods
(slice-and-interpolate, and fan triangulation through dimension
three), and the two answers are required to agree.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

__all__ = ["BCGraph", "bc_volume", "polytope_volume", "sum_tree_volumes"]


def _cycles(succ: Dict[str, str]) -> List[Tuple[str, ...]]:
    """Cycle decomposition of a permutation, each cycle rotated to
    start at its smallest element, cycles sorted by that element."""
    seen = set()
    out = []
    for start in sorted(succ):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        v = succ[start]
        while v != start:
            cyc.append(v)
            seen.add(v)
            v = succ[v]
        i = min(range(len(cyc)), key=lambda j: cyc[j])
        out.append(tuple(cyc[i:] + cyc[:i]))
    return sorted(out)


class BCGraph:
    """Directed boundary cycles glued along wavy segments.

    ``edges`` maps every vertex to its successor along its new cycle (so
    the directed edges form a permutation); ``wavy`` is a perfect
    matching on the vertices with distinct endpoints; ``loops`` maps a
    loop id to its (new, old) perimeter pair.  ``d_new`` assigns each
    new cycle its perimeter through any one (or several consistent)
    of its vertices; ``d_old`` does the same for the old cycles, whose
    successor map sends v to the wavy partner of edges[v].

    All ids are stored as strings.  Call :meth:`validate` to check the
    structure; it populates ``new_faces``/``old_faces`` (vertex cycles)
    and ``new_degrees``/``old_degrees`` (parallel perimeter lists).
    """

    def __init__(self, edges, wavy, d_new, d_old, loops=None):
        self.succ = {str(v): str(w) for v, w in dict(edges).items()}
        self.vertices = sorted(self.succ)
        self.wavy = tuple(sorted(
            tuple(sorted((str(a), str(b)))) for a, b in wavy))
        self.loops = {str(k): (int(p), int(q))
                      for k, (p, q) in dict(loops or {}).items()}
        self._dnew_in = {str(v): int(d) for v, d in dict(d_new).items()}
        self._dold_in = {str(v): int(d) for v, d in dict(d_old).items()}
        self.new_faces: Optional[List[Tuple[str, ...]]] = None
        self.old_faces: Optional[List[Tuple[str, ...]]] = None
        self.new_degrees: Optional[List[int]] = None
        self.old_degrees: Optional[List[int]] = None

    # -- structure -------------------------------------------------

    def partner(self) -> Dict[str, str]:
        out = {}
        for a, b in self.wavy:
            out[a] = b
            out[b] = a
        return out

    @staticmethod
    def _face_id(prefix: str, cyc: Sequence[str]) -> str:
        return prefix + ":" + ",".join(cyc)

    def _pick_degree(self, given: Dict[str, int], cyc: Tuple[str, ...],
                     kind: str) -> int:
        vals = {given[v] for v in cyc if v in given}
        if not vals:
            raise ValueError(
                f"no {kind} perimeter given for the cycle {'/'.join(cyc)}")
        if len(vals) > 1:
            raise ValueError(
                f"conflicting {kind} perimeters {sorted(vals)} "
                f"on the cycle {'/'.join(cyc)}")
        return vals.pop()

    def validate(self) -> None:
        if sorted(self.succ.values()) != self.vertices:
            raise ValueError("directed edges must permute the vertices")
        matched = set()
        for a, b in self.wavy:
            if a == b:
                raise ValueError(f"wavy segment at {a!r} glued to itself")
            for x in (a, b):
                if x not in self.succ:
                    raise ValueError(f"wavy endpoint {x!r} is not a vertex")
                if x in matched:
                    raise ValueError(f"vertex {x!r} lies on two wavy segments")
                matched.add(x)
        if len(matched) != len(self.vertices):
            missing = sorted(set(self.vertices) - matched)
            raise ValueError(f"vertices without a wavy segment: {missing}")

        self.new_faces = _cycles(self.succ)
        part = self.partner()
        self.old_faces = _cycles(
            {v: part[self.succ[v]] for v in self.vertices})
        self.new_degrees = [self._pick_degree(self._dnew_in, c, "new")
                            for c in self.new_faces]
        self.old_degrees = [self._pick_degree(self._dold_in, c, "old")
                            for c in self.old_faces]
        for c, d in zip(self.new_faces, self.new_degrees):
            if d == 0:
                raise ValueError(
                    f"new cycle {'/'.join(c)} has zero perimeter")
        for k, (p, q) in sorted(self.loops.items()):
            if p != q:
                raise ValueError(
                    f"loop {k!r} has mismatched perimeters {p} != {q}")
            if p == 0:
                raise ValueError(f"loop {k!r} has zero perimeter")

        # degree conservation on every connected piece
        root = {v: v for v in self.vertices}

        def find(v):
            while root[v] != v:
                root[v] = root[root[v]]
                v = root[v]
            return v

        for v in self.vertices:
            root[find(v)] = find(self.succ[v])
        for a, b in self.wavy:
            root[find(a)] = find(b)
        balance: Dict[str, int] = {}
        for c, d in zip(self.new_faces, self.new_degrees):
            balance[find(c[0])] = balance.get(find(c[0]), 0) + d
        for c, d in zip(self.old_faces, self.old_degrees):
            balance[find(c[0])] = balance.get(find(c[0]), 0) - d
        bad = sorted(r for r, gap in balance.items() if gap != 0)
        if bad:
            raise ValueError(
                f"new and old perimeters disagree on the piece at {bad[0]!r}")

    # -- serialization ---------------------------------------------

    def to_json_obj(self) -> dict:
        self.validate()
        d_new = {self._face_id("n", c): d
                 for c, d in zip(self.new_faces, self.new_degrees)}
        d_old = {self._face_id("o", c): d
                 for c, d in zip(self.old_faces, self.old_degrees)}
        for k, (p, q) in sorted(self.loops.items()):
            d_new[k] = p
            d_old[k] = q
        return {
            "vertices": list(self.vertices),
            "edges": [[v, self.succ[v]] for v in self.vertices],
            "wavy": [list(p) for p in self.wavy],
            "loops": sorted(self.loops),
            "d_new": d_new,
            "d_old": d_old,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BCGraph":
        edges = {str(v): str(w) for v, w in obj.get("edges", [])}
        wavy = [(str(a), str(b)) for a, b in obj.get("wavy", [])]
        dn = {str(k): int(v) for k, v in obj.get("d_new", {}).items()}
        do = {str(k): int(v) for k, v in obj.get("d_old", {}).items()}
        loops = {}
        for k in obj.get("loops", []):
            k = str(k)
            if k not in dn or k not in do:
                raise ValueError(f"loop {k!r} needs entries in d_new and d_old")
            loops[k] = (dn.pop(k), do.pop(k))
        d_new_v: Dict[str, int] = {}
        for cyc in _cycles(edges):
            key = cls._face_id("n", cyc)
            if key in dn:
                d_new_v[cyc[0]] = dn.pop(key)
        if dn:
            raise ValueError(
                f"d_new keys matching no new cycle: {sorted(dn)}")
        part: Dict[str, str] = {}
        for a, b in wavy:
            part[a] = b
            part[b] = a
        d_old_v: Dict[str, int] = {}
        if all(w in part for w in edges.values()):
            for cyc in _cycles({v: part[edges[v]] for v in edges}):
                key = cls._face_id("o", cyc)
                if key in do:
                    d_old_v[cyc[0]] = do.pop(key)
        if do:
            raise ValueError(
                f"d_old keys matching no old cycle: {sorted(do)}")
        return cls(edges, wavy, d_new_v, d_old_v, loops)


# -- exact linear algebra ------------------------------------------


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _solve_affine(rows, n):
    """Gauss-Jordan over Fraction.  ``rows`` is a list of
    (coefficients, rhs).  Returns (particular, null_basis) with free
    variables set to zero, or None when inconsistent."""
    mat = [[Fraction(x) for x in coeffs] + [Fraction(rhs)]
           for coeffs, rhs in rows]
    piv_of_col: Dict[int, int] = {}
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        piv_of_col[c] = r
        r += 1
    for row in mat[r:]:
        if row[-1] != 0:
            return None
    x0 = [Fraction(0)] * n
    for c, pr in piv_of_col.items():
        x0[c] = mat[pr][-1]
    basis = []
    for f in range(n):
        if f in piv_of_col:
            continue
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for c, pr in piv_of_col.items():
            vec[c] = -mat[pr][f]
        basis.append(vec)
    return x0, basis


def _solve_square(M, rhs, k):
    """Unique solution of a k-by-k Fraction system, or None."""
    mat = [list(M[i]) + [rhs[i]] for i in range(k)]
    for c in range(k):
        pr = next((i for i in range(c, k) if mat[i][c] != 0), None)
        if pr is None:
            return None
        mat[c], mat[pr] = mat[pr], mat[c]
        inv = Fraction(1) / mat[c][c]
        mat[c] = [x * inv for x in mat[c]]
        for i in range(k):
            if i != c and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
    return [mat[i][-1] for i in range(k)]


def _invert(C, k):
    """Inverse of a k-by-k Fraction matrix, or None when singular."""
    mat = [list(C[i]) + [Fraction(int(i == j)) for j in range(k)]
           for i in range(k)]
    for c in range(k):
        pr = next((i for i in range(c, k) if mat[i][c] != 0), None)
        if pr is None:
            return None
        mat[c], mat[pr] = mat[pr], mat[c]
        inv = Fraction(1) / mat[c][c]
        mat[c] = [x * inv for x in mat[c]]
        for i in range(k):
            if i != c and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
    return [row[k:] for row in mat]


# -- exact polytope volume -----------------------------------------


def _feasible_vertices(rows, k):
    """Basic feasible points of {a . x <= b}: every k-subset of
    constraint rows solved as equalities and kept when feasible."""
    out = set()
    for sub in itertools.combinations(range(len(rows)), k):
        sol = _solve_square([rows[i][0] for i in sub],
                            [rows[i][1] for i in sub], k)
        if sol is None:
            continue
        if all(_dot(a, sol) <= b for a, b in rows):
            out.add(tuple(sol))
    return out


def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def _lagrange_integral(ts, vals, lo, hi):
    """Exact integral over [lo, hi] of the polynomial interpolating
    the points (ts[i], vals[i])."""
    coeffs = [Fraction(0)]
    for ti, vi in zip(ts, vals):
        if vi == 0:
            continue
        num = [Fraction(1)]
        den = Fraction(1)
        for tj in ts:
            if tj == ti:
                continue
            num = _pmul(num, [-tj, Fraction(1)])
            den *= ti - tj
        if len(num) > len(coeffs):
            coeffs += [Fraction(0)] * (len(num) - len(coeffs))
        for p, c in enumerate(num):
            coeffs[p] += c * vi / den
    total = Fraction(0)
    for p, c in enumerate(coeffs):
        total += c * (hi ** (p + 1) - lo ** (p + 1)) / (p + 1)
    return total


def _volume_slices(rows, k):
    """Volume by slicing along the first coordinate: between
    consecutive vertex levels the cross-section volume is a polynomial
    of degree < k, pinned by interpolation at rational samples."""
    if k == 0:
        return Fraction(1)
    if k == 1:
        lo = hi = None
        for (a,), b in rows:
            ratio = b / a
            if a > 0:
                hi = ratio if hi is None else min(hi, ratio)
            else:
                lo = ratio if lo is None else max(lo, ratio)
        if lo is None or hi is None:
            raise RuntimeError("volume slice is unbounded")
        return max(Fraction(0), hi - lo)
    levels = sorted({v[0] for v in _feasible_vertices(rows, k)})
    if len(levels) < 2:
        return Fraction(0)
    total = Fraction(0)
    for lo, hi in zip(levels, levels[1:]):
        ts = [lo + (hi - lo) * Fraction(j, k + 1) for j in range(1, k + 1)]
        vals = []
        for t in ts:
            sub = []
            dead = False
            for a, b in rows:
                rest, nb = a[1:], b - a[0] * t
                if any(x != 0 for x in rest):
                    sub.append((rest, nb))
                elif nb < 0:
                    dead = True
                    break
            vals.append(Fraction(0) if dead else _volume_slices(sub, k - 1))
        total += _lagrange_integral(ts, vals, lo, hi)
    return total


def _cross2(p, q):
    return p[0] * q[1] - p[1] * q[0]


def _det3(p, q, r):
    return (p[0] * (q[1] * r[2] - q[2] * r[1])
            - p[1] * (q[0] * r[2] - q[2] * r[0])
            + p[2] * (q[0] * r[1] - q[1] * r[0]))


def _angular(rel, orient):
    """Sort vectors lying in a half plane by angle; ``orient`` gives
    the sign of the oriented area of (p, q) when p precedes q."""
    def cmp(p, q):
        s = orient(p, q)
        if s != 0:
            return -1 if s > 0 else 1
        return -1 if _dot(p, p) < _dot(q, q) else 1
    return sorted(rel, key=functools.cmp_to_key(cmp))


def _volume_triangulate(rows, k):
    """Volume by fan triangulation from the lexicographically smallest
    vertex; implemented through dimension three."""
    if k == 0:
        return Fraction(1)
    verts = sorted(_feasible_vertices(rows, k))
    if k == 1:
        if len(verts) < 2:
            return Fraction(0)
        return verts[-1][0] - verts[0][0]
    if len(verts) < k + 1:
        return Fraction(0)
    v0 = verts[0]
    if k == 2:
        rel = _angular([tuple(x - y for x, y in zip(p, v0))
                        for p in verts[1:]], _cross2)
        area2 = Fraction(0)
        for p, q in zip(rel, rel[1:]):
            area2 += abs(_cross2(p, q))
        return area2 / 2
    if k == 3:
        vol6 = Fraction(0)
        done = set()
        for a, b in rows:
            on = [p for p in verts if _dot(a, p) == b]
            key = frozenset(on)
            if len(on) < 3 or key in done or v0 in key:
                continue
            done.add(key)
            w0 = min(on)
            rel = _angular(
                [tuple(x - y for x, y in zip(p, w0)) for p in on
                 if p != w0],
                lambda p, q, n=a: _det3(p, q, n))
            base = tuple(x - y for x, y in zip(w0, v0))
            for p, q in zip(rel, rel[1:]):
                vol6 += abs(_det3(base,
                                  tuple(b + x for b, x in zip(base, p)),
                                  tuple(b + x for b, x in zip(base, q))))
        return vol6 / 6
    raise NotImplementedError(
        f"triangulation backend stops at dimension 3, got {k}")


def polytope_volume(cons, k):
    """Exact volume of {x : a . x <= b}, cross-checked between the two
    backends whenever the triangulation one is available."""
    rows = []
    for a, b in cons:
        a = tuple(Fraction(x) for x in a)
        b = Fraction(b)
        if all(x == 0 for x in a):
            if b < 0:
                return Fraction(0)
        else:
            rows.append((a, b))
    vol = _volume_slices(rows, k)
    if k <= 3:
        other = _volume_triangulate(rows, k)
        if other != vol:
            raise RuntimeError(
                f"polytope volume backends disagree: {other} != {vol}")
    return vol


# -- the volume of a boundary-cycle graph --------------------------


def _forest_path(adj, start, goal):
    """Steps (variable_vertex_or_None, sign) along the unique forest
    path from start to goal."""
    if start == goal:
        return []
    prev = {start: None}
    queue = [start]
    while queue:
        nxt = []
        for v in queue:
            for w, var, sign in adj[v]:
                if w not in prev:
                    prev[w] = (v, var, sign)
                    nxt.append(w)
        queue = nxt
    steps = []
    v = goal
    while prev[v] is not None:
        _, var, sign = prev[v]
        steps.append((var, sign))
        v = prev[v][0]
    steps.reverse()
    return steps


def _chart_and_circuits(g, idx, face_sign_bound):
    """Extend the wavy matching to a spanning forest; the directed
    edges added are the chart, the rest define circuit functionals
    (coefficient vector, integer bound)."""
    n = len(g.vertices)
    root = {v: v for v in g.vertices}

    def find(v):
        while root[v] != v:
            root[v] = root[root[v]]
            v = root[v]
        return v

    adj = {v: [] for v in g.vertices}
    for a, b in g.wavy:
        root[find(a)] = find(b)
        adj[a].append((b, None, 0))
        adj[b].append((a, None, 0))
    chart = []
    extra = []
    for v in g.vertices:
        w = g.succ[v]
        if find(v) != find(w):
            root[find(v)] = find(w)
            adj[v].append((w, v, 1))
            adj[w].append((v, v, -1))
            chart.append(v)
        else:
            extra.append(v)
    circuits = []
    for v in extra:
        coeffs = [Fraction(0)] * n
        coeffs[idx[v]] += 1
        bound = face_sign_bound[v][1]
        for var, sign in _forest_path(adj, g.succ[v], v):
            if var is not None:
                coeffs[idx[var]] += sign
                bound += face_sign_bound[var][1]
        circuits.append((coeffs, bound))
    return chart, circuits


def bc_volume(g: BCGraph) -> Fraction:
    """Signed volume of a boundary-cycle graph."""
    g.validate()
    n = len(g.vertices)
    idx = {v: i for i, v in enumerate(g.vertices)}
    face_sign_bound = {}
    for cyc, d in zip(g.new_faces, g.new_degrees):
        for v in cyc:
            face_sign_bound[v] = (1 if d > 0 else -1, abs(d))
    prefactor = Fraction(1)
    for d in g.new_degrees:
        prefactor *= abs(d)
    alt = sum(1 for a, b in g.wavy
              if face_sign_bound[a][0] != face_sign_bound[b][0])
    if alt % 2:
        prefactor = -prefactor

    rows = []
    for cyc, d in zip(g.new_faces, g.new_degrees):
        coeffs = [Fraction(0)] * n
        for v in cyc:
            coeffs[idx[v]] = Fraction(1)
        rows.append((coeffs, Fraction(d)))
    for cyc, d in zip(g.old_faces, g.old_degrees):
        coeffs = [Fraction(0)] * n
        for v in cyc:
            coeffs[idx[v]] = Fraction(1)
        rows.append((coeffs, Fraction(d)))
    sol = _solve_affine(rows, n)
    if sol is None:
        return Fraction(0)
    x0, basis = sol

    chart, circuits = _chart_and_circuits(g, idx, face_sign_bound)
    nchart = len(chart)

    # split the circuit functionals into constant and varying ones on
    # the solution space; record how dependents expand over pivots
    pivots = []          # (coeffs, bound)
    echelon = []         # (reduced vector over basis coords, alphas)
    dependents = []      # (value at x0, alphas over pivots)
    for coeffs, bound in circuits:
        vec = [_dot(coeffs, b) for b in basis]
        v0 = _dot(coeffs, x0)
        if all(x == 0 for x in vec):
            if v0.denominator != 1:
                return Fraction(0)
            continue
        alphas = [Fraction(0)] * len(pivots)
        for red, al in echelon:
            p = next(i for i, x in enumerate(red) if x != 0)
            if vec[p] != 0:
                f = vec[p] / red[p]
                vec = [x - f * y for x, y in zip(vec, red)]
                for i, a in enumerate(al):
                    alphas[i] += f * a
        if all(x == 0 for x in vec):
            dependents.append((v0, alphas))
        else:
            pivots.append((coeffs, bound))
            new_al = [-a for a in alphas] + [Fraction(1)]
            for red, al in echelon:
                al.append(Fraction(0))
            echelon.append((vec, new_al))
    pivot_v0 = [_dot(c, x0) for c, _ in pivots]

    total = Fraction(0)
    spans = [range(-b, b + 1) for _, b in pivots]
    for m in itertools.product(*spans):
        ok = True
        for v0d, alphas in dependents:
            val = v0d + sum((a * (mi - pv) for a, mi, pv
                             in zip(alphas, m, pivot_v0)), Fraction(0))
            if val.denominator != 1:
                ok = False
                break
        if not ok:
            continue
        srows = rows + [(c, Fraction(mi)) for (c, _), mi in zip(pivots, m)]
        ssol = _solve_affine(srows, n)
        if ssol is None:
            continue
        sx0, sbasis = ssol
        if len(sbasis) > nchart:
            raise RuntimeError(
                "slice dimension exceeds the chart; "
                "a circuit functional went missing")
        if len(sbasis) < nchart:
            continue
        C = [[sbasis[j][idx[e]] for j in range(nchart)] for e in chart]
        Cinv = _invert(C, nchart)
        if Cinv is None:
            continue
        t0 = [sx0[idx[e]] for e in chart]
        cons = []
        dead = False
        for i, v in enumerate(g.vertices):
            arow = [sum((sbasis[j][i] * Cinv[j][r]
                         for j in range(nchart)), Fraction(0))
                    for r in range(nchart)]
            c0 = sx0[i] - _dot(arow, t0)
            s = face_sign_bound[v][0]
            if all(x == 0 for x in arow):
                if c0 == 0 or (c0 > 0) != (s > 0):
                    dead = True
                    break
            else:
                cons.append((tuple(-s * x for x in arow), s * c0))
        if dead:
            continue
        total += polytope_volume(cons, nchart)
    return prefactor * total


# -- ribbon sums over a weighted tree ------------------------------


def sum_tree_volumes(tree_edges, weights) -> Fraction:
    """Sum of boundary-cycle volumes over every tuple of cyclic corner
    orders of a weighted tree.

    Each tree vertex v contributes a directed cycle through its edge
    ends (one cyclic order per (valence-1)! choices, all counted), tree
    edges become wavy segments, and the new perimeter of v's cycle is
    its weight.  Every such graph has a single old cycle carrying the
    total weight.  The sum collapses to prod_v weight_v^valence(v).
    """
    verts = sorted(weights)
    nbrs: Dict[object, list] = {v: [] for v in verts}
    for a, b in tree_edges:
        nbrs[a].append(b)
        nbrs[b].append(a)

    def flag(v, u):
        return f"{v}|{u}"

    order_options = []
    for v in verts:
        fs = [flag(v, u) for u in sorted(nbrs[v], key=str)]
        if fs:
            order_options.append(
                [(v, (fs[0],) + rest)
                 for rest in itertools.permutations(fs[1:])])
    total = Fraction(0)
    grand = sum(weights.values())
    for combo in itertools.product(*order_options):
        edges = {}
        d_new = {}
        for v, cyc in combo:
            for i, f in enumerate(cyc):
                edges[f] = cyc[(i + 1) % len(cyc)]
            d_new[cyc[0]] = weights[v]
        wavy = [(flag(a, b), flag(b, a)) for a, b in tree_edges]
        d_old = {next(iter(edges)): grand} if edges else {}
        g = BCGraph(edges, wavy, d_new, d_old)
        g.validate()
        assert len(g.old_faces) <= 1
        total += bc_volume(g)
    return total
