"""Fixed-point graphs: enumeration and exact localization contributions.

A fixed-point graph records one torus-fixed configuration type: vertices
are contracted components sitting over one of the two fixed points
(sign mu), sphere edges are multiple covers of the sphere joining the
two fixed points, disk edges are covers of the disk attached at a
boundary circle.  Contracting sphere edges to equators and disk edges to
boundaries recovers a moduli-specification component; enumeration runs
the other way.

Contribution dictionary (everything is a Laurent polynomial in u):

* sphere edge of degree d:    (-1)^d d^(2d) / ((d!)^2 (2u)^(2d))
* disk edge of degree d:      mu^(d+1) d^d / (d! (2u)^d)
* stable vertex (2g-2+n > 0): integral over the (g,n) Deligne-Mumford
  space of  (1/w) Lambda_g^dual(w) * prod_flags w/(omega_f - psi_f)
  * prod_labels psi^a_i * w,  with w = mu * 2u and omega_f = w/d_f
* unstable vertex, one flag:              omega_f
* unstable vertex, two flags:             w/(omega_1 + omega_2)
* unstable vertex, one flag + one label:  (-omega_f)^a_i * w

A label's factor is zero unless its sign constraint eps_i equals mu(v).
Unstable vertices with no flags do not occur: enumeration never emits
them (they would be unstable isolated domain components).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .laurent import Laurent
from .psi import HodgeUnsupportedError, hodge_descendent_integral
from .specs import Component, DescendentProblem, Label, ModuliSpec

__all__ = [
    "FPGraph", "enumerate_fp_graphs", "graph_contribution",
    "component_contribution", "spec_contribution", "edge_weight",
    "halfedge_weight", "sphere_edge_factor", "disk_edge_factor",
    "vertex_factor", "slot_automorphisms",
]

CONTRIB_MEMO: dict = {}
GRAPH_MEMO: dict = {}


class FPGraph:
    """Immutable decorated graph.

    gammas/mus/labels are per-vertex tuples; sphere_edges is a sorted
    tuple of (i, j, d) with i < j and mus[i] != mus[j]; disk_edges is a
    sorted tuple of (v, d).  A disk edge's sign is mus[v].
    """

    __slots__ = ("gammas", "mus", "labels", "sphere_edges", "disk_edges")

    def __init__(self, gammas, mus, labels, sphere_edges, disk_edges):
        self.gammas = tuple(gammas)
        self.mus = tuple(mus)
        self.labels = tuple(tuple(sorted(ls, key=repr)) for ls in labels)
        self.sphere_edges = tuple(sorted(sphere_edges))
        self.disk_edges = tuple(sorted(disk_edges))
        n = len(self.gammas)
        assert len(self.mus) == n and len(self.labels) == n
        for (i, j, d) in self.sphere_edges:
            assert 0 <= i < j < n and d >= 1
            assert self.mus[i] != self.mus[j], "sphere edge needs opposite signs"
        for (v, d) in self.disk_edges:
            assert 0 <= v < n and d >= 1

    @property
    def n_vertices(self) -> int:
        return len(self.gammas)

    def flags(self, v: int) -> List[int]:
        """Degrees of the sphere- and disk-edge flags at v, in slot order
        (sphere edges first)."""
        out = [d for (i, j, d) in self.sphere_edges if v in (i, j)]
        # a sphere edge never has i == j, but it may hit v twice only if
        # i == j which is excluded; parallel edges give several entries
        out += [d for (w, d) in self.disk_edges if w == v]
        return out

    def covering_order(self) -> int:
        """|A0|: the product of all edge degrees."""
        out = 1
        for (_, _, d) in self.sphere_edges:
            out *= d
        for (_, d) in self.disk_edges:
            out *= d
        return out

    def serialize(self, perm: Optional[Sequence[int]] = None) -> tuple:
        if perm is None:
            perm = range(self.n_vertices)
        p = list(perm)
        inv = [0] * len(p)
        for new, old in enumerate(p):
            inv[old] = new
        verts = tuple(
            (self.gammas[old], self.mus[old], self.labels[old]) for old in p
        )
        se = tuple(sorted(
            (min(inv[i], inv[j]), max(inv[i], inv[j]), d)
            for (i, j, d) in self.sphere_edges
        ))
        de = tuple(sorted((inv[v], d) for (v, d) in self.disk_edges))
        return (verts, se, de)

    def canonical_key(self) -> tuple:
        return min(
            self.serialize(p)
            for p in itertools.permutations(range(self.n_vertices))
        )

    def aut_order(self) -> int:
        vperms = sum(1 for _ in self._decorated_vperms())
        out = vperms
        for c in _multiplicities(self.sphere_edges):
            out *= math.factorial(c)
        for c in _multiplicities(self.disk_edges):
            out *= math.factorial(c)
        return out

    def _decorated_vperms(self):
        """Vertex permutations preserving decorations and both edge
        multisets.  Labels are preserved pointwise, so labeled vertices
        are fixed."""
        n = self.n_vertices
        ident = self.serialize()
        groups: Dict[tuple, List[int]] = {}
        for v in range(n):
            groups.setdefault(
                (self.gammas[v], self.mus[v], self.labels[v]), []
            ).append(v)
        keys = list(groups)
        for parts in itertools.product(
            *(itertools.permutations(groups[k]) for k in keys)
        ):
            perm = [0] * n
            for k, images in zip(keys, parts):
                for src, dst in zip(groups[k], images):
                    perm[src] = dst
            if self.serialize(perm) == ident:
                yield tuple(perm)

    def to_json_obj(self) -> dict:
        return {
            "vertices": [
                {"gamma": g, "mu": "+" if m > 0 else "-", "labels": list(ls)}
                for g, m, ls in zip(self.gammas, self.mus, self.labels)
            ],
            "sphere_edges": [[i, j, d] for (i, j, d) in self.sphere_edges],
            "disk_edges": [
                [v, d, "+" if self.mus[v] > 0 else "-"]
                for (v, d) in self.disk_edges
            ],
        }

    def describe(self) -> str:
        vs = ",".join(
            f"(g={g},mu={'+' if m > 0 else '-'},labels={list(ls)})"
            for g, m, ls in zip(self.gammas, self.mus, self.labels)
        )
        return (f"vertices[{vs}] sphere{list(self.sphere_edges)} "
                f"disk{list(self.disk_edges)}")


def _multiplicities(items: Iterable) -> List[int]:
    counts: Dict = {}
    for x in items:
        counts[x] = counts.get(x, 0) + 1
    return list(counts.values())


def slot_automorphisms(g: FPGraph) -> List[Tuple[tuple, tuple, tuple]]:
    """The full automorphism group as explicit (vertex perm, sphere-slot
    perm, disk-slot perm) triples; length equals aut_order()."""
    out = []
    se, de = g.sphere_edges, g.disk_edges
    for vp in g._decorated_vperms():
        # image of sphere slot k is any slot holding the transported edge;
        # enumerate all bijections class by class
        se_img = [
            (min(vp[i], vp[j]), max(vp[i], vp[j]), d) for (i, j, d) in se
        ]
        de_img = [(vp[v], d) for (v, d) in de]
        for eperm in _class_bijections(se_img, se):
            for hperm in _class_bijections(de_img, de):
                out.append((vp, eperm, hperm))
    return out


def _class_bijections(images: List, targets: Sequence) -> List[tuple]:
    """All ways to send slot k (whose content maps to images[k]) to a
    target slot holding that same content, bijectively."""
    slots_by_content: Dict = {}
    for idx, t in enumerate(targets):
        slots_by_content.setdefault(t, []).append(idx)
    classes: Dict = {}
    for k, img in enumerate(images):
        classes.setdefault(img, []).append(k)
    if any(
        len(classes[c]) != len(slots_by_content.get(c, ()))
        for c in classes
    ):
        return []
    out = []
    contents = list(classes)
    for choice in itertools.product(
        *(itertools.permutations(slots_by_content[c]) for c in contents)
    ):
        perm = [0] * len(targets)
        for c, images_for_c in zip(contents, choice):
            for src, dst in zip(classes[c], images_for_c):
                perm[src] = dst
        out.append(tuple(perm))
    return out


# --------------------------------------------------------------------
# enumeration


def enumerate_fp_graphs(c: Component) -> List[Tuple[FPGraph, int]]:
    """All isomorphism types contracting to the component, with |Aut|.

    Deterministic order (sorted canonical keys).  The empty list is a
    legal result — e.g. any component with a boundary degree 0.
    """
    c.validate()
    key = c.key
    if key in GRAPH_MEMO:
        return GRAPH_MEMO[key]
    found: Dict[tuple, FPGraph] = {}
    if 0 not in c.boundary:
        r = c.sphere_degree
        for g in _generate(c, r):
            found.setdefault(g.canonical_key(), g)
    result = [
        (found[k], found[k].aut_order()) for k in sorted(found)
    ]
    GRAPH_MEMO[key] = result
    return result


def _generate(c: Component, r: int):
    max_nv = r + 1 if r >= 1 else 1
    for nv in range(1, max_nv + 1):
        for mus in itertools.product((1, -1), repeat=nv):
            disk_opts = []
            ok = True
            for b in c.boundary:
                sign = 1 if b > 0 else -1
                verts = [i for i in range(nv) if mus[i] == sign]
                if not verts:
                    ok = False
                    break
                disk_opts.append([(i, abs(b)) for i in verts])
            if not ok:
                continue
            for disks in itertools.product(*disk_opts):
                dedges = tuple(sorted(disks))
                m_lo, m_hi = nv - 1, min(r, nv - 1 + c.gs)
                for m in range(m_lo, m_hi + 1):
                    yield from _generate_edges(c, r, nv, mus, dedges, m)


def _generate_edges(c, r, nv, mus, dedges, m):
    if m == 0:
        supports = [()]
    else:
        pairs = [
            (i, j)
            for i in range(nv) for j in range(i + 1, nv)
            if mus[i] != mus[j]
        ]
        if not pairs:
            return
        supports = itertools.combinations_with_replacement(pairs, m)
    for support in supports:
        if not _connected(nv, support):
            continue
        h1 = m - nv + 1
        gs_left = c.gs - h1
        if gs_left < 0:
            continue
        for degs in _compositions_pos(r, m):
            sedges = tuple(sorted(
                (i, j, d) for (i, j), d in zip(support, degs)
            ))
            for gammas in _compositions_nonneg(gs_left, nv):
                for assign in itertools.product(
                    range(nv), repeat=len(c.labels)
                ):
                    labels = [[] for _ in range(nv)]
                    for lab, v in zip(c.labels, assign):
                        labels[v].append(lab)
                    g = FPGraph(gammas, mus, labels, sedges, dedges)
                    if _has_unstable_isolated_vertex(g):
                        continue
                    yield g


def _has_unstable_isolated_vertex(g: FPGraph) -> bool:
    for v in range(g.n_vertices):
        flags = g.flags(v)
        if flags:
            continue
        n_special = len(g.labels[v])
        if 2 * g.gammas[v] - 2 + n_special <= 0:
            return True
    return False


def _connected(nv: int, support) -> bool:
    if nv == 1:
        return True
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j) in support:
        parent[find(i)] = find(j)
    return len({find(v) for v in range(nv)}) == 1


def _compositions_pos(total: int, parts: int):
    """Compositions of `total` into `parts` integers >= 1."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(1, total - parts + 2):
        for rest in _compositions_pos(total - head, parts - 1):
            yield (head,) + rest


def _compositions_nonneg(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for rest in _compositions_nonneg(total - head, parts - 1):
            yield (head,) + rest


# --------------------------------------------------------------------
# evaluation


def sphere_edge_factor(d: int) -> Laurent:
    if d < 1:
        raise ValueError(f"sphere edge degree must be >= 1, got {d}")
    num = (-1) ** d * d ** (2 * d)
    den = math.factorial(d) ** 2 * 2 ** (2 * d)
    return Laurent.term(Fraction(num, den), -2 * d)


def disk_edge_factor(mu: int, d: int) -> Laurent:
    if d < 1:
        raise ValueError(f"disk edge degree must be >= 1, got {d}")
    if mu not in (1, -1):
        raise ValueError(f"mu must be +1 or -1, got {mu}")
    num = mu ** (d + 1) * d ** d
    den = math.factorial(d) * 2 ** d
    return Laurent.term(Fraction(num, den), -d)


def edge_weight(d: int) -> Laurent:
    """Sphere-edge weight normalized by the order-d covering group."""
    return sphere_edge_factor(d) / d


def halfedge_weight(mu: int, d: int) -> Laurent:
    """Disk-edge weight normalized by the order-d covering group."""
    return disk_edge_factor(mu, d) / d


def vertex_factor(gamma: int, mu: int, flag_degrees: Sequence[int],
                  label_exponents: Sequence[int]) -> Laurent:
    """The vertex block, after the label sign checks have passed.

    flag_degrees: degrees of incident sphere/disk edges.
    label_exponents: the descendent exponent of each label at the vertex.
    """
    nf = len(flag_degrees)
    n_special = nf + len(label_exponents)
    suma = sum(label_exponents)

    if 2 * gamma - 2 + n_special <= 0:
        # unstable dictionary
        if gamma == 0 and nf == 1 and not label_exponents:
            d = flag_degrees[0]
            return Laurent.term(Fraction(2 * mu, d), 1)  # omega_f
        if gamma == 0 and nf == 2 and not label_exponents:
            d1, d2 = flag_degrees
            return Laurent.term(Fraction(d1 * d2, d1 + d2), 0)
        if gamma == 0 and nf == 1 and len(label_exponents) == 1:
            d = flag_degrees[0]
            a = label_exponents[0]
            coeff = Fraction((-2 * mu) ** a * 2 * mu, d ** a)
            return Laurent.term(coeff, a + 1)
        raise AssertionError(
            f"unstable vertex shape (gamma={gamma}, flags={nf}, "
            f"labels={len(label_exponents)}) cannot occur"
        )

    dim = 3 * gamma - 3 + n_special
    out = Laurent.zero()
    for j in range(gamma + 1):
        budget = dim - j - suma
        if budget < 0:
            continue
        sign_j = (-1) ** j
        mu_hodge = mu if (gamma - j - 1) % 2 else 1
        for kvec in _compositions_nonneg(budget, nf):
            integral = hodge_descendent_integral(
                gamma, tuple(kvec) + tuple(label_exponents), j
            )
            if integral == 0:
                continue
            coeff = Fraction(sign_j * mu_hodge) * integral
            for d, k in zip(flag_degrees, kvec):
                coeff *= Fraction(d ** (k + 1))
                if k % 2:
                    coeff *= mu
            exp = (gamma - j - 1) - budget
            coeff *= Fraction(2) ** exp
            out = out + Laurent.term(coeff, exp)
    for _ in label_exponents:
        out = out * Laurent.term(2 * mu, 1)
    return out


def graph_contribution(g: FPGraph, p: DescendentProblem) -> Laurent:
    """(1/|A0|) times the product of all edge and vertex factors."""
    for ls in g.labels:
        for lab in ls:
            if p.a[lab] < 0:
                return Laurent.zero()
    for v in range(g.n_vertices):
        for lab in g.labels[v]:
            if p.eps[lab] != g.mus[v]:
                return Laurent.zero()

    out = Laurent.term(Fraction(1, g.covering_order()), 0)
    for (_, _, d) in g.sphere_edges:
        out = out * sphere_edge_factor(d)
    for (v, d) in g.disk_edges:
        out = out * disk_edge_factor(g.mus[v], d)
    for v in range(g.n_vertices):
        try:
            f = vertex_factor(
                g.gammas[v], g.mus[v], g.flags(v),
                [p.a[lab] for lab in g.labels[v]],
            )
        except HodgeUnsupportedError as e:
            raise HodgeUnsupportedError(
                f"{e} (vertex {v} of graph {g.describe()})"
            ) from e
        if f.is_zero():
            return Laurent.zero()
        out = out * f
    return out


def component_contribution(c: Component, p: DescendentProblem) -> Laurent:
    """I restricted to one connected component:
    |Aut| * sum over graphs of contribution/|Aut(graph)|."""
    key = (c.key, tuple((lab, p.a[lab], p.eps[lab]) for lab in c.labels))
    if key in CONTRIB_MEMO:
        return CONTRIB_MEMO[key]
    total = Laurent.zero()
    for g, aut in enumerate_fp_graphs(c):
        contrib = graph_contribution(g, p)
        if not contrib.is_zero():
            total = total + contrib / aut
    total = total * ModuliSpec([c]).aut_order()
    CONTRIB_MEMO[key] = total
    return total


def spec_contribution(s: ModuliSpec, p: DescendentProblem) -> Laurent:
    """I of a full specification: the product over components."""
    s.validate()
    p.validate_for(s)
    out = Laurent.one()
    for c in s.components:
        out = out * component_contribution(c, p.restrict(c.labels))
        if out.is_zero():
            return out
    return out
