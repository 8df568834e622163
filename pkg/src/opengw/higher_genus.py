"""Invariants of arbitrary moduli specifications via degeneration sums.

A target component is evaluated by summing over the ways it degenerates
into a disjoint union of pure source components glued along ``wavy``
annular segments, with some boundary circles of the target contracted
onto interior points of a source piece.  Each such gluing pattern is a
morphism; its contribution combines the boundary-cycle volume of the
gluing, a weight per wavy segment and per contracted circle, and the
fixed-point contributions of the source pieces.

Two evaluation paths are provided.  The compact path groups labeled
gluing patterns into isomorphism classes by an orbit count under the
relabeling group and multiplies whole-component contributions.  The
graph-sum path expands every source piece into its fixed-point graphs,
attaches contracted circles to individual sphere edges, and divides by
the labeled symmetry order directly.  The two must agree identically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .laurent import Laurent
from .specs import Component, DescendentProblem, ModuliSpec
from .fixed_point import (
    component_contribution, enumerate_fp_graphs, graph_contribution,
)
from .bc_volume import BCGraph, bc_volume

__all__ = ["Morphism", "enumerate_morphisms", "component_ogw", "ogw"]

MORPHISM_MEMO: Dict[tuple, list] = {}


# -- source enumeration --------------------------------------------


def _partitions(m: int):
    """Nonincreasing partitions of m into positive parts ([] for 0)."""
    if m == 0:
        yield ()
        return
    def rec(left, cap):
        if left == 0:
            yield ()
            return
        for first in range(min(left, cap), 0, -1):
            for rest in rec(left - first, first):
                yield (first,) + rest
    yield from rec(m, m)


def _compositions(total: int, parts: int):
    """Ordered tuples of nonnegative integers of the given length."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _pure_boundaries(d: Tuple[int, int]):
    """Boundary multisets compatible with the degree pair, every circle
    of nonzero degree.  Includes the empty (closed) choice when the
    degrees agree."""
    dp, dm = d
    for r in range(min(dp, dm) + 1):
        for pos in _partitions(dp - r):
            for neg in _partitions(dm - r):
                yield tuple(sorted(pos + tuple(-x for x in neg)))


def _source_multisets(c: Component) -> List[Tuple[Component, ...]]:
    """Unordered tuples of stable pure source components with total
    degree and label set matching the target and a nonnegative count
    of gluing segments."""
    dp, dm = c.d
    labels = c.labels
    out = []
    seen = set()
    for n in range(1, max(1, dp + dm) + 1):
        for owner in itertools.product(range(n), repeat=len(labels)):
            label_parts = [tuple(lab for lab, o in zip(labels, owner)
                                 if o == i) for i in range(n)]
            for dps in _compositions(dp, n):
                for dms in _compositions(dm, n):
                    for total_gs in range(c.gs + n):
                        for gss in _compositions(total_gs, n):
                            for bs in itertools.product(
                                    *[_pure_boundaries((a, b))
                                      for a, b in zip(dps, dms)]):
                                parts = []
                                ok = True
                                for i in range(n):
                                    part = Component(
                                        gss[i], label_parts[i],
                                        (dps[i], dms[i]), bs[i])
                                    if part.violations():
                                        ok = False
                                        break
                                    parts.append(part)
                                if not ok:
                                    continue
                                parts.sort(key=lambda x: x.key)
                                key = tuple(x.key for x in parts)
                                if key in seen:
                                    continue
                                seen.add(key)
                                out.append(tuple(parts))
    out.sort(key=lambda t: tuple(x.key for x in t))
    return out


# -- labeled gluing configurations ---------------------------------


def _minrot(t: tuple) -> tuple:
    i = min(range(len(t)), key=lambda j: t[j])
    return t[i:] + t[:i]


def _cycles_of(succ: dict) -> List[tuple]:
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
        out.append(_minrot(tuple(cyc)))
    return sorted(out)


class _UF:
    def __init__(self, items):
        self.root = {x: x for x in items}

    def find(self, x):
        r = self.root
        while r[x] != x:
            r[x] = r[r[x]]
            x = r[x]
        return x

    def union(self, a, b):
        self.root[self.find(a)] = self.find(b)

    def groups(self):
        out: Dict[object, list] = {}
        for x in self.root:
            out.setdefault(self.find(x), []).append(x)
        return out


def _labeled_configs(c: Component, comps: Tuple[Component, ...]):
    """All admissible labeled gluing patterns of the sources onto the
    target component: (assign, sigma, beta, cb_map) tuples.

    assign maps each segment end (k, 0|1) to a source boundary slot
    (instance, slot); sigma gives each occupied slot the cyclic order
    of its ends; beta matches target slots with glued cycles, untouched
    source slots, and contracted circles; cb_map sends each contracted
    circle to a source instance.
    """
    n = len(comps)
    etilde = c.gs - sum(x.gs for x in comps) + n - 1
    if etilde < 0:
        return
    whites = [(i, s) for i, comp in enumerate(comps)
              for s in range(comp.h)]
    wdeg = {(i, s): comps[i].boundary[s] for i, s in whites}
    flags = [(k, s) for k in range(etilde) for s in (0, 1)]
    tdeg = c.boundary
    hT = len(tdeg)

    for placement in itertools.product(whites, repeat=len(flags)):
        assign = dict(zip(flags, placement))
        if n > 1:
            uf = _UF(range(n))
            for k in range(etilde):
                uf.union(assign[(k, 0)][0], assign[(k, 1)][0])
            if len(uf.groups()) > 1:
                continue
        by_white: Dict[tuple, list] = {}
        for f in flags:
            by_white.setdefault(assign[f], []).append(f)
        occupied = sorted(by_white)
        free = [w for w in whites if w not in by_white]
        order_opts = []
        for w in occupied:
            fs = sorted(by_white[w])
            order_opts.append(
                [(fs[0],) + rest
                 for rest in itertools.permutations(fs[1:])])
        for orders in itertools.product(*order_opts):
            sigma = dict(zip(occupied, orders))
            succ = {}
            for cyc in orders:
                for i, f in enumerate(cyc):
                    succ[f] = cyc[(i + 1) % len(cyc)]
            scycles = _cycles_of(
                {f: (succ[f][0], succ[f][1] ^ 1) for f in flags})
            ncb = hT - len(scycles) - len(free)
            if ncb < 0:
                continue
            for slot_perm in itertools.permutations(range(hT)):
                # objects in a fixed order: cycles, free whites, circles
                objects = ([("cyc", cy) for cy in scycles]
                           + [("wf", w) for w in free]
                           + [("cb", j) for j in range(ncb)])
                beta = [None] * hT
                ok = True
                for obj, slot in zip(objects, slot_perm):
                    if obj[0] == "wf" and tdeg[slot] != wdeg[obj[1]]:
                        ok = False
                        break
                    if obj[0] == "cb" and tdeg[slot] != 0:
                        ok = False
                        break
                    beta[slot] = obj
                if not ok:
                    continue
                if not _conserved(flags, assign, succ, scycles, beta,
                                  wdeg, tdeg, by_white):
                    continue
                beta = tuple(beta)
                if ncb == 0:
                    yield assign, sigma, beta, ()
                else:
                    for cb_map in itertools.product(range(n), repeat=ncb):
                        yield assign, sigma, beta, cb_map


def _conserved(flags, assign, succ, scycles, beta, wdeg, tdeg, by_white):
    """New and old perimeters must agree on every glued piece."""
    if not flags:
        return True
    uf = _UF(flags)
    for f in flags:
        uf.union(f, succ[f])
        uf.union(f, (f[0], f[1] ^ 1))
    balance: Dict[object, int] = {}
    for w, fs in by_white.items():
        r = uf.find(fs[0])
        balance[r] = balance.get(r, 0) + wdeg[w]
    slot_of = {obj: slot for slot, obj in enumerate(beta)}
    for cy in scycles:
        r = uf.find(cy[0])
        balance[r] = balance.get(r, 0) - tdeg[slot_of[("cyc", cy)]]
    return all(v == 0 for v in balance.values())


# -- the relabeling group ------------------------------------------


def _group_factors(c: Component, comps, etilde, ncb):
    """Factor lists whose product enumerates the relabeling group."""
    n = len(comps)
    groups: Dict[tuple, list] = {}
    for i, comp in enumerate(comps):
        groups.setdefault(comp.key, []).append(i)
    inst_perms = []
    for perms in itertools.product(
            *[itertools.permutations(g) for g in groups.values()]):
        full = [None] * n
        for g, img in zip(groups.values(), perms):
            for src, dst in zip(g, img):
                full[src] = dst
        inst_perms.append(tuple(full))
    slot_perm_lists = []
    for comp in comps:
        degs: Dict[int, list] = {}
        for s, w in enumerate(comp.boundary):
            degs.setdefault(w, []).append(s)
        opts = []
        for perms in itertools.product(
                *[itertools.permutations(g) for g in degs.values()]):
            full = [None] * comp.h
            for g, img in zip(degs.values(), perms):
                for src, dst in zip(g, img):
                    full[src] = dst
            opts.append(tuple(full))
        slot_perm_lists.append(opts)
    tdegs: Dict[int, list] = {}
    for s, w in enumerate(c.boundary):
        tdegs.setdefault(w, []).append(s)
    tgt_perms = []
    for perms in itertools.product(
            *[itertools.permutations(g) for g in tdegs.values()]):
        full = [None] * c.h
        for g, img in zip(tdegs.values(), perms):
            for src, dst in zip(g, img):
                full[src] = dst
        tgt_perms.append(tuple(full))
    wavy_perms = list(itertools.permutations(range(etilde)))
    flip_opts = list(itertools.product((0, 1), repeat=etilde))
    cb_perms = list(itertools.permutations(range(ncb)))
    return (inst_perms, list(itertools.product(*slot_perm_lists)),
            tgt_perms, wavy_perms, flip_opts, cb_perms)


def _apply(g, config):
    inst_p, slot_ps, tgt_p, wavy_p, flips, cb_p = g
    assign, sigma, beta, cb_map = config

    def fw(w):
        i, s = w
        return (inst_p[i], slot_ps[i][s])

    def ff(f):
        k, s = f
        return (wavy_p[k], s ^ flips[k])

    new_assign = {ff(f): fw(w) for f, w in assign.items()}
    new_sigma = {fw(w): _minrot(tuple(ff(x) for x in cyc))
                 for w, cyc in sigma.items()}
    new_cb = [None] * len(cb_map)
    for j, inst in enumerate(cb_map):
        new_cb[cb_p[j]] = inst_p[inst]
    new_beta = [None] * len(beta)
    for slot, obj in enumerate(beta):
        if obj[0] == "cyc":
            obj = ("cyc", _minrot(tuple(ff(x) for x in obj[1])))
        elif obj[0] == "wf":
            obj = ("wf", fw(obj[1]))
        else:
            obj = ("cb", cb_p[obj[1]])
        new_beta[tgt_p[slot]] = obj
    return new_assign, new_sigma, tuple(new_beta), tuple(new_cb)


def _serialize(config) -> tuple:
    assign, sigma, beta, cb_map = config
    return (tuple(sorted(assign.items())),
            tuple(sorted(sigma.items())),
            beta, cb_map)


# -- morphism classes ----------------------------------------------


@dataclass(frozen=True)
class Morphism:
    """An isomorphism class of gluing patterns onto one target
    component."""
    target: Component
    components: Tuple[Component, ...]
    etilde: int
    cb_blacks: Tuple[int, ...]
    aut: int
    vol: Fraction
    config: tuple

    def source_spec(self) -> ModuliSpec:
        return ModuliSpec(self.components)

    def is_identity(self) -> bool:
        return (self.etilde == 0 and not self.cb_blacks
                and len(self.components) == 1
                and self.components[0].key == self.target.key)


def _bc_of_config(c: Component, comps, config) -> BCGraph:
    assign, sigma, beta, cb_map = config

    def fid(f):
        return f"{f[0]}.{f[1]}"

    edges = {}
    d_new = {}
    wdeg = {}
    for i, comp in enumerate(comps):
        for s in range(comp.h):
            wdeg[(i, s)] = comp.boundary[s]
    for w, cyc in sigma.items():
        for i, f in enumerate(cyc):
            edges[fid(f)] = fid(cyc[(i + 1) % len(cyc)])
        d_new[fid(cyc[0])] = wdeg[w]
    etilde = max((k for k, _ in assign), default=-1) + 1
    wavy = [(f"{k}.0", f"{k}.1") for k in range(etilde)]
    d_old = {}
    loops = {}
    for slot, obj in enumerate(beta):
        if obj[0] == "cyc":
            d_old[fid(obj[1][0])] = c.boundary[slot]
        elif obj[0] == "wf":
            i, s = obj[1]
            loops[f"w{i}.{s}"] = (wdeg[obj[1]], c.boundary[slot])
    return BCGraph(edges, wavy, d_new, d_old, loops)


def enumerate_morphisms(c: Component) -> List[Morphism]:
    """All isomorphism classes of gluing patterns onto the target
    component, with automorphism counts and boundary-cycle volumes."""
    c.validate()
    if c.key in MORPHISM_MEMO:
        return MORPHISM_MEMO[c.key]
    classes = []
    for comps in _source_multisets(c):
        n = len(comps)
        etilde = c.gs - sum(x.gs for x in comps) + n - 1
        if etilde < 0:
            continue
        seen = set()
        for config in _labeled_configs(c, comps):
            key = _serialize(config)
            if key in seen:
                continue
            ncb = len(config[3])
            factors = _group_factors(c, comps, etilde, ncb)
            orbit = set()
            for g in itertools.product(*factors):
                orbit.add(_serialize(_apply(g, config)))
            seen |= orbit
            g_order = 1
            for f in factors:
                g_order *= len(f)
            if g_order % len(orbit):
                raise RuntimeError("orbit size does not divide the group")
            vol = bc_volume(_bc_of_config(c, comps, config))
            classes.append(Morphism(
                target=c, components=comps, etilde=etilde,
                cb_blacks=config[3], aut=g_order // len(orbit),
                vol=vol, config=key))
    classes.sort(key=lambda m: (tuple(x.key for x in m.components),
                                m.config))
    MORPHISM_MEMO[c.key] = classes
    return classes


# -- evaluation ----------------------------------------------------


def _morphism_term(m: Morphism, p: DescendentProblem) -> Laurent:
    term = Laurent.term(Fraction(1, m.aut))
    if m.etilde:
        term = term * Laurent.term(
            Fraction(1, (-2) ** m.etilde), -m.etilde)
    term = term * Laurent.term(m.vol)
    if term.is_zero():
        return term
    for black in m.cb_blacks:
        delta = m.components[black].sphere_degree
        if delta == 0:
            return Laurent.zero()
        term = term * Laurent.term(Fraction(delta, 2), -1)
    for comp in m.components:
        term = term * component_contribution(comp, p.restrict(comp.labels))
        if term.is_zero():
            return term
    return term


def _component_ogw_compact(c: Component, p: DescendentProblem,
                           trace=None) -> Laurent:
    total = Laurent.zero()
    for m in enumerate_morphisms(c):
        term = _morphism_term(m, p)
        if trace is not None:
            trace.append({
                "target": c.to_json_obj(),
                "sources": [x.to_json_obj() for x in m.components],
                "segments": m.etilde,
                "contracted": len(m.cb_blacks),
                "aut": m.aut,
                "volume": str(m.vol),
                "term": term.to_json_obj(),
            })
        total = total + term
    return total


def _component_ogw_graphsum(c: Component, p: DescendentProblem) -> Laurent:
    """Direct sum over labeled gluing patterns refined by fixed-point
    graph choices, dividing by the labeled symmetry order.

    Relabelings of each source's own boundary circles cancel between
    the choice count and the symmetry order, so the residual order is
    over identical sources, equal-degree target circles, segment
    relabelings and flips, and contracted-circle relabelings.
    """
    total = Laurent.zero()
    for comps in _source_multisets(c):
        n = len(comps)
        etilde = c.gs - sum(x.gs for x in comps) + n - 1
        if etilde < 0:
            continue
        base_order = 2 ** etilde * math.factorial(etilde)
        groups: Dict[tuple, int] = {}
        for comp in comps:
            groups[comp.key] = groups.get(comp.key, 0) + 1
        for mult in groups.values():
            base_order *= math.factorial(mult)
        for w in set(c.boundary):
            base_order *= math.factorial(c.boundary.count(w))
        cfgs = []
        for config in _labeled_configs(c, comps):
            vol = bc_volume(_bc_of_config(c, comps, config))
            if vol != 0:
                cfgs.append((config, vol))
        if not cfgs:
            continue
        contribs = [
            [(g, aut, graph_contribution(g, p.restrict(comp.labels)))
             for g, aut in enumerate_fp_graphs(comp)]
            for comp in comps]
        sub = Laurent.zero()
        for config, vol in cfgs:
            cb_map = config[3]
            denom = base_order * math.factorial(len(cb_map))
            base = Laurent.term(vol)
            if etilde:
                base = base * Laurent.term(
                    Fraction(1, (-2) ** etilde), -etilde)
            for choice in itertools.product(*contribs):
                x = base
                autprod = 1
                for g, aut, contrib in choice:
                    autprod *= aut
                    x = x * contrib
                    if x.is_zero():
                        break
                if x.is_zero():
                    continue
                slot_lists = [
                    [e[2] for e in choice[black][0].sphere_edges]
                    for black in cb_map]
                for degs in itertools.product(*slot_lists):
                    y = x
                    for d in degs:
                        y = y * Laurent.term(Fraction(d, 2), -1)
                    sub = sub + y * Fraction(1, denom * autprod)
        total = total + sub
    return total


def component_ogw(c: Component, p: DescendentProblem,
                  path: str = "compact", trace=None) -> Laurent:
    if path == "compact":
        return _component_ogw_compact(c, p, trace)
    if path == "graphsum":
        return _component_ogw_graphsum(c, p)
    raise ValueError(f'path must be "compact" or "graphsum", got {path!r}')


def ogw(spec: ModuliSpec, p: DescendentProblem,
        path: str = "compact", trace=None) -> Laurent:
    """The invariant of a moduli specification: the product over its
    components of their degeneration sums."""
    spec.validate()
    p.validate_for(spec)
    total = Laurent.one()
    for c in spec.components:
        total = total * component_ogw(c, p.restrict(c.labels), path, trace)
        if total.is_zero():
            return total
    return total
