"""Command-line front end.

Subcommands compute invariants (``ogw``), list the combinatorial objects
behind them (``graphs``, ``trees``, ``morphisms``), evaluate boundary-cycle
volumes and intersection numbers directly (``volume``, ``psi``), and run
the cross-check suites (``verify``).

Exit status: 0 on success, 1 when a verification suite finds a
counterexample, 2 on malformed input.  All output is deterministic;
``--jobs`` is accepted for interface stability and never changes a
result.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from typing import List, Optional, Tuple

from .laurent import Laurent
from .specs import (
    Component, DescendentProblem, ModuliSpec, SpecError, disk_spec,
)
from .psi import (
    HodgeUnsupportedError, UnstableError, hodge_descendent_integral,
)
from .fixed_point import enumerate_fp_graphs
from .genus0 import enumerate_trees, ogw_genus0, ogw_genus0_partitions
from .bc_volume import BCGraph, bc_volume
from .higher_genus import component_ogw, enumerate_morphisms, ogw
from . import oracles


class InputError(ValueError):
    pass


# -- flag parsing --------------------------------------------------


def _parse_label(text: str):
    text = text.strip()
    if not text:
        raise InputError("empty label")
    try:
        return int(text)
    except ValueError:
        return text


def _parse_labels(text: Optional[str]) -> tuple:
    if not text:
        return ()
    return tuple(_parse_label(x) for x in text.split(","))


def _parse_ints(text: str, flag: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",")) if text else ()
    except ValueError:
        raise InputError(f"{flag}: expected comma-separated integers, "
                         f"got {text!r}")


def _parse_degree(text: str) -> Tuple[int, int]:
    vals = _parse_ints(text, "--degree")
    if len(vals) != 2:
        raise InputError(f"--degree: expected two integers d+,d-, got {text!r}")
    return vals


def _parse_a(text: Optional[str]) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise InputError(f"--a: expected label=exponent, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[_parse_label(k)] = int(v)
        except ValueError:
            raise InputError(f"--a: exponent for {k!r} must be an integer")
    return out


def _parse_eps(text: Optional[str]) -> dict:
    out = {}
    if not text:
        return out
    signs = {"+": 1, "-": -1, "+1": 1, "-1": -1}
    for item in text.split(","):
        if "=" not in item:
            raise InputError(f"--eps: expected label=+|-, got {item!r}")
        k, v = item.split("=", 1)
        if v not in signs:
            raise InputError(f"--eps: sign for {k!r} must be + or -, "
                             f"got {v!r}")
        out[_parse_label(k)] = signs[v]
    return out


def _load_json(path: str):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})")


def _build_spec(args) -> ModuliSpec:
    if args.spec:
        return ModuliSpec.from_json_obj(_load_json(args.spec))
    if args.degree is None:
        raise InputError("--degree is required without --spec")
    d = _parse_degree(args.degree)
    labels = _parse_labels(args.labels)
    if getattr(args, "closed", False):
        boundary: tuple = ()
    elif getattr(args, "boundary", None) is not None:
        boundary = _parse_ints(args.boundary, "--boundary")
    else:
        boundary = (d[0] - d[1],)
    return ModuliSpec([Component(args.gs, labels, d, boundary)])


def _problem(args) -> DescendentProblem:
    return DescendentProblem(_parse_a(args.a), _parse_eps(args.eps))


# -- subcommands ---------------------------------------------------


def _cmd_ogw(args) -> int:
    spec = _build_spec(args)
    p = _problem(args)
    trace: Optional[list] = [] if args.trace else None
    val = ogw(spec, p, path=args.path, trace=trace)
    if trace is not None:
        for entry in trace:
            print(json.dumps(entry), file=sys.stderr)
    print(json.dumps(val.to_json_obj()))
    return 0


def _cmd_graphs(args) -> int:
    spec = _build_spec(args)
    out = []
    for c in spec.components:
        for g, aut in enumerate_fp_graphs(c):
            out.append({"graph": g.to_json_obj(), "aut": aut})
    print(json.dumps(out))
    return 0


def _cmd_trees(args) -> int:
    if args.degree is None:
        raise InputError("--degree is required")
    d = _parse_degree(args.degree)
    labels = _parse_labels(args.labels)
    trees = enumerate_trees(labels, d)
    print(json.dumps([t.to_json_obj() for t in trees]))
    return 0


def _cmd_morphisms(args) -> int:
    spec = _build_spec(args)
    out = []
    for c in spec.components:
        for m in enumerate_morphisms(c):
            out.append({
                "target": c.to_json_obj(),
                "sources": [x.to_json_obj() for x in m.components],
                "segments": m.etilde,
                "contracted": list(m.cb_blacks),
                "aut": m.aut,
                "volume": str(m.vol),
            })
    print(json.dumps(out))
    return 0


def _cmd_volume(args) -> int:
    g = BCGraph.from_json(_load_json(args.bc))
    print(bc_volume(g))
    return 0


def _cmd_psi(args) -> int:
    b = _parse_ints(args.b, "--b") if args.b else ()
    print(hodge_descendent_integral(args.genus, b, args.hodge))
    return 0


# -- verification suites -------------------------------------------


def _eps_all(labels, sign=1):
    return {lab: sign for lab in labels}


def _a_distributions(total: int, labels):
    """All assignments of descendent exponents with the given total."""
    n = len(labels)
    if n == 0:
        return [{}] if total == 0 else []
    out = []
    for cut in itertools.combinations(range(total + n - 1), n - 1):
        vals = []
        prev = -1
        for c in cut:
            vals.append(c - prev - 1)
            prev = c
        vals.append(total + n - 2 - prev)
        out.append(dict(zip(labels, vals)))
    return out


def _suite_disk_cover(max_d, max_labels, report):
    for d in range(1, max_d + 1):
        for n in range(1, max_labels + 1):
            labels = tuple(range(1, n + 1))
            for a in _a_distributions(d - 1, labels):
                p = DescendentProblem(a, _eps_all(labels))
                got = ogw_genus0(labels, (d, 0), p)
                want = Laurent.term(
                    oracles.disk_cover_closed([a[x] for x in labels]))
                report(f"disk-cover d={d} a={a}", got == want,
                       f"got {got}, predicted {want}")


def _suite_vanishing(max_d, max_labels, report):
    for dp in range(max_d + 1):
        for dm in range(max_d + 1):
            if dp + dm == 0 or dp + dm > max_d + 1:
                continue
            for n in range(0, min(max_labels, 3) + 1):
                labels = tuple(range(1, n + 1))
                for total in range(0, dp + dm):
                    for a in _a_distributions(total, labels):
                        if not oracles.predict_vanishing((dp, dm), a.values()):
                            continue
                        for eps in itertools.product((1, -1), repeat=n):
                            p = DescendentProblem(a, dict(zip(labels, eps)))
                            got = ogw_genus0(labels, (dp, dm), p)
                            report(
                                f"vanishing d=({dp},{dm}) a={a} eps={eps}",
                                got.is_zero(), f"got {got}, predicted 0")


def _suite_divisor(max_d, max_labels, report):
    for dp in range(max_d + 1):
        for dm in range(max_d - dp + 1):
            if dp + dm == 0:
                continue
            for n in range(0, min(max_labels, 2) + 1):
                labels = tuple(range(1, n + 1))
                for total in range(0, min(4, dp + dm) + 1):
                    for a in _a_distributions(total, labels):
                        for sign in (1, -1):
                            ok, lhs, rhs = oracles.check_divisor(
                                labels, (dp, dm), a, _eps_all(labels), sign)
                            report(
                                f"divisor d=({dp},{dm}) a={a} new={sign:+d}",
                                ok, f"lhs {lhs} != rhs {rhs}")


def _suite_trr(max_d, max_labels, report):
    for d in range(1, max_d + 1):
        for n in range(2, max_labels + 1):
            for a in _a_distributions(d - 1, tuple(range(n))):
                avec = [a[i] for i in range(n)]
                ok, lhs, rhs = oracles.check_trr(d, avec)
                report(f"trr d={d} a={tuple(avec)}", ok,
                       f"lhs {lhs} != rhs {rhs}")


def _suite_cayley(max_d, max_labels, report):
    for dp in range(max_d + 1):
        for dm in range(max_d - dp + 1):
            if dp + dm == 0:
                continue
            for n in range(0, min(max_labels, 2) + 1):
                labels = tuple(range(1, n + 1))
                for total in range(0, dp + dm):
                    for a in _a_distributions(total, labels):
                        p = DescendentProblem(a, _eps_all(labels))
                        via_trees = ogw_genus0(labels, (dp, dm), p)
                        via_parts = ogw_genus0_partitions(labels, (dp, dm), p)
                        report(f"cayley d=({dp},{dm}) a={a}",
                               via_trees == via_parts,
                               f"trees {via_trees} != partitions {via_parts}")


def _paths_targets(max_d):
    out = []
    for dp in range(max_d + 1):
        for dm in range(max_d - dp + 1):
            if dp == dm or dp + dm == 0:
                continue
            total = dp + dm - 1
            out.append((Component(0, (1,), (dp, dm), (dp - dm,)),
                        {1: total}, {1: 1}))
    out += [
        (Component(0, (1,), (2, 0), (1, 1)), {1: 0}, {1: 1}),
        (Component(0, (), (1, 1), (0, 0)), {}, {}),
        (Component(1, (1,), (1, 1)), {1: 2}, {1: 1}),
        (Component(1, (1,), (0, 0)), {1: 1}, {1: 1}),
    ]
    return out


def _suite_paths(max_d, max_labels, report):
    for c, a, eps in _paths_targets(max_d):
        p = DescendentProblem(a, eps)
        compact = component_ogw(c, p, "compact")
        graphsum = component_ogw(c, p, "graphsum")
        report(f"paths target={c.key} a={a}", compact == graphsum,
               f"compact {compact} != graphsum {graphsum}")


def _suite_partition(max_d, max_labels, report):
    rng = random.Random(20260822)
    for trial in range(60):
        n = rng.randint(2, 6)
        a = [rng.randint(1, 9) for _ in range(n)]
        gap = oracles.partition_identity_gap(a)
        report(f"partition a={tuple(a)}", gap == 0, f"gap {gap}")


SUITES = {
    "disk-cover": (_suite_disk_cover, 6, 4),
    "dd-vanish": (_suite_vanishing, 2, 3),
    "divisor": (_suite_divisor, 3, 2),
    "trr": (_suite_trr, 4, 4),
    "cayley": (_suite_cayley, 3, 2),
    "paths": (_suite_paths, 3, 2),
    "partition": (_suite_partition, 0, 6),
}


def _cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failures: List[str] = []
    for name in names:
        fn, default_d, default_labels = SUITES[name]
        max_d = args.max_d if args.max_d is not None else default_d
        max_labels = (args.max_labels if args.max_labels is not None
                      else default_labels)
        count = [0]
        bad = [0]

        def report(case, ok, detail):
            count[0] += 1
            if not ok:
                bad[0] += 1
                failures.append(f"{case}: {detail}")
                print(f"FAIL {case}: {detail}")

        fn(max_d, max_labels, report)
        status = "ok" if bad[0] == 0 else f"{bad[0]} FAILED"
        print(f"{name}: {count[0]} cases, {status}")
    return 1 if failures else 0


# -- argument wiring -----------------------------------------------


def _add_spec_flags(sp, with_boundary=True):
    sp.add_argument("--spec", help="JSON file with a full specification")
    sp.add_argument("--labels", help="comma-separated point labels")
    sp.add_argument("--degree", help="degree pair d+,d-")
    sp.add_argument("--gs", type=int, default=0,
                    help="summand genus of the component (default 0)")
    if with_boundary:
        sp.add_argument("--boundary",
                        help="comma-separated boundary-circle degrees "
                             "(default: the single circle d+ - d-)")
        sp.add_argument("--closed", action="store_true",
                        help="no boundary circles")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="opengw",
        description="Exact stationary open invariants of the disk target.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("ogw", help="evaluate an invariant")
    _add_spec_flags(sp)
    sp.add_argument("--a", help="descendent exponents, label=k,...")
    sp.add_argument("--eps", help="point signs, label=+|-,...")
    sp.add_argument("--path", choices=("compact", "graphsum"),
                    default="compact")
    sp.add_argument("--trace", action="store_true",
                    help="write per-term records to stderr")
    sp.add_argument("--jobs", type=int, default=1,
                    help="reserved; results never depend on it")
    sp.set_defaults(fn=_cmd_ogw)

    sp = sub.add_parser("graphs", help="list fixed-point graphs")
    _add_spec_flags(sp)
    sp.set_defaults(fn=_cmd_graphs)

    sp = sub.add_parser("trees", help="list decorated trees for a disk")
    sp.add_argument("--labels", help="comma-separated point labels")
    sp.add_argument("--degree", help="degree pair d+,d-")
    sp.set_defaults(fn=_cmd_trees)

    sp = sub.add_parser("morphisms", help="list degeneration classes")
    _add_spec_flags(sp)
    sp.set_defaults(fn=_cmd_morphisms)

    sp = sub.add_parser("volume", help="boundary-cycle graph volume")
    sp.add_argument("--bc", required=True, help="JSON file with the graph")
    sp.set_defaults(fn=_cmd_volume)

    sp = sub.add_parser("psi", help="psi/Hodge intersection number")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--b", help="comma-separated psi exponents")
    sp.add_argument("--hodge", type=int, default=0,
                    help="Hodge class index (default 0)")
    sp.set_defaults(fn=_cmd_psi)

    sp = sub.add_parser("verify", help="run a cross-check suite")
    sp.add_argument("--suite", required=True,
                    choices=sorted(SUITES) + ["all"])
    sp.add_argument("--max-d", type=int, default=None)
    sp.add_argument("--max-labels", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1,
                    help="reserved; results never depend on it")
    sp.set_defaults(fn=_cmd_verify)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, SpecError, UnstableError,
            HodgeUnsupportedError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
