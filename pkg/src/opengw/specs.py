"""Moduli specifications: decorated data describing which open (or closed)
stable-map moduli space an invariant lives on.

A specification is a list of components.  Each component records a small
genus g_s, a set of interior labels, a degree pair (d+, d-), and a
multiset of boundary degrees (one per boundary circle; empty for closed
components).  Validation enforces stability, the degree condition, and
label disjointness; nothing is repaired silently.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple, Union

Label = Union[int, str]
Sign = int  # +1 or -1


class SpecError(ValueError):
    """A structurally invalid specification or descendent problem."""


def _label_sort_key(v: Label):
    return (v.__class__.__name__, str(v))


def sort_labels(labels: Iterable[Label]) -> Tuple[Label, ...]:
    return tuple(sorted(labels, key=_label_sort_key))


@dataclass(frozen=True)
class Component:
    """One connected component of a moduli specification.

    boundary is kept as a sorted tuple so equal components compare equal.
    """

    gs: int
    labels: Tuple[Label, ...]
    d: Tuple[int, int]
    boundary: Tuple[int, ...]

    def __init__(self, gs: int, labels: Iterable[Label] = (),
                 d: Tuple[int, int] = (0, 0),
                 boundary: Iterable[int] = ()):
        object.__setattr__(self, "gs", int(gs))
        object.__setattr__(self, "labels", sort_labels(labels))
        object.__setattr__(self, "d", (int(d[0]), int(d[1])))
        object.__setattr__(self, "boundary", tuple(sorted(boundary)))
        if len(set(self.labels)) != len(self.labels):
            raise SpecError("component labels must be distinct")

    # -- basic shape ----------------------------------------------------

    @property
    def h(self) -> int:
        """Number of boundary circles."""
        return len(self.boundary)

    @property
    def is_closed(self) -> bool:
        return self.h == 0

    @property
    def genus(self) -> int:
        """Doubled genus: 2*gs + h - 1 for open components, gs for closed."""
        if self.h == 0:
            return self.gs
        return 2 * self.gs + self.h - 1

    @property
    def dplus(self) -> int:
        return self.d[0]

    @property
    def dminus(self) -> int:
        return self.d[1]

    @property
    def abs_degree(self) -> int:
        """|d|: the single degree of a closed component (d+ = d-)."""
        return max(self.d)

    @property
    def sphere_degree(self) -> int:
        """The common value r of the degree condition: the total degree
        carried by sphere parts of any fixed-point configuration."""
        return self.dplus - sum(w for w in self.boundary if w > 0)

    # -- validation -----------------------------------------------------

    def violations(self) -> List[str]:
        out = []
        if self.gs < 0:
            out.append(f"gs must be nonnegative, got {self.gs}")
        if self.dplus < 0 or self.dminus < 0:
            out.append(f"degree pair must be nonnegative, got {self.d}")
        lhs = self.dplus - sum(w for w in self.boundary if w > 0)
        rhs = self.dminus + sum(w for w in self.boundary if w < 0)
        if lhs != rhs:
            out.append(
                "degree condition violated: "
                f"d+ - (positive boundary) = {lhs} but "
                f"d- + (negative boundary) = {rhs}"
            )
        elif lhs < 0:
            out.append(f"degree condition violated: common value {lhs} < 0")
        stab = 3 * (self.dplus + self.dminus) + 2 * self.gs \
            + 2 * len(self.labels) + self.h
        if stab <= 2:
            out.append(
                f"stability violated: 3(d+ + d-)+2gs+2|labels|+h = {stab} <= 2"
            )
        return out

    def validate(self) -> None:
        v = self.violations()
        if v:
            raise SpecError("; ".join(v))

    # -- canonical keys -------------------------------------------------

    @property
    def key(self) -> tuple:
        """Canonical identity including labels (memoization key)."""
        return (self.gs, self.labels, self.d, self.boundary)

    @property
    def iso_key(self) -> tuple:
        """Isomorphism class forgetting nothing but the label identities'
        names — two label-free components are isomorphic iff these agree."""
        return (self.gs, len(self.labels), self.d, self.boundary)

    def to_json_obj(self) -> dict:
        return {
            "gs": self.gs,
            "labels": list(self.labels),
            "d": [self.dplus, self.dminus],
            "boundary": list(self.boundary),
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "Component":
        try:
            return Component(
                gs=obj.get("gs", 0),
                labels=obj.get("labels", ()),
                d=tuple(obj["d"]),
                boundary=obj.get("boundary", ()),
            )
        except (KeyError, TypeError, IndexError) as e:
            raise SpecError(f"malformed component object: {e}") from e


@dataclass(frozen=True)
class ModuliSpec:
    components: Tuple[Component, ...]

    def __init__(self, components: Iterable[Component]):
        object.__setattr__(self, "components", tuple(components))

    @property
    def labels(self) -> Tuple[Label, ...]:
        return sort_labels(
            itertools.chain.from_iterable(c.labels for c in self.components)
        )

    def violations(self) -> List[str]:
        out = []
        seen: Dict[Label, int] = {}
        for i, c in enumerate(self.components):
            for msg in c.violations():
                out.append(f"component {i}: {msg}")
            for lab in c.labels:
                if lab in seen:
                    out.append(
                        f"label {lab!r} appears in components "
                        f"{seen[lab]} and {i}"
                    )
                else:
                    seen[lab] = i
        return out

    def validate(self) -> None:
        v = self.violations()
        if v:
            raise SpecError("; ".join(v))

    def is_pure(self) -> bool:
        return all(0 not in c.boundary for c in self.components)

    def aut_order(self) -> int:
        """|Aut(S)|: boundary-circle permutations within each component
        times permutations of identical label-free components."""
        out = 1
        for c in self.components:
            for w in set(c.boundary):
                out *= math.factorial(c.boundary.count(w))
        free: Dict[tuple, int] = {}
        for c in self.components:
            if not c.labels:
                free[c.iso_key] = free.get(c.iso_key, 0) + 1
        for m in free.values():
            out *= math.factorial(m)
        return out

    def to_json_obj(self) -> dict:
        return {"components": [c.to_json_obj() for c in self.components]}

    @staticmethod
    def from_json_obj(obj: dict) -> "ModuliSpec":
        if not isinstance(obj, dict) or "components" not in obj:
            raise SpecError('spec JSON must be {"components": [...]}')
        comps = obj["components"]
        if not isinstance(comps, list):
            raise SpecError('"components" must be a list')
        return ModuliSpec(Component.from_json_obj(c) for c in comps)


def disk_spec(labels: Iterable[Label], d: Tuple[int, int]) -> ModuliSpec:
    """Genus-0 one-boundary component with boundary degree d+ - d-."""
    return ModuliSpec([Component(0, labels, d, [d[0] - d[1]])])


def sphere_spec(labels: Iterable[Label], degree: int) -> ModuliSpec:
    """Closed genus-0 component of degree d, stored as the pair (d, d)."""
    return ModuliSpec([Component(0, labels, (degree, degree), [])])


@dataclass(frozen=True)
class DescendentProblem:
    """Descendent exponents a and fixed-point signs eps, per label."""

    a: Dict[Label, int] = field(default_factory=dict)
    eps: Dict[Label, Sign] = field(default_factory=dict)

    def validate_for(self, spec: ModuliSpec) -> None:
        labels = set(spec.labels)
        if set(self.a) != labels:
            raise SpecError(
                f"descendent map domain {sort_labels(self.a)} does not "
                f"match spec labels {sort_labels(labels)}"
            )
        if set(self.eps) != labels:
            raise SpecError(
                f"sign map domain {sort_labels(self.eps)} does not "
                f"match spec labels {sort_labels(labels)}"
            )
        for lab, v in self.a.items():
            if not isinstance(v, int) or v < 0:
                raise SpecError(f"descendent exponent a[{lab!r}] = {v!r} "
                                "must be a nonnegative integer")
        for lab, s in self.eps.items():
            if s not in (1, -1):
                raise SpecError(f"sign eps[{lab!r}] = {s!r} must be +1 or -1")

    def restrict(self, labels: Iterable[Label]) -> "DescendentProblem":
        labs = set(labels)
        return DescendentProblem(
            {k: v for k, v in self.a.items() if k in labs},
            {k: v for k, v in self.eps.items() if k in labs},
        )

    def to_json_obj(self) -> dict:
        return {
            "a": {str(k): self.a[k] for k in sort_labels(self.a)},
            "eps": {
                str(k): ("+" if self.eps[k] > 0 else "-")
                for k in sort_labels(self.eps)
            },
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "DescendentProblem":
        a = {}
        for k, v in (obj.get("a") or {}).items():
            a[_coerce_label(k)] = int(v)
        eps = {}
        for k, v in (obj.get("eps") or {}).items():
            if v not in ("+", "-", 1, -1):
                raise SpecError(f'eps[{k}] must be "+" or "-", got {v!r}')
            eps[_coerce_label(k)] = 1 if v in ("+", 1) else -1
        return DescendentProblem(a, eps)


def _coerce_label(k: str) -> Label:
    try:
        return int(k)
    except (TypeError, ValueError):
        return k


def expected_u_exponent(c: Component, a: Dict[Label, int]) -> int:
    """Degree of u forced on a connected invariant by dimension counting:
    sum(a)+1-(d+ + d-)-g for open components, sum(a)+2-2g-2d for closed."""
    total_a = sum(a[lab] for lab in c.labels)
    if c.is_closed:
        return total_a + 2 - 2 * c.gs - 2 * c.abs_degree
    return total_a + 1 - (c.dplus + c.dminus) - c.genus
