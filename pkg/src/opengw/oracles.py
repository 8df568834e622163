"""Independent predictions used to cross-examine the invariants.

Nothing here reuses the tree summation internals: the closed disk-cover
formula, the vanishing predictions, and the recursion checks are
computed on their own and then compared against the invariant values,
so a bug in the enumeration cannot cancel against itself.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from .laurent import Laurent
from .psi import psi_integral_g0
from .specs import DescendentProblem
from .genus0 import ogw_genus0

__all__ = [
    "disk_cover_closed", "predict_vanishing", "check_divisor",
    "check_trr", "partition_identity_gap",
]


def disk_cover_closed(a: Sequence[int]) -> Fraction:
    """Closed count of degree-(1+sum a) disk covers with point
    conditions on the positive side: (1+sum a)^(n-2) / prod a_i!."""
    n = len(a)
    if n < 1 or any(x < 0 for x in a):
        raise ValueError(f"need n >= 1 nonnegative exponents, got {a!r}")
    d = 1 + sum(a)
    denom = 1
    for x in a:
        denom *= _fact(x)
    return Fraction(d) ** (n - 2) / denom


def predict_vanishing(d: Tuple[int, int], a: Sequence[int]) -> bool:
    """True when the genus-zero invariant is forced to vanish: either
    the point conditions underdetermine the count, or d+ = d-."""
    dp, dm = d
    if dp == dm:
        return True
    return 1 + sum(a) < dp + dm


def check_divisor(labels: Sequence, d: Tuple[int, int],
                  a: Dict, eps: Dict, new_eps: int):
    """Adding an exponent-zero label multiplies by the matching degree
    and adds 2u times the exponent-lowered terms.

    Returns (ok, lhs, rhs)."""
    labels = list(labels)
    new = 0
    while new in labels:
        new -= 1
    lhs = ogw_genus0(
        labels + [new], d,
        DescendentProblem({**a, new: 0}, {**eps, new: new_eps}),
    )
    dp, dm = d
    deg = dp if new_eps > 0 else dm
    rhs = ogw_genus0(labels, d, DescendentProblem(a, eps)) * deg
    for j in labels:
        if eps[j] == new_eps and a[j] > 0:
            lowered = dict(a)
            lowered[j] -= 1
            rhs = rhs + Laurent.term(Fraction(2), 1) * ogw_genus0(
                labels, d, DescendentProblem(lowered, eps)
            )
    return lhs == rhs, lhs, rhs


def check_trr(d: int, a: Sequence[int]):
    """Topological recursion for all-plus disk invariants of degree
    (d, 0): trading one descendent power at the first point for splits.

    Returns (ok, lhs, rhs)."""
    l = len(a)
    if l < 2:
        raise ValueError("recursion needs at least two points")
    labels = list(range(1, l + 1))
    plus = {k: 1 for k in labels}
    bumped = {k: (a[k - 1] + 1 if k == 1 else a[k - 1]) for k in labels}
    lhs = ogw_genus0(labels, (d, 0), DescendentProblem(bumped, plus))

    rhs = Laurent.zero()
    rest = labels[2:]
    for rsize in range(len(rest) + 1):
        for R in itertools.combinations(rest, rsize):
            S = [k for k in rest if k not in R]
            # contracted-sphere part: a closed three-or-more point
            # genus-zero integral against the remaining disk invariant
            exps = [a[0]] + [a[k - 1] for k in R] + [0]
            closed = psi_integral_g0(exps) if len(exps) >= 3 else Fraction(0)
            if closed:
                sub_labels = [0, 2] + S
                sub_a = {0: 0, 2: a[1]}
                sub_a.update({k: a[k - 1] for k in S})
                sub_eps = {k: 1 for k in sub_labels}
                rhs = rhs + (
                    Laurent.term(Fraction(2 ** rsize) * closed, rsize)
                    * ogw_genus0(sub_labels, (d, 0),
                                 DescendentProblem(sub_a, sub_eps))
                )
            # boundary splittings
            for d1 in range(0, d):
                d2 = d - d1
                left_labels = [1] + list(R)
                left_a = {1: a[0], **{k: a[k - 1] for k in R}}
                left = ogw_genus0(
                    left_labels, (d1, 0),
                    DescendentProblem(left_a, {k: 1 for k in left_labels}),
                )
                if left.is_zero():
                    continue
                right_labels = [2] + S
                right_a = {2: a[1], **{k: a[k - 1] for k in S}}
                right = ogw_genus0(
                    right_labels, (d2, 0),
                    DescendentProblem(right_a, {k: 1 for k in right_labels}),
                )
                rhs = rhs + left * right * d2
    return lhs == rhs, lhs, rhs


def partition_identity_gap(a: Sequence[int]) -> Fraction:
    """Difference between the split sum and its closed form:

        sum over I | J partitions (1 in I, n in J) of
        a_1 * a_I^(|I|-2) * (1 + a_J)^(|J|-1)  -  (1 + a_[n])^(n-2)

    Zero for every tuple of positive integers."""
    n = len(a)
    if n < 2 or any(x <= 0 for x in a):
        raise ValueError("need n >= 2 positive integers")
    total = Fraction(0)
    middle = list(range(1, n - 1))
    for rsize in range(len(middle) + 1):
        for extra in itertools.combinations(middle, rsize):
            I = [0] + list(extra)
            J = [k for k in range(1, n) if k not in extra]
            aI = sum(a[i] for i in I)
            aJ = sum(a[j] for j in J)
            total += (
                Fraction(a[0])
                * Fraction(aI) ** (len(I) - 2)
                * Fraction(1 + aJ) ** (len(J) - 1)
            )
    return total - Fraction(1 + sum(a)) ** (n - 2)


def _fact(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out
