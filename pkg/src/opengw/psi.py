"""Descendent and Hodge-descendent integrals over Deligne-Mumford spaces.

This is the per-vertex kernel behind every localization contribution:

* genus 0:  <tau_{b_1} ... tau_{b_n}> = (n-3)!/prod(b_i!)  when sum b = n-3
* genus 1:  string/dilaton reduction down to <tau_1>_1 = 1/24
* genus >= 2, pure psi:  the KdV / Virasoro recursion on intersection
  numbers (double-factorial form)
* lambda_1 in genus 1:  string-equation chain down to the seed 1/24

Hodge insertions lambda_k with k >= 1 in genus >= 2 are out of scope and
raise HodgeUnsupportedError; callers turn that into a diagnostic naming
the offending vertex.

All values are Fractions and all recursions are memoized by
(g, sorted exponents[, k]).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Tuple

PSI_MEMO: dict = {}
HODGE1_MEMO: dict = {}


class UnstableError(ValueError):
    """(g, n) outside the stable range 2g - 2 + n > 0."""


class HodgeUnsupportedError(ValueError):
    """A lambda_k insertion with k >= 1 in genus >= 2 was requested."""


def _dfact(m: int) -> int:
    # odd double factorial, with (-1)!! = 1
    assert m >= -1 and m % 2 == 1
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def psi_integral_g0(b_vec: Sequence[int]) -> Fraction:
    """Pure psi integral over the genus-0 space with n marked points.

    Returns (n-3)!/prod(b_i!) when sum(b) = n-3, else 0.  Raises
    UnstableError for n < 3: an unstable vertex must be handled by the
    caller as part of the unstable-vertex dictionary, never here.
    """
    b = _check_exponents(b_vec)
    n = len(b)
    if n < 3:
        raise UnstableError(
            f"genus-0 integral needs n >= 3 marked points, got n = {n}"
        )
    if sum(b) != n - 3:
        return Fraction(0)
    num = math.factorial(n - 3)
    den = 1
    for x in b:
        den *= math.factorial(x)
    return Fraction(num, den)


def descendent_integral(g: int, b_vec: Sequence[int]) -> Fraction:
    """Exact value of the pure-psi integral over the genus-g space."""
    b = _check_exponents(b_vec)
    if g < 0:
        raise ValueError(f"genus must be nonnegative, got {g}")
    if 2 * g - 2 + len(b) <= 0:
        raise UnstableError(f"(g, n) = ({g}, {len(b)}) is unstable")
    return _psi(g, tuple(sorted(b)))


def hodge_descendent_integral(g: int, b_vec: Sequence[int],
                              k: int) -> Fraction:
    """Integral of psi^b * lambda_k over the genus-g space.

    Supported exactly: k = 0 (pure psi), all of genus 0, and genus 1
    with k = 1.  Genus >= 2 with k >= 1 raises HodgeUnsupportedError.
    """
    b = _check_exponents(b_vec)
    if g < 0:
        raise ValueError(f"genus must be nonnegative, got {g}")
    if not 0 <= k <= g:
        raise ValueError(f"Hodge index k = {k} outside 0..g = 0..{g}")
    if 2 * g - 2 + len(b) <= 0:
        raise UnstableError(f"(g, n) = ({g}, {len(b)}) is unstable")
    if k == 0:
        return _psi(g, tuple(sorted(b)))
    if g == 1:
        return _hodge1(tuple(sorted(b)))
    raise HodgeUnsupportedError(
        f"Hodge kernel unsupported: lambda_{k} in genus {g}"
    )


def _check_exponents(b_vec: Sequence[int]) -> Tuple[int, ...]:
    b = tuple(b_vec)
    for x in b:
        if not isinstance(x, int) or x < 0:
            raise ValueError(f"psi exponents must be nonnegative integers, "
                             f"got {x!r}")
    return b


def _psi(g: int, b: Tuple[int, ...]) -> Fraction:
    """Memoized pure-psi integral; b sorted.  Unstable or dimension
    mismatch yields 0 (used freely inside recursions)."""
    n = len(b)
    if 2 * g - 2 + n <= 0:
        return Fraction(0)
    if sum(b) != 3 * g - 3 + n:
        return Fraction(0)
    key = (g, b)
    if key in PSI_MEMO:
        return PSI_MEMO[key]

    if g == 0:
        val = psi_integral_g0(b)
    elif g == 1:
        val = _psi_g1(b)
    else:
        val = _psi_dvv(g, b)
    PSI_MEMO[key] = val
    return val


def _psi_g1(b: Tuple[int, ...]) -> Fraction:
    # string if some exponent vanishes, else all exponents are 1 and the
    # dilaton equation applies; terminates at <tau_1>_1 = 1/24.
    n = len(b)
    if n == 1:
        assert b == (1,)
        return Fraction(1, 24)
    if 0 in b:
        rest = list(b)
        rest.remove(0)
        total = Fraction(0)
        for j in range(len(rest)):
            if rest[j] >= 1:
                nxt = rest[:j] + [rest[j] - 1] + rest[j + 1:]
                total += _psi(1, tuple(sorted(nxt)))
        return total
    assert all(x == 1 for x in b)
    return (2 * 1 - 2 + n - 1) * _psi(1, (1,) * (n - 1))


def _psi_dvv(g: int, b: Tuple[int, ...]) -> Fraction:
    # Virasoro/KdV recursion on the largest exponent.  With the dimension
    # constraint satisfied and g >= 2 the largest exponent is >= 1, so
    # the recursion always strictly lowers (g, n) lexicographically.
    a1 = max(b)
    assert a1 >= 1
    rest = list(b)
    rest.remove(a1)
    rest = tuple(rest)
    m = len(rest)

    total = Fraction(0)
    for j in range(m):
        co = Fraction(_dfact(2 * a1 + 2 * rest[j] - 1),
                      _dfact(2 * rest[j] - 1))
        nxt = rest[:j] + (a1 + rest[j] - 1,) + rest[j + 1:]
        total += co * _psi(g, tuple(sorted(nxt)))

    half = Fraction(0)
    for bb in range(a1 - 1):
        cc = a1 - 2 - bb
        co = Fraction(_dfact(2 * bb + 1) * _dfact(2 * cc + 1))
        half += co * _psi(g - 1, tuple(sorted(rest + (bb, cc))))
        for g1 in range(g + 1):
            g2 = g - g1
            for mask in range(1 << m):
                left = tuple(rest[i] for i in range(m) if mask >> i & 1)
                right = tuple(rest[i] for i in range(m) if not mask >> i & 1)
                half += co * _psi(g1, tuple(sorted(left + (bb,)))) \
                    * _psi(g2, tuple(sorted(right + (cc,))))
    total += Fraction(1, 2) * half
    return total / _dfact(2 * a1 + 1)


def _hodge1(b: Tuple[int, ...]) -> Fraction:
    """Integral of psi^b * lambda_1 in genus 1; b sorted.  The dimension
    forces sum(b) = n - 1, so some exponent is 0 whenever n >= 2 and the
    string equation (lambda_1 pulls back) reduces to the seed on n = 1."""
    n = len(b)
    if sum(b) != n - 1:
        return Fraction(0)
    if b in HODGE1_MEMO:
        return HODGE1_MEMO[b]
    if n == 1:
        assert b == (0,)
        return Fraction(1, 24)
    assert b[0] == 0  # sorted, and sum(b) = n-1 < n forces a zero
    rest = list(b[1:])
    total = Fraction(0)
    for j in range(len(rest)):
        if rest[j] >= 1:
            nxt = rest[:j] + [rest[j] - 1] + rest[j + 1:]
            total += _hodge1(tuple(sorted(nxt)))
    HODGE1_MEMO[b] = total
    return total
