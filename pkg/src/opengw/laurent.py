"""Exact Laurent polynomials in a single variable u over the rationals.

A value is a sparse map exponent -> nonzero Fraction.  All arithmetic is
exact; there is no floating point anywhere in this package.

    >>> a = Laurent.term(1, 1) + Laurent.one()          # 1 + u
    >>> b = Laurent.one() - Laurent.term(1, 1)          # 1 - u
    >>> print(a * b)
    1*u^0 + -1*u^2
    >>> (a * b).coeff(2)
    Fraction(-1, 1)
    >>> Laurent.from_json(a.to_json()) == a
    True
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Tuple, Union

Scalar = Union[int, Fraction]


class Laurent:
    """Immutable Laurent polynomial in u with Fraction coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Optional[Mapping[int, Scalar]] = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v != 0:
                    c[int(k)] = v
        self._c = c

    # --- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Laurent":
        return Laurent()

    @staticmethod
    def one() -> "Laurent":
        return Laurent({0: 1})

    @staticmethod
    def term(coeff: Scalar, exp: int = 0) -> "Laurent":
        """The monomial coeff * u^exp."""
        return Laurent({exp: Fraction(coeff)})

    @staticmethod
    def u(exp: int = 1) -> "Laurent":
        return Laurent({exp: 1})

    # --- inspection ---------------------------------------------------

    def coeff(self, exp: int) -> Fraction:
        """Coefficient of u^exp (0 if absent)."""
        return self._c.get(exp, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        """Terms in increasing exponent order."""
        for k in sorted(self._c):
            yield k, self._c[k]

    def as_monomial(self) -> Optional[Tuple[int, Fraction]]:
        """(exponent, coefficient) if this has exactly one term, else None.

        Zero is reported as None as well; use is_zero() to tell the two
        apart.
        """
        if len(self._c) != 1:
            return None
        ((k, v),) = self._c.items()
        return k, v

    def min_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return min(self._c)

    def max_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return max(self._c)

    # --- ring operations ----------------------------------------------

    def __add__(self, other: "Laurent") -> "Laurent":
        if not isinstance(other, Laurent):
            return NotImplemented
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, Fraction(0)) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        out = Laurent()
        out._c = c
        return out

    def __neg__(self) -> "Laurent":
        out = Laurent()
        out._c = {k: -v for k, v in self._c.items()}
        return out

    def __sub__(self, other: "Laurent") -> "Laurent":
        if not isinstance(other, Laurent):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["Laurent", Scalar]) -> "Laurent":
        if isinstance(other, (int, Fraction)):
            other = Laurent.term(other, 0)
        if not isinstance(other, Laurent):
            return NotImplemented
        c: dict = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                s = c.get(k, Fraction(0)) + v1 * v2
                if s:
                    c[k] = s
                else:
                    c.pop(k, None)
        out = Laurent()
        out._c = c
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Laurent":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Laurent.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other: Union["Laurent", Scalar]) -> "Laurent":
        """Exact division by a nonzero scalar or monomial."""
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if f == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / f)
        if isinstance(other, Laurent):
            m = other.as_monomial()
            if m is None:
                raise ValueError("can only divide by monomials")
            k, v = m
            return self * Laurent.term(1 / v, -k)
        return NotImplemented

    # --- comparison / hashing -----------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Laurent) and self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    # --- text and JSON ------------------------------------------------

    def __str__(self) -> str:
        """Canonical form: terms in increasing exponent, "num/den*u^k"."""
        if not self._c:
            return "0"
        return " + ".join(f"{v}*u^{k}" for k, v in self.items())

    def __repr__(self) -> str:
        return f"Laurent({self})"

    def to_json(self) -> str:
        """JSON object {"<exponent>": "<num>/<den>"} with sorted keys."""
        return json.dumps(
            {str(k): str(v) for k, v in self.items()}, sort_keys=False
        )

    def to_json_obj(self) -> dict:
        return {str(k): str(v) for k, v in self.items()}

    @staticmethod
    def from_json(text: Union[str, Mapping[str, str]]) -> "Laurent":
        obj = json.loads(text) if isinstance(text, str) else text
        if not isinstance(obj, Mapping):
            raise ValueError("expected a JSON object of exponent -> rational")
        return Laurent({int(k): Fraction(v) for k, v in obj.items()})


def prod(values, start: Optional[Laurent] = None) -> Laurent:
    """Product of an iterable of Laurent values (empty product = 1)."""
    out = Laurent.one() if start is None else start
    for v in values:
        out = out * v
    return out
