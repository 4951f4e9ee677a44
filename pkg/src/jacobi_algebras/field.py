"""Exact scalar fields: the rationals and prime fields GF(p) with p odd.

Scalars are plain Python numbers. Over Q they are ``int`` or
``fractions.Fraction``; over GF(p) they are ints in ``range(p)``. Arithmetic
is done with the ordinary operators and then passed through ``norm``, which
keeps hot loops free of wrapper objects.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import FieldError, ScalarParseError

Scalar = "int | Fraction"
Vec = tuple

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """Q when ``p == 0``, otherwise GF(p) for an odd prime ``p``."""

    p: int = 0

    def __post_init__(self):
        if self.p == 0:
            return
        if not _is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.p == 2:
            raise FieldError("characteristic 2 is not supported")

    @classmethod
    def parse(cls, text: str) -> "Field":
        t = text.strip()
        if t.upper() in ("Q", "QQ"):
            return cls(0)
        m = re.fullmatch(r"(?i)GF\s*[:(]?\s*(\d+)\s*\)?", t)
        if not m:
            raise FieldError(f"unrecognized field {text!r}; expected 'Q' or 'GF:p'")
        return cls(int(m.group(1)))

    def __str__(self) -> str:
        return f"GF:{self.p}" if self.p else "Q"

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    @property
    def char(self) -> int:
        return self.p

    @property
    def size(self) -> int | None:
        return self.p or None

    # -- scalars ---------------------------------------------------------

    def __call__(self, value) -> Scalar:
        """Coerce an int, Fraction or string such as ``"-3/4"``."""
        if isinstance(value, str):
            m = _RATIONAL.match(value)
            if not m:
                raise ScalarParseError(f"cannot parse scalar {value!r}")
            num = int(m.group(1))
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise ScalarParseError(f"zero denominator in {value!r}")
            value = Fraction(num, den)
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise ScalarParseError(f"unsupported scalar {value!r}")
        if self.p:
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise ScalarParseError(f"{value} has no image in GF({self.p})")
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return value % self.p
        if isinstance(value, Fraction) and value.denominator == 1:
            return value.numerator
        return value

    def norm(self, x) -> Scalar:
        if self.p:
            return x % self.p
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def vec(self, xs: Iterable) -> Vec:
        if self.p:
            p = self.p
            return tuple(x % p for x in xs)
        return tuple(self.norm(x) for x in xs)

    def inv(self, x) -> Scalar:
        if self.p:
            if x % self.p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(x, -1, self.p)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.norm(Fraction(1) / x)

    def div(self, a, b) -> Scalar:
        return self.norm(a * self.inv(b))

    def half(self) -> Scalar:
        return self.inv(2)

    def elements(self) -> Iterator[int]:
        if not self.p:
            raise FieldError("Q has no finite element list")
        return iter(range(self.p))

    def nonzero(self) -> Iterator[int]:
        return iter(range(1, self.p))

    def is_square(self, x) -> bool:
        x = self.norm(x)
        if self.p:
            return x == 0 or pow(x, (self.p - 1) // 2, self.p) == 1
        x = Fraction(x)
        if x < 0:
            return False
        return _is_int_square(x.numerator) and _is_int_square(x.denominator)

    def format(self, x) -> str:
        x = self.norm(x)
        if isinstance(x, Fraction):
            return f"{x.numerator}/{x.denominator}"
        return str(x)

    def random(self, rng, bound: int = 3) -> Scalar:
        if self.p:
            return rng.randrange(self.p)
        return rng.randint(-bound, bound)


def _is_int_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


Q = Field(0)


def GF(p: int) -> Field:
    return Field(p)
