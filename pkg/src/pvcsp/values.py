"""Exact rational values extended with infinities.

Finite values are `fractions.Fraction`; the infinities are singletons that
compare and add the way cost arithmetic needs them to.  No floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class _PlusInf:
    """The +inf cost: absorbing under addition, above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __add__(self, other):
        if isinstance(other, (Fraction, int, _PlusInf)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, (Fraction, int)):
            if other > 0:
                return self
            raise ArithmeticError("inf scaled by a non-positive weight")
        return NotImplemented

    __rmul__ = __mul__

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


class _MinusInf:
    """The -inf value of an unbounded program; never an input cost."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self


PLUS_INF = _PlusInf()
MINUS_INF = _MinusInf()

#: A cost table entry: finite rational or +inf.
ExtRat = Union[Fraction, _PlusInf]
#: The value of a relaxation program: may also be -inf (unbounded below).
ExtVal = Union[Fraction, _PlusInf, _MinusInf]


def is_finite(v: ExtVal) -> bool:
    return isinstance(v, Fraction)


def parse_value(text: str) -> ExtRat:
    """Parse the canonical rendering: ``inf`` or ``[-]digits[/digits]``."""
    text = text.strip()
    if text == "inf":
        return PLUS_INF
    if text == "-inf":
        raise ValueError("-inf is not a valid cost value")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_value(v: ExtVal) -> str:
    if v is PLUS_INF:
        return "inf"
    if v is MINUS_INF:
        return "-inf"
    return str(v)
