"""Point values: Euclidean coordinate tuples or symbolic subshift elements.

A Point is the universal currency of maps and metrics.  Euclidean points
carry a tuple of exact numbers (Fractions, or floats restricted to dyadic
values, which are exact in binary).  Symbolic points wrap an OtwElement.
Canonical ordering is lexicographic on coordinates and shortlex on symbols;
the sample of every system is stored in this order.
"""

from __future__ import annotations

from fractions import Fraction

from .otw import OtwElement


class SqrtValue:
    """Exact nonnegative sqrt(q) for rational q, comparable against rationals.

    Only comparisons, max(), and float() are needed by the metric code, so
    arithmetic is intentionally absent.  Comparisons square the rational side
    (both sides nonnegative), staying exact.
    """

    __slots__ = ("squared",)

    def __init__(self, squared):
        if squared < 0:
            raise ValueError("negative radicand")
        self.squared = Fraction(squared)

    def _cmp_key(self, other):
        if isinstance(other, SqrtValue):
            return other.squared
        if other < 0:
            return None  # we are >= 0 > other
        return Fraction(other) * Fraction(other)

    def __lt__(self, other):
        k = self._cmp_key(other)
        return False if k is None else self.squared < k

    def __le__(self, other):
        k = self._cmp_key(other)
        return False if k is None else self.squared <= k

    def __gt__(self, other):
        k = self._cmp_key(other)
        return True if k is None else self.squared > k

    def __ge__(self, other):
        k = self._cmp_key(other)
        return True if k is None else self.squared >= k

    def __eq__(self, other):
        k = self._cmp_key(other)
        return k is not None and self.squared == k

    def __hash__(self):
        return hash(("sqrt", self.squared))

    def __float__(self):
        return float(self.squared) ** 0.5

    def __repr__(self):
        return "sqrt(%s)" % (self.squared,)


class Point:
    """Tagged immutable point; equality and hashing delegate to the payload."""

    __slots__ = ("tag", "data")

    def __init__(self, tag, data):
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "data", data)

    def __setattr__(self, *a):
        raise AttributeError("Point is immutable")

    @property
    def coords(self):
        if self.tag != "euclidean":
            raise ValueError("not a Euclidean point")
        return self.data

    @property
    def elem(self):
        if self.tag != "symbolic":
            raise ValueError("not a symbolic point")
        return self.data

    def sort_key(self):
        if self.tag == "euclidean":
            return self.data
        return self.data.sort_key()

    def __eq__(self, other):
        return (
            isinstance(other, Point)
            and self.tag == other.tag
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.tag, self.data))

    def __repr__(self):
        if self.tag == "euclidean":
            if len(self.data) == 1:
                return "P(%s)" % (self.data[0],)
            return "P%s" % (tuple(self.data),)
        return "S[%r]" % (self.data,)


def euclidean(*coords):
    return Point("euclidean", tuple(coords))


def symbolic(elem):
    if not isinstance(elem, OtwElement):
        raise TypeError("symbolic points wrap OtwElement values")
    return Point("symbolic", elem)


def abs_metric(x, y):
    """1-D absolute difference; exact on Fractions and dyadic floats."""
    return abs(x.coords[0] - y.coords[0])


def scaled_plane_metric(y_weight):
    """Euclidean metric on stored coordinates (dx^2 + y_weight*dy^2)^(1/2),
    returned as an exactly comparable SqrtValue.  Used when the second
    coordinate is stored in units of an irrational scale."""

    def metric(x, y):
        dx = x.coords[0] - y.coords[0]
        dy = x.coords[1] - y.coords[1]
        return SqrtValue(Fraction(dx) * dx + y_weight * Fraction(dy) * dy)

    return metric
