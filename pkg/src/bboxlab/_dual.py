"""Forward-mode dual numbers with a fixed-width tangent.

Metric formulas in :mod:`bboxlab.metrics` are written against the helper
functions below (``exp``, ``sqrt``, ``fmax`` ...), which accept plain floats
or :class:`Dual` values.  Evaluating a formula on duals seeded with unit
tangents yields the value and the full gradient in one pass.

Kink conventions (deterministic subgradients):

* ``fmax(a, b)`` / ``fmin(a, b)`` return ``b`` on ties, so the second
  argument's derivative is taken.
* ``fabs(x)`` at ``x == 0`` has derivative 0.
* ``sqrt(x)`` at ``x == 0`` has derivative 0.
"""

import math


class Dual:
    __slots__ = ("v", "d")

    def __init__(self, v, d):
        self.v = v
        self.d = d

    @classmethod
    def seed(cls, values):
        """One dual per value, each carrying a unit tangent in its own slot."""
        n = len(values)
        return [
            cls(float(x), tuple(1.0 if j == i else 0.0 for j in range(n)))
            for i, x in enumerate(values)
        ]

    def __repr__(self):
        return f"Dual({self.v!r}, {self.d!r})"

    def __add__(self, o):
        if isinstance(o, Dual):
            return Dual(self.v + o.v, tuple(a + b for a, b in zip(self.d, o.d)))
        return Dual(self.v + o, self.d)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Dual):
            return Dual(self.v - o.v, tuple(a - b for a, b in zip(self.d, o.d)))
        return Dual(self.v - o, self.d)

    def __rsub__(self, o):
        return Dual(o - self.v, tuple(-a for a in self.d))

    def __neg__(self):
        return Dual(-self.v, tuple(-a for a in self.d))

    def __mul__(self, o):
        if isinstance(o, Dual):
            sv, ov = self.v, o.v
            return Dual(sv * ov, tuple(a * ov + sv * b for a, b in zip(self.d, o.d)))
        return Dual(self.v * o, tuple(a * o for a in self.d))

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Dual):
            q = self.v / o.v
            return Dual(q, tuple((a - q * b) / o.v for a, b in zip(self.d, o.d)))
        return Dual(self.v / o, tuple(a / o for a in self.d))

    def __rtruediv__(self, o):
        q = o / self.v
        return Dual(q, tuple(-q * a / self.v for a in self.d))

    def __pow__(self, p):
        # constant exponents only
        if p == 0:
            return Dual(1.0, tuple(0.0 for _ in self.d))
        c = p * self.v ** (p - 1)
        return Dual(self.v**p, tuple(c * a for a in self.d))

    def _chain(self, value, slope):
        return Dual(value, tuple(slope * a for a in self.d))

    # comparisons act on the primal value so branch logic works unchanged
    def __lt__(self, o):
        return self.v < _val(o)

    def __le__(self, o):
        return self.v <= _val(o)

    def __gt__(self, o):
        return self.v > _val(o)

    def __ge__(self, o):
        return self.v >= _val(o)

    def __float__(self):
        return float(self.v)


def _val(x):
    return x.v if isinstance(x, Dual) else x


def value(x):
    return float(_val(x))


def tangent(x, n):
    if isinstance(x, Dual):
        return x.d
    return (0.0,) * n


def exp(x):
    if isinstance(x, Dual):
        e = math.exp(x.v)
        return x._chain(e, e)
    return math.exp(x)


def sqrt(x):
    if isinstance(x, Dual):
        r = math.sqrt(x.v)
        return x._chain(r, 0.5 / r if r > 0.0 else 0.0)
    return math.sqrt(x)


def atan(x):
    if isinstance(x, Dual):
        return x._chain(math.atan(x.v), 1.0 / (1.0 + x.v * x.v))
    return math.atan(x)


def asin(x):
    if isinstance(x, Dual):
        return x._chain(math.asin(x.v), 1.0 / math.sqrt(1.0 - x.v * x.v))
    return math.asin(x)


def sin(x):
    if isinstance(x, Dual):
        return x._chain(math.sin(x.v), math.cos(x.v))
    return math.sin(x)


def fabs(x):
    if isinstance(x, Dual):
        if x.v > 0.0:
            return x
        if x.v < 0.0:
            return -x
        return x._chain(0.0, 0.0)
    return abs(x)


def fmax(a, b):
    return a if a > b else b


def fmin(a, b):
    return a if a < b else b
