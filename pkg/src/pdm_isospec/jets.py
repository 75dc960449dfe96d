"""Arrays of derivatives carried through arithmetic.

A ``Jet`` of order ``K`` holds ``f, f', ..., f^(K)`` sampled on a common set of
points.  Products, quotients, square roots, exponentials and logs propagate the
derivatives exactly (Leibniz rule and the usual recurrences), so formulas that
involve ``U''/U`` or ``M'''`` can be written literally without any finite
differencing.  Combining jets of different order truncates to the lower one.
"""

from __future__ import annotations

from math import comb

import numpy as np


class Jet:
    __array_priority__ = 100

    def __init__(self, data):
        data = np.asarray(data)
        if data.ndim == 1:
            data = data[:, None]
        if not np.iscomplexobj(data):
            data = data.astype(float)
        self.data = data

    @classmethod
    def constant(cls, value, like: "Jet | int", npts: int | None = None) -> "Jet":
        """Jet of a constant with the order (and point count) of ``like``."""
        if isinstance(like, Jet):
            order, npts = like.order, like.npts
        else:
            order = like
        data = np.zeros((order + 1, npts), dtype=np.result_type(value, float))
        data[0] = value
        return cls(data)

    @classmethod
    def variable(cls, x, order: int) -> "Jet":
        """The identity function ``f(x) = x``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        data = np.zeros((order + 1, x.size))
        data[0] = x
        if order >= 1:
            data[1] = 1.0
        return cls(data)

    @property
    def order(self) -> int:
        return self.data.shape[0] - 1

    @property
    def npts(self) -> int:
        return self.data.shape[1]

    @property
    def value(self) -> np.ndarray:
        return self.data[0]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.data[k]

    def __len__(self) -> int:
        return self.data.shape[0]

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, npts={self.npts}, dtype={self.data.dtype})"

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        return Jet(self.data[: order + 1])

    def d(self, k: int = 1) -> "Jet":
        """Derivative jet: drops the lowest ``k`` entries."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative {k}")
        return Jet(self.data[k:])

    @property
    def real(self) -> "Jet":
        return Jet(self.data.real.copy())

    @property
    def imag(self) -> "Jet":
        return Jet(self.data.imag.copy())

    def conj(self) -> "Jet":
        return Jet(np.conj(self.data))

    # arithmetic

    def _pair(self, other):
        if isinstance(other, Jet):
            k = min(self.order, other.order)
            return self.data[: k + 1], other.data[: k + 1]
        return self.data, None

    def __neg__(self):
        return Jet(-self.data)

    def __add__(self, other):
        a, b = self._pair(other)
        if b is None:
            out = a.astype(np.result_type(a, other), copy=True)
            out[0] = out[0] + other
            return Jet(out)
        return Jet(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if b is None:
            return Jet(a * other)
        k = a.shape[0] - 1
        out = np.zeros((k + 1, a.shape[1]), dtype=np.result_type(a, b))
        for n in range(k + 1):
            for j in range(n + 1):
                out[n] += comb(n, j) * a[j] * b[n - j]
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.data / other)
        a, b = self._pair(other)
        return _divide(a, b)

    def __rtruediv__(self, other):
        num = np.zeros_like(self.data, dtype=np.result_type(self.data, other))
        num[0] = other
        return _divide(num, self.data)

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("jets support integer powers only; use sqrt/exp/log")
        if n < 0:
            return 1.0 / (self ** (-n))
        out = Jet.constant(1.0, self)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


def _divide(a, b):
    """Jet of ``a / b`` from ``a = h b`` solved order by order."""
    k = a.shape[0] - 1
    out = np.zeros((k + 1, max(a.shape[1], b.shape[1])), dtype=np.result_type(a, b))
    for n in range(k + 1):
        acc = np.broadcast_to(a[n], out[n].shape).copy()
        for j in range(1, n + 1):
            acc = acc - comb(n, j) * b[j] * out[n - j]
        out[n] = acc / b[0]
    return Jet(out)


def sqrt(f: Jet) -> Jet:
    a = f.data
    k = f.order
    out = np.zeros_like(a)
    out[0] = np.sqrt(a[0])
    for n in range(1, k + 1):
        acc = a[n].copy()
        for j in range(1, n):
            acc = acc - comb(n, j) * out[j] * out[n - j]
        out[n] = acc / (2.0 * out[0])
    return Jet(out)


def exp(f: Jet) -> Jet:
    a = f.data
    k = f.order
    out = np.zeros_like(a)
    out[0] = np.exp(a[0])
    # h' = f' h, differentiated n - 1 times
    for n in range(1, k + 1):
        for j in range(n):
            out[n] += comb(n - 1, j) * a[j + 1] * out[n - 1 - j]
    return Jet(out)


def log(f: Jet) -> Jet:
    a = f.data
    out = np.zeros_like(a)
    out[0] = np.log(a[0])
    if f.order:
        out[1:] = (f.d() / f.truncate(f.order - 1)).data
    return Jet(out)
