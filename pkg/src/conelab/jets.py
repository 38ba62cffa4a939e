"""Batched truncated multivariate Taylor (jet) arithmetic.

A ``Jet`` stores the Taylor coefficients of a scalar quantity at a point:

    f(x0 + h) = sum_alpha  c[alpha] * h^alpha,   |alpha| <= order,

with c[alpha] = (d^alpha f)(x0) / alpha!.  Coefficients live in a dense
``(batch, ncoef)`` array; the multi-index list is graded by total degree, so
truncating a jet to a lower order is a prefix slice.  Products go through a
precomputed convolution table (a sparse scatter matrix), which keeps the whole
engine vectorised over sample batches.  Analytic primitives (sin, exp, sqrt,
reciprocal, ...) are Horner evaluations of the outer function's univariate
Taylor series in the zero-constant part of the argument; on polynomial data
the arithmetic is exact up to roundoff.

Extracting a partial derivative lowers the available order by the derivative
degree; going past order 0 raises ``JetOrderError``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .errors import JetOrderError


@lru_cache(maxsize=None)
def _table(dim: int, order: int):
    """Multi-index bookkeeping for jets of a given dimension and order."""
    exps = []
    for deg in range(order + 1):
        exps.extend(sorted(_compositions(deg, dim)))
    pos = {e: i for i, e in enumerate(exps)}
    # prefix length of each order: all multi-indices with degree <= k
    sizes = [0] * (order + 1)
    for e in exps:
        for k in range(sum(e), order + 1):
            sizes[k] += 1
    return _JetTable(dim, order, tuple(exps), pos, tuple(sizes))


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class _JetTable:
    """Cached multiplication / differentiation tables (one per dim, order)."""

    def __init__(self, dim, order, exps, pos, sizes):
        self.dim = dim
        self.order = order
        self.exps = exps
        self.pos = pos
        self.sizes = sizes
        self._mul = None
        self._diff = None

    @property
    def mul(self):
        if self._mul is None:
            n = self.sizes[self.order]
            left, right, target = [], [], []
            for k, gamma in enumerate(self.exps):
                for alpha in _splits(gamma):
                    beta = tuple(g - a for g, a in zip(gamma, alpha))
                    left.append(self.pos[alpha])
                    right.append(self.pos[beta])
                    target.append(k)
            left = np.asarray(left)
            right = np.asarray(right)
            target = np.asarray(target)
            scatter = sp.csr_matrix(
                (np.ones(len(target)), (np.arange(len(target)), target)),
                shape=(len(target), n),
            )
            self._mul = (left, right, scatter)
        return self._mul

    @property
    def diff(self):
        # diff[i] = (source index, factor) rows graded like the index list;
        # the first sizes[k-1] rows differentiate an order-k jet.
        if self._diff is None:
            maps = []
            for i in range(self.dim):
                src = np.empty(self.sizes[self.order - 1] if self.order else 0, int)
                fac = np.empty_like(src, dtype=float)
                for t, alpha in enumerate(self.exps[: len(src)]):
                    shifted = list(alpha)
                    shifted[i] += 1
                    src[t] = self.pos[tuple(shifted)]
                    fac[t] = alpha[i] + 1
                maps.append((src, fac))
            self._diff = maps
        return self._diff


def _splits(gamma):
    """All alpha with alpha <= gamma componentwise."""
    ranges = [range(g + 1) for g in gamma]
    out = [()]
    for r in ranges:
        out = [t + (v,) for t in out for v in r]
    return out


def _as_batch(value):
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = arr[None]
    return arr


class Jet:
    """One truncated Taylor expansion, batched over sample points."""

    __slots__ = ("dim", "order", "coeffs", "base_point")
    __array_ufunc__ = None  # keep numpy from broadcasting over us
    __array_priority__ = 1000

    def __init__(self, dim, order, coeffs, base_point=None):
        self.dim = dim
        self.order = order
        self.coeffs = coeffs  # shape (batch, sizes[order])
        self.base_point = base_point

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, value, dim, order, base_point=None):
        v = _as_batch(value)
        c = np.zeros((v.shape[0], _table(dim, order).sizes[order]))
        c[:, 0] = v
        return cls(dim, order, c, base_point)

    @classmethod
    def variables(cls, point, order):
        """Seed jets for the coordinates of ``point`` (rows = batch)."""
        pt = np.atleast_2d(np.asarray(point, dtype=float))
        dim = pt.shape[1]
        tab = _table(dim, order)
        out = []
        for i in range(dim):
            c = np.zeros((pt.shape[0], tab.sizes[order]))
            c[:, 0] = pt[:, i]
            if order >= 1:
                unit = [0] * dim
                unit[i] = 1
                c[:, tab.pos[tuple(unit)]] = 1.0
            out.append(cls(dim, order, c, base_point=pt))
        return out

    # -- queries -----------------------------------------------------------

    @property
    def value(self):
        return self.coeffs[:, 0]

    @property
    def batch(self):
        return self.coeffs.shape[0]

    def coefficient(self, alpha):
        alpha = tuple(alpha)
        if sum(alpha) > self.order:
            raise JetOrderError(
                f"coefficient {alpha} exceeds jet order {self.order}"
            )
        return self.coeffs[:, _table(self.dim, self.order).pos[alpha]]

    def derivative(self, alpha):
        """d^alpha f at the base point (coefficient times alpha!)."""
        fac = 1.0
        for a in alpha:
            for m in range(2, a + 1):
                fac *= m
        return self.coefficient(alpha) * fac

    def truncate(self, order):
        if order >= self.order:
            return self
        tab = _table(self.dim, self.order)
        return Jet(self.dim, order, self.coeffs[:, : tab.sizes[order]], self.base_point)

    def partial(self, i):
        """Jet of df/dx_i; available order drops by one."""
        if self.order < 1:
            raise JetOrderError("derivative requested beyond jet order")
        src, fac = _table(self.dim, self.order).diff[i]
        n = _table(self.dim, self.order).sizes[self.order - 1]
        return Jet(self.dim, self.order - 1, self.coeffs[:, src[:n]] * fac[:n], self.base_point)

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.dim != self.dim:
                raise ValueError("jet dimension mismatch")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            c = self.coeffs.copy()
            c[:, 0] = c[:, 0] + _as_batch(other)
            return Jet(self.dim, self.order, c, self.base_point)
        order = min(self.order, o.order)
        bp = self.base_point if self.base_point is not None else o.base_point
        return Jet(
            self.dim,
            order,
            self.truncate(order).coeffs + o.truncate(order).coeffs,
            bp,
        )

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.dim, self.order, -self.coeffs, self.base_point)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -np.asarray(other, float))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            w = _as_batch(other)
            return Jet(self.dim, self.order, self.coeffs * w[:, None], self.base_point)
        order = min(self.order, o.order)
        tab = _table(self.dim, order)
        left, right, scatter = tab.mul
        a = self.truncate(order).coeffs
        b = o.truncate(order).coeffs
        prod = a[:, left] * b[:, right]
        bp = self.base_point if self.base_point is not None else o.base_point
        return Jet(self.dim, order, prod @ scatter, bp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return self * (1.0 / _as_batch(other))
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, exponent):
        if isinstance(exponent, (int, np.integer)):
            if exponent < 0:
                return (self ** (-exponent)).reciprocal()
            out = Jet.constant(np.ones(self.batch), self.dim, self.order, self.base_point)
            for _ in range(exponent):
                out = out * self
            return out
        return self.power(float(exponent))

    # -- analytic primitives ------------------------------------------------

    def _compose(self, series):
        """Horner evaluation of sum_k series[k] * (self - value)^k."""
        u = Jet(self.dim, self.order, self.coeffs.copy(), self.base_point)
        u.coeffs[:, 0] = 0.0
        out = Jet.constant(series[-1], self.dim, self.order, self.base_point)
        for k in range(len(series) - 2, -1, -1):
            out = out * u
            out.coeffs[:, 0] += series[k]
        return out

    def sin(self):
        v = self.value
        table = [np.sin(v), np.cos(v), -np.sin(v), -np.cos(v)]
        series, fac = [], 1.0
        for k in range(self.order + 1):
            if k:
                fac *= k
            series.append(table[k % 4] / fac)
        return self._compose(series)

    def cos(self):
        v = self.value
        table = [np.cos(v), -np.sin(v), -np.cos(v), np.sin(v)]
        series, fac = [], 1.0
        for k in range(self.order + 1):
            if k:
                fac *= k
            series.append(table[k % 4] / fac)
        return self._compose(series)

    def exp(self):
        e = np.exp(self.value)
        series, fac = [], 1.0
        for k in range(self.order + 1):
            if k:
                fac *= k
            series.append(e / fac)
        return self._compose(series)

    def log(self):
        v = self.value
        series = [np.log(v)]
        for k in range(1, self.order + 1):
            series.append((-1.0) ** (k - 1) / (k * v**k))
        return self._compose(series)

    def power(self, p: float):
        """self**p for real p (positive base values)."""
        v = self.value
        series, coef = [], 1.0
        for k in range(self.order + 1):
            if k:
                coef *= (p - k + 1) / k
            series.append(coef * v ** (p - k))
        return self._compose(series)

    def sqrt(self):
        return self.power(0.5)

    def reciprocal(self):
        v = self.value
        series = [((-1.0) ** k) * v ** (-1 - k) for k in range(self.order + 1)]
        return self._compose(series)

    def __repr__(self):
        return f"Jet(dim={self.dim}, order={self.order}, batch={self.batch})"


# The name used in discussions of the data model.
JetScalar = Jet


# -- dual-use math helpers (jets or plain arrays) ----------------------------

def sin(v):
    return v.sin() if isinstance(v, Jet) else np.sin(v)


def cos(v):
    return v.cos() if isinstance(v, Jet) else np.cos(v)


def exp(v):
    return v.exp() if isinstance(v, Jet) else np.exp(v)


def log(v):
    return v.log() if isinstance(v, Jet) else np.log(v)


def sqrt(v):
    return v.sqrt() if isinstance(v, Jet) else np.sqrt(v)


def value_of(v):
    return v.value if isinstance(v, Jet) else _as_batch(v)
