"""Bivariate truncated Taylor (jet) arithmetic.

A ``Jet2`` stores the Taylor coefficients c_ij of a scalar function about a
base point, for monomials du^i dv^j with i + j <= k.  All curvature and
singularity formulas in this package are evaluated through this one engine,
so there is a single derivative budget instead of symbolic differentiation
or finite-difference noise.

Coefficients are kept in a packed 1-d array in graded lexicographic order
(degree d block starts at d(d+1)/2, entry j within the block is c_{d-j,j}).
Coefficients may also be numpy arrays of shape (n_coeffs, N): the same code
then propagates jets over N base points at once, which is how domain grids
are scanned.

Each jet carries two orders:

* ``k``      -- the allocation order (array layout),
* ``order``  -- the highest total degree whose coefficients are trustworthy.

Differentiation lowers ``order`` by one; binary operations take the minimum.
Coefficients above ``order`` are kept identically zero.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import (
    DivisionByZeroConstantTerm,
    NegativeSqrtConstantTerm,
    OrderExhausted,
)

DEFAULT_ORDER = 6


@lru_cache(maxsize=None)
def _tables(k: int):
    """Precomputed index tables for allocation order k."""
    exps = [(d - j, j) for d in range(k + 1) for j in range(d + 1)]
    index = {e: i for i, e in enumerate(exps)}
    n = len(exps)

    ia, ib, iout = [], [], []
    for a, (i1, j1) in enumerate(exps):
        for b, (i2, j2) in enumerate(exps):
            if i1 + j1 + i2 + j2 <= k:
                ia.append(a)
                ib.append(b)
                iout.append(index[(i1 + i2, j1 + j2)])

    def _deriv(axis):
        src, dst, fac = [], [], []
        for a, (i, j) in enumerate(exps):
            if i + j >= k:
                continue
            if axis == 0:
                src.append(index[(i + 1, j)])
                fac.append(i + 1.0)
            else:
                src.append(index[(i, j + 1)])
                fac.append(j + 1.0)
            dst.append(a)
        return np.array(dst), np.array(src), np.array(fac)

    degrees = np.array([i + j for i, j in exps])
    masks = [degrees <= o for o in range(k + 1)]
    return {
        "n": n,
        "exps": exps,
        "index": index,
        "mul": (np.array(ia), np.array(ib), np.array(iout)),
        "du": _deriv(0),
        "dv": _deriv(1),
        "degrees": degrees,
        "masks": masks,
    }


def _as_batch_pair(a, b):
    """Align coefficient arrays of a scalar jet and a batched jet."""
    if a.ndim == b.ndim:
        return a, b
    if a.ndim < b.ndim:
        return a.reshape(a.shape + (1,) * (b.ndim - a.ndim)), b
    return a, b.reshape(b.shape + (1,) * (a.ndim - b.ndim))


class Jet2:
    """Truncated bivariate Taylor expansion of a scalar about a base point."""

    __slots__ = ("k", "order", "c")

    def __init__(self, k, c, order=None):
        self.k = int(k)
        self.c = np.asarray(c, dtype=float)
        n = _tables(self.k)["n"]
        if self.c.shape[0] != n:
            raise ValueError(f"expected {n} coefficients for order {k}, got {self.c.shape[0]}")
        self.order = self.k if order is None else int(order)
        if self.order < 0:
            raise OrderExhausted(f"jet order dropped below zero (k={self.k})")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, value, k=DEFAULT_ORDER):
        value = np.asarray(value, dtype=float)
        c = np.zeros((_tables(k)["n"],) + value.shape)
        c[0] = value
        return cls(k, c)

    @classmethod
    def variable(cls, name, value, k=DEFAULT_ORDER):
        """Seed jet of the coordinate 'u' or 'v' with base value ``value``."""
        value = np.asarray(value, dtype=float)
        c = np.zeros((_tables(k)["n"],) + value.shape)
        c[0] = value
        c[1 if name == "u" else 2] = 1.0
        return cls(k, c)

    def copy(self):
        return Jet2(self.k, self.c.copy(), self.order)

    # -- extraction -------------------------------------------------------------

    def value(self):
        v = self.c[0]
        return float(v) if v.ndim == 0 else v

    def coeff(self, i, j):
        t = _tables(self.k)
        if i + j > self.order:
            raise OrderExhausted(f"coefficient ({i},{j}) beyond valid order {self.order}")
        v = self.c[t["index"][(i, j)]]
        return float(v) if v.ndim == 0 else v

    def partial(self, i, j):
        """Value of the mixed partial d^i_u d^j_v at the base point."""
        return self.coeff(i, j) * math.factorial(i) * math.factorial(j)

    def gradient(self):
        return self.partial(1, 0), self.partial(0, 1)

    def hessian(self):
        huu, huv, hvv = self.partial(2, 0), self.partial(1, 1), self.partial(0, 2)
        return np.array([[huu, huv], [huv, hvv]])

    def truncated(self, order):
        """Same jet considered only to the given (lower) order."""
        if order > self.order:
            raise OrderExhausted(f"cannot raise order {self.order} to {order}")
        t = _tables(self.k)
        return Jet2(self.k, np.where(self._expand_mask(t["masks"][order]), self.c, 0.0), order)

    def _expand_mask(self, mask):
        if self.c.ndim == 1:
            return mask
        return mask.reshape(mask.shape + (1,) * (self.c.ndim - 1))

    # -- arithmetic ---------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet2):
            if other.k != self.k:
                raise ValueError(f"mixed jet allocation orders {self.k} and {other.k}")
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return None  # handled scalar-fast
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            c = self.c.copy()
            c[0] = c[0] + other
            return Jet2(self.k, c, self.order)
        a, b = _as_batch_pair(self.c, o.c)
        order = min(self.order, o.order)
        out = a + b
        return Jet2(self.k, self._apply_mask(out, order), order)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(self.k, -self.c, self.order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            c = self.c.copy()
            c[0] = c[0] - other
            return Jet2(self.k, c, self.order)
        a, b = _as_batch_pair(self.c, o.c)
        order = min(self.order, o.order)
        return Jet2(self.k, self._apply_mask(a - b, order), order)

    def __rsub__(self, other):
        return (-self) + other

    def _apply_mask(self, c, order):
        if order >= self.k:
            return c
        mask = _tables(self.k)["masks"][order]
        if c.ndim > 1:
            mask = mask.reshape(mask.shape + (1,) * (c.ndim - 1))
        return np.where(mask, c, 0.0)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return Jet2(self.k, self.c * other, self.order)
        t = _tables(self.k)
        ia, ib, iout = t["mul"]
        a, b = _as_batch_pair(self.c, o.c)
        prod = a[ia] * b[ib]
        if prod.ndim == 1:
            out = np.bincount(iout, weights=prod, minlength=t["n"])
        else:
            out = np.zeros((t["n"],) + prod.shape[1:])
            np.add.at(out, iout, prod)
        order = min(self.order, o.order)
        return Jet2(self.k, self._apply_mask(out, order), order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return Jet2(self.k, self.c / other, self.order)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, exponent):
        if isinstance(exponent, (int, np.integer)):
            return self._int_pow(int(exponent))
        if isinstance(exponent, float) and exponent.is_integer():
            return self._int_pow(int(exponent))
        c0 = self.c[0]
        if c0.ndim == 0 and c0 <= 0.0:
            raise NegativeSqrtConstantTerm(
                f"real power {exponent} of jet with non-positive constant term {c0}")
        derivs = []
        fac = 1.0
        with np.errstate(all="ignore"):  # array batches may hit the domain edge
            for m in range(self.order + 1):
                derivs.append(np.power(c0, exponent - m) * fac / math.factorial(m))
                fac *= exponent - m
        return self.compose(derivs)

    def _int_pow(self, n):
        if n == 0:
            return Jet2.constant(np.ones(self.c.shape[1:]) if self.c.ndim > 1 else 1.0, self.k)
        if n < 0:
            return self._int_pow(-n).reciprocal()
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def reciprocal(self):
        c0 = self.c[0]
        if c0.ndim == 0 and c0 == 0.0:
            raise DivisionByZeroConstantTerm("division by jet with zero constant term")
        with np.errstate(divide="ignore", invalid="ignore"):
            derivs = [(-1.0) ** m / np.power(c0, m + 1) for m in range(self.order + 1)]
        return self.compose(derivs)

    # -- composition with univariate maps ----------------------------------------

    def compose(self, series):
        """Compose with a univariate map given its Taylor coefficients.

        ``series[m]`` must be phi^(m)(c0)/m! where c0 is this jet's constant
        term.  Returns the jet of phi applied to this jet; Horner evaluation
        in h = self - c0 (h has no constant term, so truncation is exact).
        """
        h = self.copy()
        if h.c.ndim == 1:
            h.c[0] = 0.0
        else:
            h.c[0] = np.zeros_like(h.c[0])
        acc = Jet2.constant(np.broadcast_to(np.asarray(series[-1], dtype=float),
                                            self.c.shape[1:]).copy()
                            if self.c.ndim > 1 else float(series[-1]), self.k)
        acc.order = self.order
        for m in range(len(series) - 2, -1, -1):
            acc = acc * h
            am = np.asarray(series[m], dtype=float)
            if acc.c.ndim == 1:
                acc.c[0] = acc.c[0] + float(am)
            else:
                acc.c[0] = acc.c[0] + am
        return acc

    # -- differentiation ------------------------------------------------------------

    def du(self):
        return self._deriv("du")

    def dv(self):
        return self._deriv("dv")

    def _deriv(self, which):
        if self.order == 0:
            raise OrderExhausted("cannot differentiate an order-0 jet")
        t = _tables(self.k)
        dst, src, fac = t[which]
        out = np.zeros_like(self.c)
        if self.c.ndim == 1:
            out[dst] = fac * self.c[src]
        else:
            out[dst] = fac.reshape((-1,) + (1,) * (self.c.ndim - 1)) * self.c[src]
        return Jet2(self.k, self._apply_mask(out, self.order - 1), self.order - 1)

    def __repr__(self):
        if self.c.ndim == 1:
            lead = ", ".join(f"{c:.6g}" for c in self.c[:6])
            return f"Jet2(k={self.k}, order={self.order}, c=[{lead}, ...])"
        return f"Jet2(k={self.k}, order={self.order}, batch={self.c.shape[1:]})"


# -- elementary maps (accept floats and jets uniformly) ----------------------------


def _series_sin(c0, m):
    table = [np.sin(c0), np.cos(c0), -np.sin(c0), -np.cos(c0)]
    return [table[i % 4] / math.factorial(i) for i in range(m + 1)]


def _series_cos(c0, m):
    table = [np.cos(c0), -np.sin(c0), -np.cos(c0), np.sin(c0)]
    return [table[i % 4] / math.factorial(i) for i in range(m + 1)]


def sin(x):
    if isinstance(x, Jet2):
        return x.compose(_series_sin(x.c[0], x.order))
    return np.sin(x) if isinstance(x, np.ndarray) else math.sin(x)


def cos(x):
    if isinstance(x, Jet2):
        return x.compose(_series_cos(x.c[0], x.order))
    return np.cos(x) if isinstance(x, np.ndarray) else math.cos(x)


def exp(x):
    if isinstance(x, Jet2):
        e = np.exp(x.c[0])
        return x.compose([e / math.factorial(m) for m in range(x.order + 1)])
    return np.exp(x) if isinstance(x, np.ndarray) else math.exp(x)


def sqrt(x):
    if isinstance(x, Jet2):
        c0 = x.c[0]
        if c0.ndim == 0 and c0 <= 0.0:
            raise NegativeSqrtConstantTerm(f"sqrt of jet with non-positive constant term {c0}")
        return x ** 0.5
    if isinstance(x, np.ndarray):
        with np.errstate(invalid="ignore"):
            return np.sqrt(x)
    if x <= 0.0:
        raise NegativeSqrtConstantTerm(f"sqrt of non-positive value {x}")
    return math.sqrt(x)


def directional_derivative(g, direction):
    """Derivative of g along a (possibly non-constant) coordinate vector field.

    ``direction`` is a pair (X1, X2) of jets or floats, the components of the
    field in the (u, v) chart.  Because the components are jets, iterating
    this function differentiates the field as well, which is what conditions
    like (d_X d_X sigma)_x require for sections X of a curvature subbundle.
    """
    x1, x2 = direction
    return x1 * g.du() + x2 * g.dv()
