"""Tagged dual numbers for nested forward-mode differentiation.

A :class:`Dual` carries a value and one directional derivative. Components may
themselves be duals (of an older tag), which is how second derivatives are
obtained: the bracket of a bracket seeds a fresh tag around values that
already carry the outer perturbation. Tags keep the two perturbations apart.

Values are numpy arrays (one entry per sample point) or scalars, real or
complex. Derivatives are always taken with respect to real phase-space
coordinates, so complex conjugation commutes with differentiation.
"""

from __future__ import annotations

import itertools

import numpy as np

_tags = itertools.count(1)


class DomainError(ValueError):
    """Evaluation outside the domain where an observable is real-analytic."""


def new_tag() -> int:
    return next(_tags)


def _is_zero(v) -> bool:
    return isinstance(v, (int, float)) and v == 0


class Dual:
    """``val + eps * d`` with ``d**2 == 0``, labelled by ``tag``."""

    __slots__ = ("val", "eps", "tag")
    # keep numpy from broadcasting over Dual as an object array
    __array_ufunc__ = None

    def __init__(self, val, eps, tag: int):
        self.val = val
        self.eps = eps
        self.tag = tag

    def __repr__(self) -> str:
        return f"Dual({self.val!r}, {self.eps!r}, tag={self.tag})"

    def _split(self, other):
        tag = self.tag
        if isinstance(other, Dual) and other.tag > tag:
            tag = other.tag
        return tag, parts(self, tag), parts(other, tag)

    def __add__(self, other):
        tag, (a, da), (b, db) = self._split(other)
        return _make(a + b, _add(da, db), tag)

    __radd__ = __add__

    def __sub__(self, other):
        tag, (a, da), (b, db) = self._split(other)
        return _make(a - b, _sub(da, db), tag)

    def __rsub__(self, other):
        tag, (a, da), (b, db) = self._split(other)
        return _make(b - a, _sub(db, da), tag)

    def __neg__(self):
        return Dual(-self.val, -self.eps, self.tag)

    def __pos__(self):
        return self

    def __mul__(self, other):
        tag, (a, da), (b, db) = self._split(other)
        return _make(a * b, _add(_mul(a, db), _mul(da, b)), tag)

    __rmul__ = __mul__

    def __truediv__(self, other):
        tag, (a, da), (b, db) = self._split(other)
        q = a / b
        return _make(q, _mul(_sub(da, _mul(q, db)), 1 / b), tag)

    def __rtruediv__(self, other):
        tag, (a, da), (b, db) = self._split(other)
        q = b / a
        return _make(q, _mul(_sub(db, _mul(q, da)), 1 / a), tag)

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise TypeError("Dual supports non-negative integer powers only")
        n = int(n)
        if n == 0:
            return 1.0
        if n == 1:
            return self
        a = self.val
        a_nm1 = a ** (n - 1)
        return Dual(a_nm1 * a, n * a_nm1 * self.eps, self.tag)

    def conjugate(self):
        return Dual(conj(self.val), conj(self.eps), self.tag)


def parts(z, tag: int):
    """Value and ``tag``-derivative of ``z``; non-duals and older tags are constants."""
    if isinstance(z, Dual) and z.tag == tag:
        return z.val, z.eps
    return z, 0.0


def _make(val, eps, tag):
    return Dual(val, eps, tag)


def _add(a, b):
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return a + b


def _sub(a, b):
    if _is_zero(b):
        return a
    if _is_zero(a):
        return -b
    return a - b


def _mul(a, b):
    if _is_zero(a) or _is_zero(b):
        return 0.0
    return a * b


def sqrt(z):
    if isinstance(z, Dual):
        s = sqrt(z.val)
        return Dual(s, _mul(z.eps, 0.5 / s), z.tag)
    a = np.asarray(z)
    if not np.iscomplexobj(a) and np.any(a < 0):
        raise DomainError("square root of a negative radicand")
    return np.sqrt(a)


def conj(z):
    if isinstance(z, Dual):
        return z.conjugate()
    return np.conj(z)


def real(z):
    if isinstance(z, Dual):
        return Dual(real(z.val), real(z.eps), z.tag)
    return np.real(z)


def imag(z):
    if isinstance(z, Dual):
        return Dual(imag(z.val), imag(z.eps), z.tag)
    return np.imag(z)


def derivative(z, tag: int):
    """The ``tag`` component of a computed result (0 if it does not depend on it)."""
    return parts(z, tag)[1]
