"""Scalar backends.

Two backends are supported everywhere: ``float`` (numpy complex128) and
``exact`` (Gaussian rationals, i.e. ``a + bi`` with rational ``a, b``).
Exact values are sympy ``QQ_I`` elements stored in numpy object arrays.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np
from sympy.polys.domains import QQ, QQ_I

FLOAT = "float"
EXACT = "exact"
BACKENDS = (FLOAT, EXACT)

GaussianRational = type(QQ_I(0, 0))

DEFAULT_ZERO_TOL = 1e-12


def _q(x):
    if isinstance(x, np.ndarray) and x.ndim == 0:
        x = x.item()
    if isinstance(x, (float, np.floating)):
        x = Fraction(float(x))
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, (int, np.integer)):
        return QQ(int(x))
    if isinstance(x, str):
        f = Fraction(x)
        return QQ(f.numerator, f.denominator)
    if isinstance(x, Rational):
        return QQ(int(x.numerator), int(x.denominator))
    return QQ.convert(x)


def gaussian(re=0, im=0) -> GaussianRational:
    """Exact scalar ``re + i*im`` from ints, Fractions or rational strings."""
    if isinstance(re, GaussianRational) and not im:
        return re
    return QQ_I(_q(re), _q(im))


def is_exact_scalar(x) -> bool:
    return isinstance(x, (GaussianRational, int, Fraction, np.integer)) or type(x).__name__ == "mpq"


def is_exact_array(a) -> bool:
    a = np.asarray(a)
    return a.dtype == object and all(is_exact_scalar(x) for x in a.flat)


def exact_array(values) -> np.ndarray:
    """Object array of Gaussian rationals from nested ints/Fractions/complex-int pairs."""
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        if isinstance(x, complex):
            if x.real != int(x.real) or x.imag != int(x.imag):
                raise TypeError(f"non-integral complex {x!r} cannot be made exact")
            out[idx] = gaussian(int(x.real), int(x.imag))
        else:
            out[idx] = gaussian(x)
    return out


def to_float_array(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype != object:
        return a.astype(complex)
    out = np.empty(a.shape, dtype=complex)
    for idx, x in np.ndenumerate(a):
        out[idx] = to_complex(x)
    return out


def to_complex(x) -> complex:
    if isinstance(x, GaussianRational):
        return complex(float(x.x), float(x.y))
    return complex(x)


def real_part(x):
    if isinstance(x, GaussianRational):
        return QQ_I(x.x, 0)
    return np.real(x)


def imag_part(x):
    if isinstance(x, GaussianRational):
        return QQ_I(x.y, 0)
    return np.imag(x)


def conj(x):
    if isinstance(x, GaussianRational):
        return QQ_I(x.x, -x.y)
    return np.conj(x)


def is_zero(x, tol: float = DEFAULT_ZERO_TOL) -> bool:
    # QQ_I(0, 0) == 0 is False in sympy; bool() is the reliable test.
    if isinstance(x, GaussianRational):
        return not bool(x)
    if is_exact_scalar(x):
        return x == 0
    return abs(x) <= tol


def exact_zero_mask(a: np.ndarray) -> np.ndarray:
    return np.vectorize(lambda x: is_zero(x), otypes=[bool])(a)


def max_abs(a) -> float:
    """Max modulus of an array of either backend (0.0 for empty input)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.dtype == object:
        return max(abs(to_complex(x)) for x in a.flat)
    return float(np.max(np.abs(a)))


def random_gaussian(rng: np.random.Generator, shape, bound: int = 6, denominator: int = 4) -> np.ndarray:
    """Random exact array with entries (p + qi)/d, |p|,|q| <= bound, 1 <= d <= denominator."""
    re = rng.integers(-bound, bound + 1, size=shape)
    im = rng.integers(-bound, bound + 1, size=shape)
    den = rng.integers(1, denominator + 1, size=shape)
    out = np.empty(np.shape(re), dtype=object)
    for idx in np.ndindex(out.shape):
        d = int(den[idx])
        out[idx] = QQ_I(QQ(int(re[idx]), d), QQ(int(im[idx]), d))
    return out


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
