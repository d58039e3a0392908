"""Complex octonions over a fixed Fano-plane structure table.

Octonions are arrays of shape ``(..., 8)`` over the ordered basis
``e0 = 1, e1, ..., e7``; every function is batched over leading axes and works
for complex float arrays and for exact object arrays alike.  :class:`Octonion`
is a thin single-value wrapper with operator overloads.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import InputError
from .scalars import to_complex

# Oriented lines: for (i, j, k) we have e_i e_j = e_k and cyclic shifts.
FANO_TRIPLES = ((1, 2, 3), (1, 5, 4), (1, 7, 6), (2, 6, 4), (2, 5, 7), (3, 7, 4), (3, 6, 5))

# Signed terms of the reference 3-form, e^{123} - e^{145} - e^{167} - e^{246} + e^{257} - e^{347} - e^{356}.
PHI0_TERMS = {
    (1, 2, 3): 1,
    (1, 4, 5): -1,
    (1, 6, 7): -1,
    (2, 4, 6): -1,
    (2, 5, 7): 1,
    (3, 4, 7): -1,
    (3, 5, 6): -1,
}


@dataclass(frozen=True)
class StructureTable:
    """``index[i, j]`` and ``sign[i, j]`` with e_i e_j = sign * e_index."""

    index: np.ndarray
    sign: np.ndarray

    @classmethod
    def from_triples(cls, triples) -> "StructureTable":
        index = np.zeros((8, 8), dtype=int)
        sign = np.zeros((8, 8), dtype=int)
        for i in range(8):
            index[0, i] = index[i, 0] = i
            sign[0, i] = sign[i, 0] = 1
        for i in range(1, 8):
            index[i, i], sign[i, i] = 0, -1
        for a, b, c in triples:
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                index[x, y], sign[x, y] = z, 1
                index[y, x], sign[y, x] = z, -1
        if np.any(sign == 0):
            raise InputError("structure table is incomplete")
        return cls(index, sign)

    def terms(self):
        return [(i, j, int(self.index[i, j]), int(self.sign[i, j])) for i in range(8) for j in range(8)]


TABLE = StructureTable.from_triples(FANO_TRIPLES)
_TERMS = TABLE.terms()


def _arr(u) -> np.ndarray:
    if isinstance(u, Octonion):
        return u.coeffs
    a = np.asarray(u)
    if a.shape[-1:] != (8,):
        raise InputError(f"octonion arrays need a trailing axis of length 8, got {a.shape}")
    return a


def _stack(parts, like: np.ndarray) -> np.ndarray:
    if like.dtype == object:
        shape = like.shape[:-1]
        out = np.empty(shape + (8,), dtype=object)
        for k, p in enumerate(parts):
            out[..., k] = p
        return out
    return np.stack(np.broadcast_arrays(*parts), axis=-1)


def multiply(u, v) -> np.ndarray:
    """Octonion product, C-bilinear, batched over leading axes."""
    a, b = np.broadcast_arrays(_arr(u), _arr(v))
    parts = [0] * 8
    for i, j, k, s in _TERMS:
        t = a[..., i] * b[..., j]
        parts[k] = parts[k] + t if s > 0 else parts[k] - t
    return _stack(parts, a)


def conjugate(u) -> np.ndarray:
    a = _arr(u)
    out = -a
    out[..., 0] = a[..., 0]
    return out


def real_part(u) -> np.ndarray:
    """Component along 1 (a scalar per octonion)."""
    return _arr(u)[..., 0]


def imaginary_part(u) -> np.ndarray:
    a = _arr(u).copy()
    a[..., 0] = 0
    return a


def embed_imaginary(v7) -> np.ndarray:
    """Im O element with the given 7 coordinates."""
    v = np.asarray(v7)
    if v.shape[-1:] != (7,):
        raise InputError("imaginary octonions need 7 coordinates")
    z = np.zeros(v.shape[:-1] + (1,), dtype=v.dtype)
    if v.dtype == object:
        z[:] = 0
    return np.concatenate([z, v], axis=-1)


def bilinear(u, v):
    """B(u, v) = Re(conj(u) v); symmetric and C-bilinear."""
    return real_part(multiply(conjugate(u), v))


def quadratic(u):
    return bilinear(u, u)


def quadratic_and_bilinear(u, v):
    """Return (Q(u), B(u, v))."""
    return quadratic(u), bilinear(u, v)


def cross(u, v) -> np.ndarray:
    """u x v = Im(conj(v) u)."""
    return imaginary_part(multiply(conjugate(v), u))


def triple_cross(u, v, w) -> np.ndarray:
    """u x v x w = (u conj(v)) w - (w conj(v)) u."""
    vb = conjugate(v)
    return multiply(multiply(u, vb), w) - multiply(multiply(w, vb), u)


def associator(u, v, w) -> np.ndarray:
    """[u, v, w] = (u(vw) - (uv)w) / 2."""
    return (multiply(u, multiply(v, w)) - multiply(multiply(u, v), w)) / 2


def phi0_value(u, v, w):
    """phi_0(u, v, w) = B(u x v, w)."""
    return bilinear(cross(u, v), w)


def unit(i: int, dtype=complex) -> np.ndarray:
    e = np.zeros(8, dtype=dtype)
    if dtype == object:
        e[:] = 0
    e[i] = 1
    return e


def cross_matrix(u7) -> np.ndarray:
    """7x7 matrix of v -> u x v on Im O (float)."""
    u = embed_imaginary(np.asarray(u7, dtype=complex))
    M = np.zeros((7, 7), dtype=complex)
    for j in range(7):
        M[:, j] = cross(u, unit(j + 1))[1:]
    return M


# -- derivation algebra ------------------------------------------------


def derivation_constraints(dtype=float) -> np.ndarray:
    """Linear system whose kernel is the derivation algebra of O.

    Unknown: a 7x7 matrix D acting on Im O (column j is D e_j), flattened
    row-major.  One block of 8 rows per ordered pair (i, j):
    D(e_i e_j) - D(e_i) e_j - e_i D(e_j).
    """
    rows = []
    for i in range(1, 8):
        for j in range(1, 8):
            block = np.zeros((8, 49), dtype=dtype)
            for r in range(7):
                for c in range(7):
                    D = np.zeros((8, 8), dtype=dtype)
                    D[r + 1, c + 1] = 1
                    ei, ej = unit(i, dtype), unit(j, dtype)
                    lhs = D @ multiply(ei, ej)
                    rhs = multiply(D @ ei, ej) + multiply(ei, D @ ej)
                    block[:, r * 7 + c] = lhs - rhs
            rows.append(block)
    return np.vstack(rows)


def derivation_basis(exact: bool = False) -> np.ndarray:
    """Basis of Der(O) restricted to Im O, shape (dim, 7, 7)."""
    from .linalg import exact_rank, svd_rank
    from .scalars import to_float_array

    if exact:
        M = derivation_constraints(dtype=object)
        info = exact_rank(M)
        null = to_float_array(info.null_basis).real
        # orthonormalize for numerical use; the count stays exact
        q, _ = np.linalg.qr(null)
        null = q
    else:
        info = svd_rank(derivation_constraints())
        null = info.null_basis.real
    return null.T.reshape(-1, 7, 7)


# -- table validation ---------------------------------------------------


def _validate_table():
    # unit and imaginary squares
    for i in range(8):
        assert TABLE.index[0, i] == i and TABLE.index[i, 0] == i
    for i in range(1, 8):
        assert TABLE.index[i, i] == 0 and TABLE.sign[i, i] == -1
    # B(e_i x e_j, e_k) against the reference 3-form on all 35 basis triples
    for i, j, k in combinations(range(1, 8), 3):
        got = int(np.real(phi0_value(unit(i), unit(j), unit(k))))
        want = PHI0_TERMS.get((i, j, k), 0)
        if got != want:
            raise AssertionError(f"table disagrees with phi0 on e{i}, e{j}, e{k}: {got} != {want}")
    # alternativity on basis pairs: (xx)y = x(xy), (yx)x = y(xx)
    E = np.eye(8, dtype=complex)
    for i in range(8):
        for j in range(8):
            x, y = E[i], E[j]
            if not np.allclose(multiply(multiply(x, x), y), multiply(x, multiply(x, y))):
                raise AssertionError(f"left alternativity fails on e{i}, e{j}")
            if not np.allclose(multiply(multiply(y, x), x), multiply(y, multiply(x, x))):
                raise AssertionError(f"right alternativity fails on e{i}, e{j}")



@dataclass(frozen=True, eq=False)
class Octonion:
    """Single octonion with 8 (complex or exact) coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.shape != (8,):
            raise InputError(f"octonion needs 8 coefficients, got shape {c.shape}")
        if c.dtype != object:
            c = c.astype(complex)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, i: int) -> "Octonion":
        return cls(unit(i))

    @classmethod
    def imaginary(cls, v7) -> "Octonion":
        return cls(embed_imaginary(v7))

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return Octonion(multiply(self, other))
        return Octonion(self.coeffs * other)

    def __rmul__(self, scalar):
        return Octonion(scalar * self.coeffs)

    def __add__(self, other: "Octonion"):
        return Octonion(self.coeffs + _arr(other))

    def __sub__(self, other: "Octonion"):
        return Octonion(self.coeffs - _arr(other))

    def __neg__(self):
        return Octonion(-self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Octonion):
            return NotImplemented
        d = self.coeffs - other.coeffs
        if d.dtype == object:
            return not any(bool(x) if hasattr(x, "x") else x != 0 for x in d)
        return bool(np.allclose(d, 0, atol=1e-12))

    def conjugate(self) -> "Octonion":
        return Octonion(conjugate(self))

    @property
    def re(self):
        return self.coeffs[0]

    @property
    def im(self) -> "Octonion":
        return Octonion(imaginary_part(self))

    def Q(self):
        return quadratic(self)

    def B(self, other: "Octonion"):
        return bilinear(self, other)

    def cross(self, other: "Octonion") -> "Octonion":
        return Octonion(cross(self, other))

    def __repr__(self):
        names = ["1"] + [f"e{i}" for i in range(1, 8)]
        parts = [f"({c})*{n}" for c, n in zip(self.coeffs, names) if abs(to_complex(c)) > 0]
        return "Octonion(" + (" + ".join(parts) or "0") + ")"


@dataclass(frozen=True, eq=False)
class SplitOctonions:
    """Batch of complex octonions stored as separate real and imaginary parts.

    Intended for exact checks over the Gaussian integers with Python-int
    object arrays, which is far faster than per-element Gaussian-rational
    objects.  Every identity checked this way is homogeneous, so clearing
    denominators loses nothing.
    """

    re: np.ndarray
    im: np.ndarray

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, bound: int = 20, imaginary: bool = False) -> "SplitOctonions":
        re = rng.integers(-bound, bound + 1, size=(n, 8)).astype(object)
        im = rng.integers(-bound, bound + 1, size=(n, 8)).astype(object)
        if imaginary:
            re[:, 0] = 0
            im[:, 0] = 0
        return cls(re, im)

    def __mul__(self, other: "SplitOctonions") -> "SplitOctonions":
        a, b, c, d = self.re, self.im, other.re, other.im
        return SplitOctonions(multiply(a, c) - multiply(b, d), multiply(a, d) + multiply(b, c))

    def __add__(self, other):
        return SplitOctonions(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return SplitOctonions(self.re - other.re, self.im - other.im)

    def scale(self, s: tuple) -> "SplitOctonions":
        """Multiply by per-row complex scalars given as (re, im) arrays."""
        sr, si = (np.asarray(x)[..., None] for x in s)
        return SplitOctonions(sr * self.re - si * self.im, sr * self.im + si * self.re)

    def conjugate(self) -> "SplitOctonions":
        return SplitOctonions(conjugate(self.re), conjugate(self.im))

    def imaginary_part(self) -> "SplitOctonions":
        return SplitOctonions(imaginary_part(self.re), imaginary_part(self.im))

    def bilinear(self, other) -> tuple:
        p = self.conjugate() * other
        return p.re[..., 0], p.im[..., 0]

    def quadratic(self) -> tuple:
        return self.bilinear(self)

    def cross(self, other) -> "SplitOctonions":
        return (other.conjugate() * self).imaginary_part()

    def associator(self, v, w) -> "SplitOctonions":
        from fractions import Fraction

        d = self * (v * w) - (self * v) * w
        half = Fraction(1, 2)
        return SplitOctonions(d.re * half, d.im * half)

    def is_zero(self) -> np.ndarray:
        return np.all(self.re == 0, axis=-1) & np.all(self.im == 0, axis=-1)


def complex_mul(x: tuple, y: tuple) -> tuple:
    return x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]


# -- JSON ---------------------------------------------------------------


def to_json(u) -> dict:
    a = _arr(u)
    z = [to_complex(x) for x in a]
    return {"re": [c.real for c in z], "im": [c.imag for c in z]}


def from_json(obj) -> Octonion:
    try:
        re, im = obj["re"], obj["im"]
        if len(re) != 8 or len(im) != 8:
            raise ValueError("need 8 real and 8 imaginary parts")
        return Octonion(np.array(re, dtype=float) + 1j * np.array(im, dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad octonion JSON: {exc}") from exc


_validate_table()
