"""Dense exterior algebra over R and C in dimensions up to 14.

A :class:`Multivector` is a sparse map from basis subsets (bitmasks, bit ``i``
standing for the 1-based index ``i + 1``) to scalars.  Coefficients may be
numpy floats/complex numbers or exact Gaussian rationals; every operation is
generic over the two backends.

Indices in the public API are 1-based, matching the usual ``e^{123}`` notation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import InputError
from .scalars import (
    DEFAULT_ZERO_TOL,
    GaussianRational,
    gaussian,
    is_exact_scalar,
    is_zero,
    to_complex,
)

MAX_DIM = 14
FIELDS = ("R", "C")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def grade_of(mask: int) -> int:
    return bin(mask).count("1")


@lru_cache(maxsize=None)
def _wedge_sign(a: int, b: int) -> int:
    # parity of pairs (i in a, j in b) with i > j
    swaps = 0
    bb = b
    j = 0
    while bb:
        if bb & 1:
            swaps += grade_of(a >> (j + 1))
        bb >>= 1
        j += 1
    return -1 if swaps & 1 else 1


def _normalize_indices(indices: Iterable[int], dim: int) -> tuple[tuple[int, ...], int]:
    """Sort indices, returning (sorted, sign); sign 0 for repeated indices."""
    idx = list(indices)
    for i in idx:
        if not 1 <= i <= dim:
            raise InputError(f"index {i} out of range 1..{dim}")
    if len(set(idx)) != len(idx):
        return tuple(sorted(idx)), 0
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return tuple(sorted(idx)), sign


@dataclass(frozen=True)
class Multivector:
    """Element of the exterior algebra of (K^dim)^*.

    ``terms`` maps bitmask -> coefficient; zero coefficients (below ``tol`` in
    float mode, exactly zero in exact mode) are dropped on construction.
    """

    dim: int
    terms: Mapping[int, object] = field(default_factory=dict)
    field: str = "C"
    tol: float = DEFAULT_ZERO_TOL

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise InputError(f"dimension {self.dim} outside 1..{MAX_DIM}")
        if self.field not in FIELDS:
            raise InputError(f"field must be one of {FIELDS}, got {self.field!r}")
        top = (1 << self.dim) - 1
        clean = {}
        for m, c in self.terms.items():
            if m & ~top:
                raise InputError(f"basis mask {m:#x} exceeds dimension {self.dim}")
            if not is_zero(c, self.tol):
                clean[int(m)] = c
        object.__setattr__(self, "terms", MappingProxyType(clean))

    # -- construction -------------------------------------------------

    @classmethod
    def from_indices(cls, dim: int, coeffs: Mapping[tuple[int, ...], object], field: str = "C",
                     tol: float = DEFAULT_ZERO_TOL) -> "Multivector":
        terms: dict[int, object] = {}
        for idx, c in coeffs.items():
            srt, sign = _normalize_indices(idx, dim)
            if sign == 0:
                continue
            m = mask_of(srt)
            terms[m] = terms.get(m, 0) + sign * c
        return cls(dim, terms, field, tol)

    @classmethod
    def basis(cls, dim: int, *indices: int, coeff=1, field: str = "C") -> "Multivector":
        return cls.from_indices(dim, {tuple(indices): coeff}, field)

    @classmethod
    def volume(cls, dim: int, coeff=1, field: str = "C") -> "Multivector":
        return cls(dim, {(1 << dim) - 1: coeff}, field)

    @classmethod
    def covector(cls, v, field: str = "C") -> "Multivector":
        v = list(v)
        return cls(len(v), {1 << i: c for i, c in enumerate(v)}, field)

    def _like(self, terms: Mapping[int, object]) -> "Multivector":
        return Multivector(self.dim, terms, self.field, self.tol)

    # -- inspection ---------------------------------------------------

    @property
    def grades(self) -> set[int]:
        return {grade_of(m) for m in self.terms}

    @property
    def grade(self) -> int:
        """Grade of a homogeneous element (0 for the zero element)."""
        g = self.grades
        if not g:
            return 0
        if len(g) > 1:
            raise InputError(f"mixed-grade element with grades {sorted(g)}")
        return g.pop()

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def exact(self) -> bool:
        return all(is_exact_scalar(c) for c in self.terms.values())

    def coefficient(self, *indices: int):
        srt, sign = _normalize_indices(indices, self.dim)
        if sign == 0:
            return 0
        return sign * self.terms.get(mask_of(srt), 0)

    def items(self):
        """(indices, coefficient) pairs in ascending mask order."""
        for m in sorted(self.terms):
            yield indices_of(m), self.terms[m]

    def max_abs(self) -> float:
        return max((abs(to_complex(c)) for c in self.terms.values()), default=0.0)

    # -- vector space structure ---------------------------------------

    def _check(self, other: "Multivector"):
        if not isinstance(other, Multivector):
            raise InputError("expected a Multivector")
        if other.dim != self.dim:
            raise InputError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Multivector(self.dim, out, _join_field(self, other), self.tol)

    def __neg__(self) -> "Multivector":
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __mul__(self, scalar) -> "Multivector":
        if isinstance(scalar, Multivector):
            return NotImplemented
        return self._like({m: scalar * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Multivector":
        return self._like({m: c / scalar for m, c in self.terms.items()})

    def __xor__(self, other: "Multivector") -> "Multivector":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        if self.dim != other.dim:
            return False
        diff = self - other
        return diff.is_zero()

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.terms))))

    def __repr__(self):
        if not self.terms:
            return f"Multivector(dim={self.dim}, 0)"
        parts = [f"{c}*e^{''.join(map(str, idx)) if self.dim < 10 else idx}" for idx, c in self.items()]
        return f"Multivector(dim={self.dim}, " + " + ".join(parts) + ")"

    def evaluate(self, *vectors):
        """Value of a homogeneous k-form on k vectors, with e^{1..k}(e_1,..,e_k) = 1."""
        if len(vectors) != self.grade and not self.is_zero():
            raise InputError(f"{len(vectors)} vectors for a {self.grade}-form")
        a = self
        for v in vectors:
            a = contract(v, a)
        return a.terms.get(0, 0)


def _join_field(a: Multivector, b: Multivector) -> str:
    return "C" if "C" in (a.field, b.field) else "R"


def wedge(a: Multivector, b: Multivector) -> Multivector:
    """Exterior product; signs from the transpositions needed to sort indices."""
    a._check(b)
    out: dict[int, object] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            m = ma | mb
            term = _wedge_sign(ma, mb) * (ca * cb)
            out[m] = out[m] + term if m in out else term
    return Multivector(a.dim, out, _join_field(a, b), a.tol)


def wedge_all(*forms: Multivector) -> Multivector:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def contract(v, a: Multivector) -> Multivector:
    """Interior product iota(v) a for a vector given by its coefficients."""
    v = list(v)
    if len(v) != a.dim:
        raise InputError(f"vector of length {len(v)} for dimension {a.dim}")
    if not a.is_zero() and 0 in a.grades:
        raise InputError("cannot contract a grade-0 component")
    out: dict[int, object] = {}
    for m, c in a.terms.items():
        mm = m
        below = 0
        i = 0
        while mm:
            if mm & 1:
                vi = v[i]
                if not is_zero(vi, 0.0):
                    r = m ^ (1 << i)
                    term = (-1 if below & 1 else 1) * (vi * c)
                    out[r] = out[r] + term if r in out else term
                below += 1
            mm >>= 1
            i += 1
    return a._like(out)


def top_coefficient(a: Multivector, vol: Multivector):
    """The scalar lambda with a = lambda * vol for top-degree a and vol."""
    a._check(vol)
    top = (1 << a.dim) - 1
    if vol.is_zero():
        raise InputError("reference volume form is zero")
    if set(vol.terms) != {top}:
        raise InputError("reference form is not of top degree")
    if not a.is_zero() and set(a.terms) != {top}:
        raise InputError(f"form of grades {sorted(a.grades)} is not of top degree {a.dim}")
    return a.terms.get(top, 0) / vol.terms[top]


def pullback(L, a: Multivector) -> Multivector:
    """(L^* a)(v_1, ...) = a(L v_1, ...): e^i pulls back to sum_j L[i, j] e^j."""
    L = np.asarray(L)
    n = a.dim
    if L.shape != (n, n):
        raise InputError(f"pullback matrix must be {n}x{n}")
    pulled = [Multivector(n, {1 << j: L[i, j] for j in range(n)}, "C", a.tol) for i in range(n)]
    out = Multivector(n, {}, a.field, a.tol)
    for m, c in a.terms.items():
        idx = indices_of(m)
        if not idx:
            term = Multivector(n, {0: c}, a.field, a.tol)
        else:
            term = wedge_all(*(pulled[i - 1] for i in idx)) * c
        out = out + term
    return Multivector(n, out.terms, a.field, a.tol)


def to_tensor(a: Multivector) -> np.ndarray:
    """Fully antisymmetric float array T with T[i,j,k,...] = a(e_i, e_j, e_k, ...)."""
    k = a.grade
    T = np.zeros((a.dim,) * k, dtype=complex)
    from itertools import permutations
    for m, c in a.terms.items():
        idx = [i - 1 for i in indices_of(m)]
        cc = to_complex(c)
        for perm in permutations(range(k)):
            sign = _perm_sign(perm)
            T[tuple(idx[p] for p in perm)] = sign * cc
    return T


def _perm_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def two_form_matrix(a: Multivector) -> np.ndarray:
    """Antisymmetric matrix W with a(u, v) = u^T W v."""
    if not a.is_zero() and a.grade != 2:
        raise InputError("expected a 2-form")
    exact = a.exact and not a.is_zero()
    W = np.zeros((a.dim, a.dim), dtype=object if exact else complex)
    if exact:
        W[:] = 0
    for m, c in a.terms.items():
        i, j = (x - 1 for x in indices_of(m))
        W[i, j] = c
        W[j, i] = -c
    return W


def two_form_from_matrix(W, field: str = "R", tol: float = DEFAULT_ZERO_TOL) -> Multivector:
    W = np.asarray(W)
    n = W.shape[0]
    if W.shape != (n, n):
        raise InputError("2-form matrix must be square")
    return Multivector.from_indices(n, {(i + 1, j + 1): W[i, j] for i, j in combinations(range(n), 2)}, field, tol)


# -- JSON form format -------------------------------------------------


def to_json(a: Multivector) -> dict:
    terms = []
    for idx, c in a.items():
        z = to_complex(c)
        terms.append({"indices": list(idx), "re": z.real, "im": z.imag})
    return {"dim": a.dim, "field": a.field, "terms": terms}


def from_json(obj, exact: bool = False) -> Multivector:
    """Parse ``{"dim":7,"field":"C","terms":[{"indices":[1,2,3],"re":1.0,"im":0.0}, ...]}``.

    With ``exact=True`` the coefficients must be integral or rational strings.
    """
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON form: {exc}") from exc
    try:
        dim = int(obj["dim"])
        fld = obj.get("field", "C")
        raw = obj["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"form JSON missing field: {exc}") from exc
    if fld not in FIELDS:
        raise InputError(f"unknown field {fld!r}")
    seen = set()
    terms = {}
    for t in raw:
        try:
            idx = [int(i) for i in t["indices"]]
            re, im = t.get("re", 0), t.get("im", 0)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad term {t!r}") from exc
        if idx != sorted(idx) or len(set(idx)) != len(idx):
            raise InputError(f"indices must be strictly ascending: {idx}")
        if any(not 1 <= i <= dim for i in idx):
            raise InputError(f"index out of range in {idx}")
        key = tuple(idx)
        if key in seen:
            raise InputError(f"duplicate index set {idx}")
        seen.add(key)
        if fld == "R" and im:
            raise InputError(f"imaginary coefficient in a real form at {idx}")
        if exact:
            c = gaussian(_exact_str(re), _exact_str(im))
        else:
            c = complex(float(re), float(im)) if fld == "C" else float(re)
        terms[mask_of(idx)] = c
    return Multivector(dim, terms, fld)


def _exact_str(x):
    if isinstance(x, float):
        if not x.is_integer():
            from fractions import Fraction
            return Fraction(x).limit_denominator(10**12)
        return int(x)
    return x


__all__ = [
    "Multivector",
    "wedge",
    "wedge_all",
    "contract",
    "top_coefficient",
    "pullback",
    "to_tensor",
    "two_form_matrix",
    "two_form_from_matrix",
    "to_json",
    "from_json",
    "mask_of",
    "indices_of",
    "GaussianRational",
]
