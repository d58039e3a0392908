"""Plane classification and tangent spaces of the associative, isotropic,
isotropic-associative and B-real associative Grassmannians.

Planes are stored as k x 7 arrays of (possibly complex) coordinates in Im O.
Ambients:

* ``R7``  - real planes in R^7 (the real imaginary octonions),
* ``C7``  - complex planes in C^7,
* ``R14`` - real planes in C^7 = R^14, with x + iy <-> (x, y).

On C^7: B is the complex bilinear form sum u_i v_i, h(u, v) = sum u_i conj(v_i),
g = Re h, J is multiplication by i and omega = sum e^i ^ f^i = -Im h.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement

import numpy as np

from . import linalg
from .errors import DegeneracyError, InputError, PreconditionError
from .octonion import associator, cross, embed_imaginary
from .scalars import conj, exact_array, gaussian, is_zero, to_complex, to_float_array

AMBIENTS = ("R7", "C7", "R14")
KINDS = ("associative", "isotropic", "isotropic_associative", "b_real_associative")
KIND_ALIASES = {
    "assoc": "associative",
    "lagrangian": "isotropic",
    "iso": "isotropic",
    "ia": "isotropic_associative",
    "isotropic-associative": "isotropic_associative",
    "b-real": "b_real_associative",
    "b_real": "b_real_associative",
    "b-real-associative": "b_real_associative",
    "real-associative": "b_real_associative",
}
MEMBERSHIP_TOL = 1e-10


# -- vector helpers (both backends) ---------------------------------------


def _conj(v):
    v = np.asarray(v)
    if v.dtype == object:
        return np.array([conj(gaussian(x)) for x in v.flat], dtype=object).reshape(v.shape)
    return np.conj(v)


def _re(x):
    return gaussian(gaussian(x).x) if _is_exact(x) else np.real(x)


def _im(x):
    return gaussian(gaussian(x).y) if _is_exact(x) else np.imag(x)


def _is_exact(x) -> bool:
    return not isinstance(x, (float, complex, np.floating, np.complexfloating))


def bilinear(u, v):
    """B(u, v) = sum u_i v_i on C^7 (no conjugation)."""
    return np.sum(np.asarray(u) * np.asarray(v))


def hermitian(u, v):
    return np.sum(np.asarray(u) * _conj(v))


def omega(u, v):
    """Standard symplectic form sum e^i ^ f^i, equal to -Im h."""
    return -_im(hermitian(u, v))


def real_metric(u, v):
    return _re(hermitian(u, v))


def cross7(u, v):
    return cross(embed_imaginary(np.asarray(u)), embed_imaginary(np.asarray(v)))[..., 1:]


def bracket(u, v, w):
    """Associator bracket of imaginary octonions, as a full 8-vector."""
    return associator(*(embed_imaginary(np.asarray(x)) for x in (u, v, w)))


def _i_times(v):
    v = np.asarray(v)
    if v.dtype == object:
        return v * gaussian(0, 1)
    return 1j * v


# -- planes -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Plane:
    ambient: str
    basis: np.ndarray  # k x 7

    def __post_init__(self):
        if self.ambient not in AMBIENTS:
            raise InputError(f"unknown ambient {self.ambient!r}; expected one of {AMBIENTS}")
        b = np.asarray(self.basis)
        if b.ndim == 1:
            b = b[None, :]
        if b.ndim != 2 or b.shape[1] != 7 or b.shape[0] == 0:
            raise InputError(f"plane basis must be k x 7, got {b.shape}")
        if b.dtype != object:
            b = b.astype(complex) if self.ambient != "R7" else _as_real(b)
        elif self.ambient == "R7" and any(gaussian(x).y for x in b.flat):
            raise InputError("R7 planes need real coordinates")
        object.__setattr__(self, "basis", b)
        if _real_rank(self) != self.k * (2 if self.ambient == "C7" else 1):
            field_name = "C" if self.ambient == "C7" else "R"
            raise InputError(f"basis vectors are not linearly independent over {field_name}")

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    @property
    def exact(self) -> bool:
        return self.basis.dtype == object

    @classmethod
    def from_vectors(cls, ambient: str, vectors, exact: bool = False) -> "Plane":
        b = np.asarray(vectors)
        if ambient == "R14":
            b = np.atleast_2d(b)
            if b.shape[1] != 14:
                raise InputError("R14 vectors need 14 real coordinates")
            b = b[:, :7] + 1j * b[:, 7:] if not exact else _exact_from_r14(b)
        elif exact:
            b = exact_array(b)
        return cls(ambient, b)

    def as_r14(self) -> np.ndarray:
        b = to_float_array(self.basis)
        return np.hstack([b.real, b.imag])

    def vectors(self):
        return list(self.basis)


def _as_real(b):
    if np.iscomplexobj(b):
        if np.max(np.abs(b.imag)) > 0:
            raise InputError("R7 planes need real coordinates")
        b = b.real
    return b.astype(float)


def _exact_from_r14(b):
    b = exact_array(b)
    return b[:, :7] + b[:, 7:] * gaussian(0, 1)


def _real_rows(plane: Plane) -> np.ndarray:
    """Real spanning vectors of the plane as rows in R^7 or R^14."""
    b = plane.basis
    if plane.ambient == "R7":
        return b
    re = np.vectorize(_re, otypes=[object])(b) if plane.exact else b.real
    im = np.vectorize(_im, otypes=[object])(b) if plane.exact else b.imag
    rows = np.hstack([re, im])
    if plane.ambient == "C7":
        rows = np.vstack([rows, np.hstack([-im, re])])
    return rows


def _real_rank(plane: Plane) -> int:
    return linalg.rank_info(_real_rows(plane)).rank


def standard_plane(ambient: str = "R14", k: int = 3, exact: bool = True) -> Plane:
    """span(e_1, ..., e_k)."""
    M = np.eye(k, 7, dtype=int)
    return Plane(ambient, exact_array(M) if exact else M.astype(complex if ambient != "R7" else float))


# -- orthonormal frames -------------------------------------------------------


def _exact_sqrt(x):
    from sympy import Rational, integer_nthroot

    x = gaussian(x)
    if x.y or x.x <= 0:
        return None
    q = Rational(int(x.x.numerator), int(x.x.denominator))
    p, ok1 = integer_nthroot(int(q.p), 2)
    r, ok2 = integer_nthroot(int(q.q), 2)
    return gaussian(p) / r if ok1 and ok2 else None


def b_orthonormalize(plane: Plane, B=None) -> Plane:
    """Gram-Schmidt for the bilinear form B (identity by default), with pivoting.

    Real ambients take real combinations only, so each B(u, u) must be real
    and positive there; complex planes use the principal square root.
    Exact input stays exact when every normalization is a rational square.
    """
    B = np.eye(7, dtype=int) if B is None else np.asarray(B)
    exact = plane.exact and (B.dtype == object or np.issubdtype(B.dtype, np.integer))
    vecs = list(plane.basis) if exact else list(to_float_array(plane.basis))
    if exact:
        B = exact_array(B) if B.dtype != object else B
    real_field = plane.ambient != "C7"
    done: list = []
    step = 0
    while vecs:
        step += 1
        pivot = None
        for idx, u in enumerate(vecs):
            q = u @ B @ u
            if not is_zero(q, 1e-12):
                pivot = idx
                break
        if pivot is None and len(vecs) > 1:
            for a, b in combinations(range(len(vecs)), 2):
                u = vecs[a] + vecs[b]
                if not is_zero(u @ B @ u, 1e-12):
                    vecs[a] = u
                    pivot = a
                    break
        if pivot is None:
            raise DegeneracyError(
                f"step {step}: every remaining direction is B-null; B is degenerate on the plane"
            )
        u = vecs.pop(pivot)
        q = u @ B @ u
        if real_field and (abs(to_complex(q).imag) > 1e-12 or to_complex(q).real <= 0):
            raise DegeneracyError(
                f"step {step}: B(u, u) = {to_complex(q):.6g} has no real positive square root"
            )
        s = _exact_sqrt(q) if exact else None
        if s is None:
            if exact:
                return b_orthonormalize(Plane(plane.ambient, to_float_array(plane.basis)
                                              if plane.ambient != "R7" else to_float_array(plane.basis).real),
                                        to_float_array(B))
            s = np.sqrt(complex(q)) if not real_field else np.sqrt(complex(q).real)
        e = u / s
        done.append(e)
        rest = []
        for v in vecs:
            c = e @ B @ v
            if real_field and abs(to_complex(c).imag) > 1e-12:
                raise DegeneracyError(f"step {step}: projection coefficient {to_complex(c):.6g} is not real")
            if real_field and not exact:
                c = complex(c).real
            rest.append(v - c * e)
        vecs = rest
    out = np.array(done, dtype=object if exact else complex)
    if plane.ambient == "R7" and not exact:
        out = np.real(out)
    return Plane(plane.ambient, out)


def is_b_orthonormal(plane: Plane, tol: float = 1e-12) -> bool:
    G = np.array([[bilinear(u, v) for v in plane.basis] for u in plane.basis], dtype=object)
    for i in range(plane.k):
        for j in range(plane.k):
            d = G[i, j] - (1 if i == j else 0)
            if not is_zero(d, tol):
                return False
    return True


# -- symplectic classification ------------------------------------------------


@dataclass(frozen=True)
class SymplecticClass:
    kind: str
    complement: np.ndarray  # rows: basis of the omega-complement in R^14

    def __str__(self):
        return self.kind


def _omega_matrix(omega_form) -> np.ndarray:
    if omega_form is None:
        I, Z = np.eye(7), np.zeros((7, 7))
        return np.block([[Z, I], [-I, Z]])
    from .exterior import Multivector, two_form_matrix

    W = two_form_matrix(omega_form) if isinstance(omega_form, Multivector) else np.asarray(omega_form)
    W = to_float_array(W).real
    if W.shape != (14, 14):
        raise InputError(f"omega must be a 2-form on R^14, got matrix {W.shape}")
    if np.linalg.matrix_rank(W) < 14:
        raise InputError("omega is degenerate")
    return W


def symplectic_complement(rows: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Rows spanning {v : omega(u, v) = 0 for u in span(rows)}."""
    info = linalg.svd_rank(np.atleast_2d(rows) @ W)
    return info.null_basis.T.real


def _span_contains(A: np.ndarray, B: np.ndarray, tol: float = 1e-9) -> bool:
    """Whether every row of B lies in the row span of A."""
    if B.size == 0:
        return True
    if A.size == 0:
        return np.max(np.abs(B)) <= tol
    coef, *_ = np.linalg.lstsq(A.T, B.T, rcond=None)
    return bool(np.max(np.abs(A.T @ coef - B.T)) <= tol * max(1.0, np.max(np.abs(B))))


def classify_symplectic(plane: Plane, omega_form=None) -> SymplecticClass:
    """isotropic / coisotropic / symplectic / lagrangian / generic for a real plane in R^14."""
    if plane.ambient != "R14":
        raise InputError("symplectic classification needs an R14 plane")
    W = _omega_matrix(omega_form)
    rows = plane.as_r14()
    comp = symplectic_complement(rows, W)
    iso = _span_contains(comp, rows)
    coiso = _span_contains(rows, comp)
    if iso and coiso:
        kind = "lagrangian"
    elif iso:
        kind = "isotropic"
    elif coiso:
        kind = "coisotropic"
    else:
        both = np.vstack([rows, comp])
        inter = rows.shape[0] + comp.shape[0] - np.linalg.matrix_rank(both, tol=1e-9)
        kind = "symplectic" if inter == 0 else "generic"
    return SymplecticClass(kind, comp)


def unitary_frame_check(X, Y, tol: float = 1e-10) -> bool:
    """X^T X + Y^T Y = I and X^T Y = Y^T X for the frame z_j = x_j + i y_j."""
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    if X.shape != Y.shape or X.ndim != 2:
        raise InputError(f"frame blocks must have equal 2-d shapes, got {X.shape} and {Y.shape}")
    k = X.shape[1]
    ortho = np.max(np.abs(X.T @ X + Y.T @ Y - np.eye(k)))
    iso = np.max(np.abs(X.T @ Y - Y.T @ X))
    return bool(ortho <= tol and iso <= tol)


# -- membership predicates ------------------------------------------------------


def _require_three(plane: Plane):
    if plane.k != 3:
        raise InputError(f"associativity is defined for 3-planes, got k = {plane.k}")


def _small(values, tol: float) -> bool:
    arr = np.asarray(values)
    if arr.dtype == object:
        return all(is_zero(x) for x in arr.flat)
    return bool(np.max(np.abs(arr), initial=0.0) <= tol)


def associator_residual(plane: Plane):
    e1, e2, e3 = plane.basis
    return bracket(e1, e2, e3)


def is_associative(plane: Plane, tol: float = MEMBERSHIP_TOL) -> bool:
    """The associator bracket vanishes on a basis triple (hence on the plane)."""
    _require_three(plane)
    scale = max(1.0, float(np.max(np.abs(to_float_array(plane.basis))))) ** 3
    return _small(associator_residual(plane), tol * scale)


def _restricted(plane: Plane, form) -> np.ndarray:
    b = plane.basis
    return np.array([[form(u, v) for v in b] for u in b], dtype=object if plane.exact else complex)


def is_isotropic(plane: Plane, tol: float = MEMBERSHIP_TOL) -> bool:
    if plane.ambient != "R14":
        raise InputError("isotropy needs an R14 plane")
    return _small(_restricted(plane, omega), tol)


def is_isotropic_associative(plane: Plane, tol: float = MEMBERSHIP_TOL) -> bool:
    if plane.ambient != "R14":
        raise InputError("isotropic associative planes live in R14")
    _require_three(plane)
    return is_isotropic(plane, tol) and is_associative(plane, tol)


def b_real_conditions(plane: Plane, tol: float = MEMBERSHIP_TOL) -> dict:
    """The three conditions: Re B positive definite, Im B zero, associator zero."""
    if plane.ambient != "R14":
        raise InputError("B-real associative planes live in R14")
    _require_three(plane)
    G = to_float_array(_restricted(plane, bilinear))
    imag_zero = _small(_restricted(plane, lambda u, v: _im(bilinear(u, v))), tol)
    w = np.linalg.eigvalsh((G.real + G.real.T) / 2)
    return {"re_positive": bool(w.min() > tol), "im_zero": imag_zero,
            "associative": is_associative(plane, tol)}


def is_b_real_associative(plane: Plane, tol: float = MEMBERSHIP_TOL) -> bool:
    return all(b_real_conditions(plane, tol).values())


# -- tangent spaces ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TangentSpaceReport:
    grassmannian_kind: str
    method: str
    variant: str
    constraint_matrix: np.ndarray
    nullity: int
    rank: int
    unknowns: int
    basis_of_kernel: list
    singular_values: np.ndarray | None
    gap_ratio: float
    exact: bool
    ambient: str
    gauge: int = 0
    frame: str = "orthonormal"
    variants: dict = field(default_factory=dict)

    @property
    def well_separated(self) -> bool:
        return self.exact or self.gap_ratio > linalg.GAP_REQUIRED

    @property
    def complex_nullity(self) -> int | None:
        return self.nullity // 2 if self.ambient == "C7" else None

    def summary(self) -> dict:
        return {"kind": self.grassmannian_kind, "method": self.method, "variant": self.variant,
                "ambient": self.ambient, "nullity": self.nullity, "rank": self.rank,
                "unknowns": self.unknowns, "gap_ratio": self.gap_ratio, "exact": self.exact,
                "well_separated": self.well_separated, "frame": self.frame, "variants": self.variants}


def normalize_kind(kind: str) -> str:
    k = KIND_ALIASES.get(kind, kind)
    if k not in KINDS:
        raise InputError(f"unknown Grassmannian kind {kind!r}; expected one of {KINDS}")
    return k


def _null_rows(M) -> list:
    """Basis of {v : M v = 0} as a list of vectors (exact when M is exact)."""
    info = linalg.rank_info(M)
    return [info.null_basis[:, j] for j in range(info.nullity)]


def _real_directions(plane: Plane, vectors, complex_span: bool) -> list:
    out = list(vectors)
    if complex_span:
        out += [_i_times(v) for v in vectors]
    return out


def _b_complement(plane: Plane) -> list:
    """Complex basis of {v in C^7 : B(e, v) = 0 for e in the plane}."""
    return _null_rows(plane.basis)


def _real_complement(plane: Plane) -> list:
    """Basis of the g-orthogonal complement, as complex 7-vectors (real vectors for R7)."""
    rows = _real_rows(plane)
    null = _null_rows(rows)
    if plane.ambient == "R7":
        return null
    out = []
    for v in null:
        x, y = v[:7], v[7:]
        out.append(x + (y * gaussian(0, 1) if plane.exact else 1j * y))
    return out


def _zero_vec(exact: bool):
    return np.array([gaussian(0)] * 7, dtype=object) if exact else np.zeros(7, dtype=complex)








def _assoc_cross(e, vs):
    """sum_j e_j x v_j."""
    tot = cross7(e[0], vs[0])
    for j in range(1, 3):
        tot = tot + cross7(e[j], vs[j])
    return tot


def _assoc_bracket(e, ds):
    """Derivative of [e_1, e_2, e_3] in the directions ds."""
    return (bracket(ds[0], e[1], e[2]) + bracket(e[0], ds[1], e[2])
            + bracket(e[0], e[1], ds[2]))


def _omega_symmetric(e, ds):
    """omega(e_i, d_j) - omega(e_j, d_i) for i < j."""
    return [omega(e[i], ds[j]) - omega(e[j], ds[i]) for i, j in combinations(range(len(e)), 2)]


def _omega_linearized(e, ds):
    """d/dt omega(e_i + t d_i, e_j + t d_j) for i < j."""
    return [omega(ds[i], e[j]) + omega(e[i], ds[j]) for i, j in combinations(range(len(e)), 2)]


def _imb_linearized(e, ds):
    """d/dt Im B(e_i + t d_i, e_j + t d_j) for i <= j."""
    return [_im(bilinear(ds[i], e[j]) + bilinear(e[i], ds[j]))
            for i, j in combinations_with_replacement(range(len(e)), 2)]


def _w_so3(e, fs):
    """w(e_j, f_i) + w(e_i, f_j) with w = -Im B; in an orthonormal frame this is f_ij + f_ji."""
    return [-_im(bilinear(e[j], fs[i]) + bilinear(e[i], fs[j]))
            for i, j in combinations_with_replacement(range(len(e)), 2)]


def _lemma_frame(plane: Plane) -> tuple[list, str]:
    """A B-orthonormal frame of the plane when one exists, else the given basis."""
    if is_b_orthonormal(plane):
        return list(plane.basis), "orthonormal"
    try:
        return list(b_orthonormalize(plane).basis), "orthonormal"
    except DegeneracyError:
        return list(plane.basis), "bracket"


def _check_membership(plane: Plane, kind: str, tol: float):
    if kind == "associative":
        if plane.ambient == "R14":
            raise InputError("use isotropic_associative or b_real_associative for R14 planes")
        if not is_associative(plane, tol):
            raise PreconditionError("plane is not associative")
        G = to_float_array(_restricted(plane, bilinear))
        if abs(np.linalg.det(G)) < 1e-12:
            raise DegeneracyError(
                "B restricted to the plane is degenerate; the associative tangent description "
                "needs a B-nondegenerate plane"
            )
    elif kind == "isotropic":
        if plane.ambient != "R14" or not is_isotropic(plane, tol):
            raise PreconditionError("plane is not an isotropic plane of R14")
    elif kind == "isotropic_associative":
        if not is_isotropic_associative(plane, tol):
            raise PreconditionError("plane is not isotropic associative")
        G = to_float_array(_restricted(plane, bilinear))
        if abs(np.linalg.det(G)) < 1e-12:
            raise DegeneracyError(
                "B restricted to the plane is degenerate; the B-orthogonal complement is not transverse"
            )
    elif kind == "b_real_associative":
        if not is_b_real_associative(plane, tol):
            raise PreconditionError(f"plane is not B-real associative: {b_real_conditions(plane, tol)}")


def _lemma_system(plane: Plane, kind: str, variant: str):
    exact = plane.exact
    k = plane.k
    e, frame = _lemma_frame(plane) if kind != "isotropic" else (list(plane.basis), "basis")
    if kind == "associative":
        comp = _b_complement(plane) if plane.ambient == "C7" else _real_complement(plane)
        dirs = _real_directions(plane, comp, plane.ambient == "C7")
        unknowns = [(j, d) for j in range(3) for d in dirs]

        def constraint(vs):
            val = _assoc_cross(e, vs) if frame == "orthonormal" else _assoc_bracket(e, vs)
            return list(val), []

        return k, unknowns, constraint, frame
    if kind == "isotropic":
        comp = _real_complement(plane)
        unknowns = [(j, d) for j in range(k) for d in comp]
        return k, unknowns, lambda vs: ([], _omega_symmetric(e, vs)), frame
    # R14 three-planes: unknowns f_i in J L and v_i in the B-complement of L_C.
    Vc = _b_complement(plane)
    vdirs = _real_directions(plane, Vc, True)
    fdirs = [_i_times(x) for x in e]
    unknowns = [(j, ("f", d)) for j in range(3) for d in fdirs] + [(j, ("v", d)) for j in range(3) for d in vdirs]

    def split(deltas):
        fs = [_zero_vec(exact) for _ in range(3)]
        vs = [_zero_vec(exact) for _ in range(3)]
        for j, (tag, d) in deltas:
            if tag == "f":
                fs[j] = fs[j] + d
            else:
                vs[j] = vs[j] + d
        return fs, vs

    def assoc(vs):
        return list(_assoc_cross(e, vs) if frame == "orthonormal" else _assoc_bracket(e, vs))

    if kind == "isotropic_associative":
        def constraint(pairs):
            fs, vs = split(pairs)
            if variant == "full":
                tot = [fs[j] + vs[j] for j in range(3)]
                return assoc(vs), _omega_symmetric(e, tot)
            return assoc(vs), _omega_symmetric(e, fs)
    else:
        def constraint(pairs):
            fs, vs = split(pairs)
            return assoc(vs), _w_so3(e, fs)

    return 3, unknowns, constraint, frame


def _assemble_tagged(k, unknowns, constraint, exact):
    cols = []
    for slot, d in unknowns:
        if isinstance(d, tuple):
            cplx, real = constraint([(slot, d)])
        else:
            deltas = [_zero_vec(exact) for _ in range(k)]
            deltas[slot] = d
            cplx, real = constraint(deltas)
        cols.append([_re(c) for c in cplx] + [_im(c) for c in cplx] + list(real))
    M = np.array(cols, dtype=object).T
    return M if exact else to_float_array(M).real


def _unknown_vectors(k, unknowns, null_basis, exact):
    out = []
    for j in range(null_basis.shape[1]):
        vec = [_zero_vec(exact) for _ in range(k)]
        for (slot, d), c in zip(unknowns, null_basis[:, j]):
            d = d[1] if isinstance(d, tuple) else d
            if not is_zero(c, 0.0):
                vec[slot] = vec[slot] + d * (c if exact else np.real(c))
        out.append(vec)
    return out


def _linearized_system(plane: Plane, kind: str):
    exact = plane.exact
    k = plane.k
    e = list(plane.basis)
    one = gaussian(1) if exact else 1.0
    units = []
    for i in range(7):
        u = _zero_vec(exact)
        u[i] = one
        units.append(u)
    if plane.ambient == "R7":
        dirs = units
    else:
        dirs = units + [_i_times(u) for u in units]
    unknowns = [(j, d) for j in range(k) for d in dirs]
    gauge = k * k * (2 if plane.ambient == "C7" else 1)

    if kind == "associative":
        def constraint(ds):
            return list(_assoc_bracket(e, ds)), []
    elif kind == "isotropic":
        def constraint(ds):
            return [], _omega_linearized(e, ds)
    elif kind == "isotropic_associative":
        def constraint(ds):
            return list(_assoc_bracket(e, ds)), _omega_linearized(e, ds)
    else:
        def constraint(ds):
            return list(_assoc_bracket(e, ds)), _imb_linearized(e, ds)
    return k, unknowns, constraint, gauge


def tangent_dimension(plane: Plane, kind: str, method: str = "lemma", variant: str = "stated",
                      backend: str | None = None, tol: float = MEMBERSHIP_TOL,
                      rank_rtol: float = linalg.RANK_RTOL, with_variants: bool = True) -> TangentSpaceReport:
    """Assemble the linear tangent conditions at ``plane`` and return the nullity.

    ``method="lemma"`` uses the unknowns and conditions of the tangent
    descriptions (complement-valued maps); ``method="linearized"``
    differentiates the defining equations over all ambient directions and
    subtracts the directions tangent to the plane itself.  ``variant`` only
    matters for isotropic_associative: ``stated`` imposes omega-symmetry on
    the J L components, ``full`` on the whole perturbation.  Off real
    planes the report also carries the other variant's nullity.
    """
    kind = normalize_kind(kind)
    if backend == "float" and plane.exact:
        plane = Plane(plane.ambient, to_float_array(plane.basis) if plane.ambient != "R7"
                      else to_float_array(plane.basis).real)
    elif backend == "exact" and not plane.exact:
        raise InputError("exact backend needs exact plane coordinates")
    if kind == "isotropic" and plane.ambient != "R14":
        raise InputError("isotropic planes live in R14")
    if kind != "isotropic":
        _require_three(plane)
    _check_membership(plane, kind, tol)
    if method == "lemma":
        k, unknowns, constraint, frame = _lemma_system(plane, kind, variant)
        gauge = 0
    elif method == "linearized":
        k, unknowns, constraint, gauge = _linearized_system(plane, kind)
        frame = "ambient"
    else:
        raise InputError(f"unknown method {method!r}")
    M = _assemble_tagged(k, unknowns, constraint, plane.exact)
    info = linalg.rank_info(M, rank_rtol)
    kernel = _unknown_vectors(k, unknowns, info.null_basis, plane.exact)
    report = TangentSpaceReport(
        kind, method, variant if kind == "isotropic_associative" else "stated", M,
        info.nullity - gauge, info.rank, len(unknowns) - gauge, kernel, info.singular_values,
        info.gap_ratio, info.exact, plane.ambient, gauge, frame,
    )
    if kind == "isotropic_associative" and method == "lemma" and with_variants:
        other = "full" if variant == "stated" else "stated"
        if _needs_variants(plane):
            alt = tangent_dimension(plane, kind, "lemma", other, None, tol, rank_rtol, with_variants=False)
            alt_nullity = alt.nullity
        else:
            alt_nullity = report.nullity
        object.__setattr__(report, "variants", {variant: report.nullity, other: alt_nullity})
    return report


def _needs_variants(plane: Plane) -> bool:
    """The two isotropic-associative variants can differ only off real planes."""
    b = to_float_array(plane.basis)
    return bool(np.max(np.abs(b.imag)) > 0)


def gauge_in_kernel(report: TangentSpaceReport, plane: Plane, tol: float = 1e-9) -> bool:
    """Directions inside the plane solve the linearized system (sanity check for the oracle)."""
    if report.method != "linearized":
        return True
    k = plane.k
    M = to_float_array(report.constraint_matrix).real
    ncols = M.shape[1] // k
    cols = []
    units_coords = _real_rows(plane).astype(complex) if plane.exact else _real_rows(plane)
    units_coords = to_float_array(units_coords).real
    for slot in range(k):
        for r in units_coords:
            x = np.zeros(M.shape[1])
            x[slot * ncols:(slot + 1) * ncols] = r[:ncols]
            cols.append(x)
    X = np.array(cols).T
    return bool(np.max(np.abs(M @ X)) <= tol * max(1.0, np.max(np.abs(M))))


def homogeneous_dimension(kind: str, k: int = 3, n: int = 7) -> int:
    """Real dimension predicted by the homogeneous-space models.

    associative: G2 / SO(4) with dim G2 from the derivation algebra;
    isotropic: U(n) / (O(k) x U(n - k)), which is U(n) / O(n) for k = n.
    """
    kind = normalize_kind(kind)
    if kind == "associative":
        from .octonion import derivation_basis

        return len(derivation_basis()) - 6
    if kind == "isotropic":
        return n * n - k * (k - 1) // 2 - (n - k) ** 2
    raise InputError(f"no homogeneous model for {kind}")


def substitution_residual(report: TangentSpaceReport, plane: Plane) -> float:
    """max |sum e_j x v_j| over the kernel of an associative lemma system."""
    e, frame = _lemma_frame(plane)
    worst = 0.0
    for vec in report.basis_of_kernel:
        r = _assoc_cross(e, vec) if frame == "orthonormal" else _assoc_bracket(e, vec)
        worst = max(worst, float(np.max(np.abs(to_float_array(r)))))
    return worst


# -- JSON -----------------------------------------------------------------------------


def plane_to_json(plane: Plane) -> dict:
    b = to_float_array(plane.basis)
    if plane.ambient == "R14":
        return {"ambient": "R14", "basis": [list(map(float, np.concatenate([v.real, v.imag]))) for v in b]}
    if plane.ambient == "R7":
        return {"ambient": "R7", "basis": [list(map(float, v.real)) for v in b]}
    return {"ambient": "C7", "basis": [[[float(z.real), float(z.imag)] for z in v] for v in b]}


def plane_from_json(obj, exact: bool = False) -> Plane:
    from fractions import Fraction

    try:
        ambient = obj["ambient"]
        vecs = obj["basis"]
    except (KeyError, TypeError) as exc:
        raise InputError("plane JSON needs 'ambient' and 'basis'") from exc
    if ambient not in AMBIENTS:
        raise InputError(f"unknown ambient {ambient!r}")
    if not isinstance(vecs, list) or not vecs:
        raise InputError("'basis' must be a nonempty list of vectors")

    def num(x):
        if isinstance(x, bool) or not isinstance(x, (int, float, str)):
            raise InputError(f"bad coordinate {x!r}")
        if exact:
            try:
                return Fraction(x) if not isinstance(x, float) else Fraction(x).limit_denominator(10**12)
            except ValueError as exc:
                raise InputError(f"bad coordinate {x!r}") from exc
        try:
            return float(x)
        except ValueError as exc:
            raise InputError(f"bad coordinate {x!r}") from exc

    if ambient == "C7":
        rows = []
        for v in vecs:
            if not isinstance(v, list) or len(v) != 7 or any(not isinstance(p, list) or len(p) != 2 for p in v):
                raise InputError("C7 vectors are 7 [re, im] pairs")
            if exact:
                rows.append([gaussian(num(p[0]), num(p[1])) for p in v])
            else:
                rows.append([complex(num(p[0]), num(p[1])) for p in v])
        return Plane("C7", np.array(rows, dtype=object if exact else complex))
    width = 14 if ambient == "R14" else 7
    for v in vecs:
        if not isinstance(v, list) or len(v) != width:
            raise InputError(f"{ambient} vectors need {width} coordinates")
    data = [[num(x) for x in v] for v in vecs]
    if exact:
        return Plane.from_vectors(ambient, np.array(data, dtype=object), exact=True)
    return Plane.from_vectors(ambient, np.array(data, dtype=float))
