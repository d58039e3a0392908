"""Nondegenerate 3-forms in dimension 7 and the structures they induce.

The metric of a 3-form ``phi`` relative to a volume form ``Omega`` is the
symmetric matrix ``b`` defined by

    iota(e_i) phi ^ iota(e_j) phi ^ phi = 6 b_ij Omega

in the standard coordinates of the ambient 7-space.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement

import numpy as np
from sympy import Rational, integer_nthroot

from . import linalg
from .errors import DegeneracyError, InputError, PreconditionError
from .exterior import Multivector, contract, pullback, to_tensor, top_coefficient, wedge
from .octonion import PHI0_TERMS
from .scalars import gaussian, is_exact_scalar, is_zero, to_complex, to_float_array

DIM = 7
POSITIVITY_TOL = 1e-10
DEFAULT_TRIALS = 10_000


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """Symmetric bilinear form ``B(u, v) = u^T M v`` (no conjugation)."""

    matrix: np.ndarray
    signature: tuple[int, int] | None = None

    def __post_init__(self):
        M = np.asarray(self.matrix)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise InputError(f"bilinear form needs a square matrix, got {M.shape}")
        object.__setattr__(self, "matrix", M)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def exact(self) -> bool:
        return self.matrix.dtype == object

    def __call__(self, u, v):
        u, v = np.asarray(u), np.asarray(v)
        M = self.matrix
        if self.exact and (u.dtype != object or v.dtype != object):
            M = to_float_array(M)
        return u @ M @ v

    def float_matrix(self) -> np.ndarray:
        return to_float_array(self.matrix) if self.exact else self.matrix

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.float_matrix().imag) <= tol))

    def det(self):
        return linalg.det(self.matrix)

    def with_signature(self, tol: float = POSITIVITY_TOL) -> "BilinearForm":
        return BilinearForm(self.matrix, real_signature(self.float_matrix(), tol))


def real_signature(M: np.ndarray, tol: float = POSITIVITY_TOL) -> tuple[int, int] | None:
    """(positive, negative) eigenvalue counts of a real symmetric matrix; None if complex."""
    M = np.asarray(M)
    if np.iscomplexobj(M):
        if np.max(np.abs(M.imag), initial=0.0) > 1e-12:
            return None
        M = M.real
    w = np.linalg.eigvalsh((M + M.T) / 2)
    scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    return int(np.sum(w > tol * scale)), int(np.sum(w < -tol * scale))


@dataclass(frozen=True, eq=False)
class G2Space:
    """(V, phi, Omega, B) with 6 B(u, v) Omega = iota(u)phi ^ iota(v)phi ^ phi."""

    phi: Multivector
    omega7: Multivector
    B: BilinearForm
    field: str = "C"
    metadata: dict = dc_field(default_factory=dict)

    def g(self, u, v):
        """The (complex-)bilinear metric evaluated on coordinate vectors."""
        return self.B(u, v)

    def metricvol_residual(self, u, v) -> float:
        lhs = _triple(self.phi, u, v)
        rhs = self.omega7 * (6 * self.B(u, v))
        return (lhs - rhs).max_abs()


def phi0(field: str = "C", exact: bool = True) -> Multivector:
    """The reference 3-form e^{123} - e^{145} - e^{167} - e^{246} + e^{257} - e^{347} - e^{356}."""
    coeffs = {idx: (gaussian(c) if exact else float(c)) for idx, c in PHI0_TERMS.items()}
    return Multivector.from_indices(DIM, coeffs, field)


def volume(coeff=1, exact: bool = True) -> Multivector:
    return Multivector.volume(DIM, gaussian(coeff) if exact and is_exact_scalar(coeff) else coeff)


def _unit(i: int, exact: bool):
    v = [0] * DIM
    v[i] = 1
    return [gaussian(x) for x in v] if exact else v


def _triple(phi: Multivector, u, v) -> Multivector:
    return wedge(wedge(contract(u, phi), contract(v, phi)), phi)


def _check_three_form(phi: Multivector):
    if phi.dim != DIM:
        raise InputError(f"expected a form on a 7-dimensional space, got dim {phi.dim}")
    if not phi.is_zero() and phi.grade != 3:
        raise InputError(f"expected a 3-form, got grades {sorted(phi.grades)}")


def metric_from_form(phi: Multivector, omega7: Multivector | None = None,
                     require_nondegenerate: bool = True) -> BilinearForm:
    """Extract b with iota(e_i)phi ^ iota(e_j)phi ^ phi = 6 b_ij omega7.

    Raises DegeneracyError when b is singular and ``require_nondegenerate``.
    """
    _check_three_form(phi)
    exact = phi.exact
    if omega7 is None:
        omega7 = volume(exact=exact)
    if omega7.dim != DIM:
        raise InputError("volume form must live in dimension 7")
    exact = exact and omega7.exact
    b = np.empty((DIM, DIM), dtype=object if exact else complex)
    units = [_unit(i, exact) for i in range(DIM)]
    contracted = [contract(e, phi) for e in units]
    for i, j in combinations_with_replacement(range(DIM), 2):
        top = wedge(wedge(contracted[i], contracted[j]), phi)
        c = top_coefficient(top, omega7) / 6
        b[i, j] = b[j, i] = c
    form = BilinearForm(b)
    d = form.det()
    if require_nondegenerate and is_zero(d, 1e-12 * max(1.0, _max_abs(b)) ** DIM):
        raise DegeneracyError(
            "induced metric is degenerate (det b = 0); the 3-form is not nondegenerate"
        )
    if phi.field == "R" or form.is_real():
        form = form.with_signature() if not exact else BilinearForm(b, real_signature(to_float_array(b)))
    return form


def _max_abs(M) -> float:
    return float(np.max(np.abs(to_float_array(M))))


@dataclass(frozen=True)
class NondegeneracyVerdict:
    nondegenerate: bool
    trials: int
    min_covector_norm: float
    metric_det: complex
    confidence: str

    def __bool__(self):
        return self.nondegenerate


def is_nondegenerate(phi: Multivector, trials: int = DEFAULT_TRIALS, seed: int = 0,
                     tol: float = 1e-10) -> NondegeneracyVerdict:
    """Probabilistic nondegeneracy test.

    Samples random independent pairs (u, v) and checks that phi(u, v, .) is
    nonzero; det b != 0 is additionally required.  A True verdict is
    evidence, not a certificate.
    """
    _check_three_form(phi)
    if phi.is_zero():
        return NondegeneracyVerdict(False, 0, 0.0, 0j, "zero form")
    b = metric_from_form(phi, volume(exact=phi.exact), require_nondegenerate=False)
    d = to_complex(b.det())
    scale = max(phi.max_abs(), 1e-300) ** (3 * DIM)
    if abs(d) <= tol * scale:
        return NondegeneracyVerdict(False, 0, 0.0, d, "certain: det b = 0")
    T = to_tensor(phi)
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((trials, DIM)) + 1j * rng.standard_normal((trials, DIM))
    v = rng.standard_normal((trials, DIM)) + 1j * rng.standard_normal((trials, DIM))
    cov = np.einsum("ijk,ni,nj->nk", T, u, v)
    norms = np.linalg.norm(cov, axis=1) / (np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
    mn = float(norms.min()) if trials else float("inf")
    ok = mn > tol * phi.max_abs()
    conf = f"probabilistic: {trials} random pairs, min |phi(u,v,.)| = {mn:.3e}"
    return NondegeneracyVerdict(bool(ok), trials, mn, d, conf)


@dataclass(frozen=True, eq=False)
class Normalization:
    omega7: Multivector
    B: BilinearForm
    scale: object
    norm_before: object
    root: str = "principal"
    exact: bool = False


def top_form_norm(omega7: Multivector, b: BilinearForm):
    """N(omega7): the quadratic form induced by b on top-degree forms, c^2 det(b^{-1})."""
    c = omega7.terms.get((1 << DIM) - 1, 0)
    if is_zero(c):
        raise InputError("volume form is zero")
    return c * c / b.det()


def normalize_volume(phi: Multivector, omega7: Multivector | None = None,
                     root: str = "principal") -> Normalization:
    """Rescale omega7 -> s*omega7 (and b -> b/s) so that N(omega7) = 1.

    N scales as s^9, so s is a 9th root of 1/N(omega7), which is det b when
    omega7 = e^{1..7}.  ``root="principal"`` takes the principal complex
    root; ``root="real"`` takes the real root of a real target (the choice
    that keeps real forms real).  Exact inputs stay exact when the root is
    rational.
    """
    if root not in ("principal", "real"):
        raise InputError(f"root must be 'principal' or 'real', got {root!r}")
    if omega7 is None:
        omega7 = volume(exact=phi.exact)
    b = metric_from_form(phi, omega7, require_nondegenerate=False)
    d = b.det()
    if is_zero(d, 1e-300):
        raise DegeneracyError("det b = 0: cannot normalize the volume form")
    N = top_form_norm(omega7, b)
    target = 1 / N
    t = to_complex(target)
    real_root = root == "real" and abs(t.imag) <= 1e-15 * abs(t)
    s = _exact_ninth_root(target, allow_negative=real_root) if b.exact and omega7.exact else None
    exact = s is not None
    if s is None and real_root:
        s = float(np.sign(t.real) * abs(t.real) ** (1.0 / 9.0))
    elif s is None:
        s = complex(t) ** (1.0 / 9.0)
        if abs(s.imag) < 1e-15 * abs(s):
            s = s.real
    new_omega = omega7 * s
    new_b = BilinearForm(b.matrix / s)
    if new_b.is_real():
        new_b = BilinearForm(new_b.matrix, real_signature(new_b.float_matrix()))
    return Normalization(new_omega, new_b, s, N, "real" if real_root else "principal", exact)


def _exact_ninth_root(x, allow_negative: bool = False):
    x = gaussian(x)
    if x.y or x.x == 0 or (x.x < 0 and not allow_negative):
        return None
    sign = -1 if x.x < 0 else 1
    q = Rational(int(abs(x.x).numerator), int(abs(x.x).denominator))
    num, ok1 = integer_nthroot(int(q.p), 9)
    den, ok2 = integer_nthroot(int(q.q), 9)
    if ok1 and ok2:
        return gaussian(sign * num) / den
    return None


def is_positive_definite(b: BilinearForm, tol: float = POSITIVITY_TOL) -> tuple[bool, float]:
    """(verdict, smallest eigenvalue); exact matrices use leading principal minors."""
    M = b.matrix
    if b.exact:
        for x in M.flat:
            if gaussian(x).y:
                return False, float("nan")
        minors = [linalg.exact_det(M[:k, :k]) for k in range(1, b.n + 1)]
        ok = all(m.x > 0 for m in minors)
        w = np.linalg.eigvalsh(to_float_array(M).real)
        return ok, float(w.min())
    F = b.float_matrix()
    if np.max(np.abs(F.imag)) > 1e-12:
        return False, float("nan")
    w = np.linalg.eigvalsh((F.real + F.real.T) / 2)
    return bool(w.min() > tol), float(w.min())


def complexify(phi_real: Multivector) -> G2Space:
    """Complex G2-space (C^7, phi_C, Omega_C, g_C) from a positive real 3-form.

    The volume form is the real rescaling of e^{1..7} with N(Omega) = 1
    (so its orientation may flip); phi_C has the same coefficients as phi.
    """
    _check_three_form(phi_real)
    for idx, c in phi_real.items():
        if abs(to_complex(c).imag) > 0:
            raise InputError(f"real 3-form has a non-real coefficient at {idx}")
    norm = normalize_volume(phi_real, root="real")
    ok, lam = is_positive_definite(norm.B)
    if not ok:
        raise PreconditionError(
            f"3-form is not positive: induced metric has eigenvalue {lam:.6g} <= 0"
        )
    phi_c = Multivector(DIM, dict(phi_real.terms), "C", phi_real.tol)
    return G2Space(phi_c, Multivector(DIM, dict(norm.omega7.terms), "C"), BilinearForm(norm.B.matrix),
                   "C", {"root": norm.root, "scale": norm.scale})


def hermitian_extension(g: BilinearForm) -> tuple[BilinearForm, Multivector]:
    """Hermitian extension h of a positive definite g on R^7 to C^7 = R^14.

    h(x+iy, z+iw) = g(x,z) + g(y,w) + i(g(y,z) - g(x,w)).  Returns the real
    part (a positive definite form on R^14) and the imaginary part as a
    2-form omega on R^14 with coordinates (x_1..x_7, y_1..y_7).
    """
    ok, lam = is_positive_definite(g)
    if not ok:
        raise PreconditionError(f"g must be positive definite (min eigenvalue {lam:.6g})")
    G = g.float_matrix().real
    n = G.shape[0]
    Z = np.zeros_like(G)
    h_re = BilinearForm(np.block([[G, Z], [Z, G]]), (2 * n, 0))
    W = np.block([[Z, -G], [G, Z]])
    from .exterior import two_form_from_matrix

    return h_re, two_form_from_matrix(W, "R")


def hermitian(g: BilinearForm, z1, z2) -> complex:
    """h(z1, z2) = z1^T g conj(z2) for complex 7-vectors."""
    return np.asarray(z1) @ g.float_matrix() @ np.conj(np.asarray(z2))


def omega_u(phi: Multivector, u, tol: float = 1e-10) -> Multivector:
    """Omega_u = (iota(u)phi ^ iota(u)phi ^ phi) / 6 for Q(u) = 1."""
    _check_three_form(phi)
    b = metric_from_form(phi, volume(exact=phi.exact), require_nondegenerate=False)
    u = list(u)
    q = b(np.array(u, dtype=b.matrix.dtype), np.array(u, dtype=b.matrix.dtype))
    if is_exact_scalar(q) and all(is_exact_scalar(x) for x in u):
        if bool(gaussian(q) - 1):
            raise PreconditionError(f"omega_u needs Q(u) = 1, got {q}")
    elif abs(to_complex(q) - 1) > tol:
        raise PreconditionError(f"omega_u needs Q(u) = 1, got {to_complex(q):.6g}")
    return _triple(phi, u, u) / 6


def metricvol_residual(phi: Multivector, b: BilinearForm, omega7: Multivector, u, v) -> float:
    """Max-abs of iota(u)phi ^ iota(v)phi ^ phi - 6 B(u,v) omega7."""
    lhs = _triple(phi, u, v)
    return (lhs - omega7 * (6 * b(np.asarray(u), np.asarray(v)))).max_abs()


def random_sl(rng: np.random.Generator, n: int = DIM, complex_entries: bool = True) -> np.ndarray:
    """Random unit-determinant matrix (well conditioned: identity plus a modest perturbation)."""
    A = np.eye(n) + 0.4 * rng.standard_normal((n, n))
    if complex_entries:
        A = A + 0.4j * rng.standard_normal((n, n))
    d = np.linalg.det(A)
    return A / d ** (1.0 / n)


def pull_back(L, phi: Multivector) -> Multivector:
    return pullback(L, phi)


def random_g2(rng: np.random.Generator, complex_entries: bool = True, scale: float = 0.5) -> np.ndarray:
    """exp of a random derivation of the octonions: an element of G2 (or G2^C)."""
    from scipy.linalg import expm

    from .octonion import derivation_basis

    basis = _derivations()
    c = rng.standard_normal(len(basis))
    if complex_entries:
        c = c + 1j * rng.standard_normal(len(basis))
    D = np.tensordot(c, basis, axes=1) * scale
    return expm(D)


_DER_CACHE: list = []


def _derivations() -> np.ndarray:
    if not _DER_CACHE:
        from .octonion import derivation_basis

        _DER_CACHE.append(derivation_basis())
    return _DER_CACHE[0]
