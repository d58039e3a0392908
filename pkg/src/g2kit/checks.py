"""Registry of named numerical checks grouped into suites.

Each check draws from its own generator seeded by ``seed + crc32(name)``,
so results do not depend on which other checks run or in what order.
A check returns ``(max_residual, samples)``; it passes when the residual
is at most its tolerance.  Counting checks (dimensions, exact identities)
report the number of mismatches as the residual, with tolerance 0.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from . import exterior, flatdeform, g2core, grassmann, linalg, octonion, sympcompat
from .errors import InputError
from .scalars import EXACT, FLOAT, exact_array, gaussian, max_abs, to_float_array

SUITES = ("exterior", "octonion", "g2core", "grassmann", "sympcompat", "flatdeform")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    func: Callable
    tol: float
    samples: int | None  # None: fixed-size check, unaffected by --samples


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    max_residual: float
    samples: int
    seed: int
    tol: float
    backend: str

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "max_residual": self.max_residual,
                "samples": self.samples, "seed": self.seed, "tol": self.tol, "backend": self.backend}


REGISTRY: dict[str, list[Check]] = {s: [] for s in SUITES}


def check(suite: str, name: str, tol: float, samples: int | None = None):
    def deco(func):
        REGISTRY[suite].append(Check(suite, name, func, tol, samples))
        return func
    return deco


def check_seed(seed: int, name: str) -> int:
    return (seed + zlib.crc32(name.encode())) % 2**32


def run_check(c: Check, seed: int, samples: int | None = None, tol: float | None = None,
              backend: str = EXACT) -> CheckResult:
    s = check_seed(seed, c.name)
    n = c.samples if samples is None or c.samples is None else samples
    residual, used = c.func(np.random.default_rng(s), n, backend)
    residual = float(residual)
    limit = c.tol if tol is None else tol
    status = "pass" if residual <= limit else "fail"
    return CheckResult(c.name, status, residual, int(used), s, limit, backend)


def suite_checks(suite: str) -> list[Check]:
    if suite == "all":
        return [c for s in SUITES for c in REGISTRY[s]]
    if suite not in REGISTRY:
        raise InputError(f"unknown suite {suite!r}; expected one of {SUITES + ('all',)}")
    return list(REGISTRY[suite])


# -- shared samplers -------------------------------------------------------------


def _rand_oct(rng, n, imaginary=False):
    z = rng.standard_normal((n, 8)) + 1j * rng.standard_normal((n, 8))
    if imaginary:
        z[:, 0] = 0
    return z


def _rel(err, *scales):
    s = np.ones_like(np.abs(err))
    for x in scales:
        s = s * x
    return float(np.max(np.abs(err) / np.maximum(s, 1e-300)))


def _norm2(z):
    return np.sum(np.abs(z) ** 2, axis=-1)


def _mismatch(a: tuple, b: tuple) -> int:
    return int(np.sum((a[0] != b[0]) | (a[1] != b[1])))


def _split_random(rng, n, imaginary=False):
    return octonion.SplitOctonions.random(rng, n, imaginary=imaginary)


# -- octonion ----------------------------------------------------------------------


@check("octonion", "Q(uv)=Q(u)Q(v)", tol=1e-9, samples=10_000)
def _composition(rng, n, backend):
    if backend == EXACT:
        u, v = _split_random(rng, n), _split_random(rng, n)
        lhs = (u * v).quadratic()
        rhs = octonion.complex_mul(u.quadratic(), v.quadratic())
        return _mismatch(lhs, rhs), n
    u, v = _rand_oct(rng, n), _rand_oct(rng, n)
    lhs = octonion.quadratic(octonion.multiply(u, v))
    rhs = octonion.quadratic(u) * octonion.quadratic(v)
    return _rel(lhs - rhs, _norm2(u), _norm2(v)), n


@check("octonion", "B(uv,uv')=Q(u)B(v,v')", tol=1e-9, samples=10_000)
def _left_orthogonal(rng, n, backend):
    if backend == EXACT:
        u, v, w = (_split_random(rng, n) for _ in range(3))
        lhs = (u * v).bilinear(u * w)
        rhs = octonion.complex_mul(u.quadratic(), v.bilinear(w))
        return _mismatch(lhs, rhs), n
    u, v, w = (_rand_oct(rng, n) for _ in range(3))
    lhs = octonion.bilinear(octonion.multiply(u, v), octonion.multiply(u, w))
    rhs = octonion.quadratic(u) * octonion.bilinear(v, w)
    return _rel(lhs - rhs, _norm2(u), np.sqrt(_norm2(v) * _norm2(w))), n


@check("octonion", "B(vu,v'u)=B(v,v')Q(u)", tol=1e-9, samples=10_000)
def _right_orthogonal(rng, n, backend):
    if backend == EXACT:
        u, v, w = (_split_random(rng, n) for _ in range(3))
        lhs = (v * u).bilinear(w * u)
        rhs = octonion.complex_mul(v.bilinear(w), u.quadratic())
        return _mismatch(lhs, rhs), n
    u, v, w = (_rand_oct(rng, n) for _ in range(3))
    lhs = octonion.bilinear(octonion.multiply(v, u), octonion.multiply(w, u))
    rhs = octonion.bilinear(v, w) * octonion.quadratic(u)
    return _rel(lhs - rhs, _norm2(u), np.sqrt(_norm2(v) * _norm2(w))), n


@check("octonion", "[u,v,w]=u*(v*w)+B(u,v)w-B(u,w)v", tol=1e-9, samples=10_000)
def _bracket_alternative(rng, n, backend):
    if backend == EXACT:
        u, v, w = (_split_random(rng, n, imaginary=True) for _ in range(3))
        lhs = u.associator(v, w)
        rhs = u.cross(v.cross(w)) + w.scale(u.bilinear(v)) - v.scale(u.bilinear(w))
        return int(np.sum(~(lhs - rhs).is_zero())), n
    u, v, w = (_rand_oct(rng, n, imaginary=True) for _ in range(3))
    lhs = octonion.associator(u, v, w)
    rhs = (octonion.cross(u, octonion.cross(v, w))
           + octonion.bilinear(u, v)[:, None] * w - octonion.bilinear(u, w)[:, None] * v)
    scale = np.sqrt(_norm2(u) * _norm2(v) * _norm2(w))
    return _rel(np.max(np.abs(lhs - rhs), axis=1), scale), n


@check("octonion", "phi0(u,v,w)=B(u*v,w) on basis triples", tol=0)
def _phi0_table(rng, n, backend):
    phi = g2core.phi0(exact=True)
    bad = 0
    for i, j, k in combinations(range(1, 8), 3):
        e = [octonion.unit(x, dtype=object) for x in (i, j, k)]
        e = [exact_array(x) for x in e]
        val = octonion.bilinear(octonion.cross(e[0], e[1]), e[2])
        bad += bool(gaussian(val) - gaussian(phi.coefficient(i, j, k)))
    return bad, 35


@check("octonion", "conj(uv)=conj(v)conj(u)", tol=1e-12, samples=1_000)
def _conjugate_product(rng, n, backend):
    if backend == EXACT:
        u, v = _split_random(rng, n), _split_random(rng, n)
        d = (u * v).conjugate() - v.conjugate() * u.conjugate()
        return int(np.sum(~d.is_zero())), n
    u, v = _rand_oct(rng, n), _rand_oct(rng, n)
    d = octonion.conjugate(octonion.multiply(u, v)) - octonion.multiply(octonion.conjugate(v), octonion.conjugate(u))
    return _rel(np.max(np.abs(d), axis=1), np.sqrt(_norm2(u) * _norm2(v))), n


@check("octonion", "[u,u,v]=0", tol=1e-12, samples=1_000)
def _alternativity(rng, n, backend):
    if backend == EXACT:
        u, v = _split_random(rng, n), _split_random(rng, n)
        return int(np.sum(~u.associator(u, v).is_zero())), n
    u, v = _rand_oct(rng, n), _rand_oct(rng, n)
    d = octonion.associator(u, u, v)
    return _rel(np.max(np.abs(d), axis=1), _norm2(u), np.sqrt(_norm2(v))), n


@check("octonion", "u*(u*v)=-v for unit u orthogonal to v", tol=1e-10, samples=1_000)
def _clifford(rng, n, backend):
    u = _rand_oct(rng, n, imaginary=True)
    u = u / np.sqrt(octonion.quadratic(u))[:, None]
    v = _rand_oct(rng, n, imaginary=True)
    v = v - octonion.bilinear(u, v)[:, None] * u
    d = octonion.cross(u, octonion.cross(u, v)) + v
    return _rel(np.max(np.abs(d), axis=1), np.sqrt(_norm2(v)) * _norm2(u)), n


@check("octonion", "dim Der(O)=14", tol=0)
def _derivation_dim(rng, n, backend):
    M = octonion.derivation_constraints(dtype=object if backend == EXACT else float)
    info = linalg.rank_info(M)
    return abs(info.nullity - 14), 1


@check("octonion", "exp(D) preserves phi0", tol=1e-8, samples=100)
def _exp_derivation(rng, n, backend):
    phi = g2core.phi0(exact=False)
    worst = 0.0
    for _ in range(n):
        g = g2core.random_g2(rng)
        worst = max(worst, (exterior.pullback(g, phi) - phi).max_abs())
    return worst, n


# -- exterior ----------------------------------------------------------------------


def _random_form(rng, grade, dim=7):
    terms = {idx: complex(*rng.standard_normal(2)) for idx in combinations(range(1, dim + 1), grade)}
    return exterior.Multivector.from_indices(dim, terms, "C")


@check("exterior", "(a^b)^c=a^(b^c)", tol=1e-12, samples=20)
def _wedge_assoc(rng, n, backend):
    worst = 0.0
    for _ in range(n):
        p, q, r = rng.integers(1, 3, size=3)
        a, b, c = _random_form(rng, p), _random_form(rng, q), _random_form(rng, r)
        d = exterior.wedge(exterior.wedge(a, b), c) - exterior.wedge(a, exterior.wedge(b, c))
        worst = max(worst, d.max_abs() / (1 + exterior.wedge(a, exterior.wedge(b, c)).max_abs()))
    return worst, n


@check("exterior", "a^b=(-1)^pq b^a", tol=1e-12, samples=20)
def _graded_commutative(rng, n, backend):
    worst = 0.0
    for _ in range(n):
        p, q = rng.integers(1, 4, size=2)
        a, b = _random_form(rng, p), _random_form(rng, q)
        d = exterior.wedge(a, b) - exterior.wedge(b, a) * (-1) ** (p * q)
        worst = max(worst, d.max_abs())
    return worst, n


@check("exterior", "i(v)(a^b)=i(v)a^b+(-1)^p a^i(v)b", tol=1e-12, samples=20)
def _antiderivation(rng, n, backend):
    worst = 0.0
    for _ in range(n):
        p, q = rng.integers(1, 4, size=2)
        a, b = _random_form(rng, p), _random_form(rng, q)
        v = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        lhs = exterior.contract(v, exterior.wedge(a, b))
        rhs = exterior.wedge(exterior.contract(v, a), b) + exterior.wedge(a, exterior.contract(v, b)) * (-1) ** p
        worst = max(worst, (lhs - rhs).max_abs())
    return worst, n


@check("exterior", "(AB)^*a=B^*A^*a", tol=1e-10, samples=10)
def _pullback_functorial(rng, n, backend):
    worst = 0.0
    for _ in range(n):
        a = _random_form(rng, 3)
        A, B = rng.standard_normal((7, 7)), rng.standard_normal((7, 7))
        lhs = exterior.pullback(A @ B, a)
        rhs = exterior.pullback(B, exterior.pullback(A, a))
        worst = max(worst, (lhs - rhs).max_abs() / (1 + lhs.max_abs()))
    return worst, n


@check("exterior", "i(e1)phi0^i(e1)phi0^phi0=6vol", tol=0)
def _metricvol_basis(rng, n, backend):
    phi = g2core.phi0(exact=True)
    e1 = [gaussian(1)] + [gaussian(0)] * 6
    top = exterior.wedge_all(exterior.contract(e1, phi), exterior.contract(e1, phi), phi)
    c = exterior.top_coefficient(top, g2core.volume())
    return int(bool(gaussian(c) - 6)), 1


# -- g2core ------------------------------------------------------------------------


@check("g2core", "b(phi0)=I7", tol=0)
def _metric_identity(rng, n, backend):
    b = g2core.metric_from_form(g2core.phi0(exact=backend == EXACT), g2core.volume(exact=backend == EXACT))
    d = b.matrix - (exact_array(np.eye(7, dtype=int)) if b.exact else np.eye(7))
    return max_abs(d), 1


@check("g2core", "b(L*phi)=L^T b L", tol=1e-8, samples=100)
def _metric_covariance(rng, n, backend):
    phi = g2core.phi0(exact=False)
    worst = 0.0
    for _ in range(n):
        L = g2core.random_sl(rng)
        b = g2core.metric_from_form(exterior.pullback(L, phi), g2core.volume(exact=False)).matrix
        worst = max(worst, float(np.max(np.abs(b - L.T @ L))) / np.linalg.norm(L, 2) ** 2)
    return worst, n


@check("g2core", "b(phi, lambda vol)=b/lambda", tol=0, samples=10)
def _metric_scaling(rng, n, backend):
    phi = g2core.phi0(exact=True)
    bad = 0
    for _ in range(n):
        lam = gaussian(int(rng.integers(1, 20)), int(rng.integers(-20, 20))) / int(rng.integers(1, 9))
        b = g2core.metric_from_form(phi, g2core.volume(lam)).matrix
        bad += int(any(bool(x) for x in (b * lam - exact_array(np.eye(7, dtype=int))).flat))
    return bad, n


@check("g2core", "Omega_u=e^1..7 for Q(u)=1", tol=1e-10, samples=100)
def _omega_u(rng, n, backend):
    phi = g2core.phi0(exact=False)
    vol = g2core.volume(exact=False)
    worst = 0.0
    for _ in range(n):
        u = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        u = u / np.sqrt(u @ u)
        worst = max(worst, (g2core.omega_u(phi, u) - vol).max_abs())
    return worst, n


@check("g2core", "i(u)phi^i(v)phi^phi=6B(u,v)vol", tol=1e-10, samples=50)
def _metricvol(rng, n, backend):
    phi = g2core.phi0(exact=False)
    vol = g2core.volume(exact=False)
    b = g2core.metric_from_form(phi, vol)
    worst = 0.0
    for _ in range(n):
        u, v = (rng.standard_normal(7) + 1j * rng.standard_normal(7) for _ in range(2))
        worst = max(worst, g2core.metricvol_residual(phi, b, vol, u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
    return worst, n


@check("g2core", "phi0 nondegenerate", tol=0, samples=1_000)
def _phi0_nondegenerate(rng, n, backend):
    verdict = g2core.is_nondegenerate(g2core.phi0(exact=False), trials=n, seed=int(rng.integers(2**31)))
    return int(not verdict.nondegenerate), n


@check("g2core", "normalize(phi0, 2vol) scale=1/2", tol=1e-12)
def _normalize_scale(rng, n, backend):
    norm = g2core.normalize_volume(g2core.phi0(exact=True), g2core.volume(2))
    return abs(complex(norm.scale) - 0.5) if not norm.exact else int(bool(gaussian(norm.scale) - gaussian(1) / 2)), 1


# -- grassmann ---------------------------------------------------------------------

_NULLITIES = (
    ("associative", "R7", 3, 8),
    ("isotropic", "R14", 3, 30),
    ("isotropic_associative", "R14", 3, 22),
    ("b_real_associative", "R14", 3, 19),
    ("isotropic", "R14", 7, 28),
)


def _nullity_label(kind, k):
    return "lagrangian" if kind == "isotropic" and k == 7 else kind


def _report(kind, ambient, k, backend, method="lemma"):
    plane = grassmann.standard_plane(ambient, k, exact=backend == EXACT)
    return grassmann.tangent_dimension(plane, kind, method=method, backend=backend)


def _make_nullity_check(kind, ambient, k, expected, method):
    label = _nullity_label(kind, k)

    @check("grassmann", f"nullity {label} ({method})={expected}", tol=0)
    def _f(rng, n, backend):
        return abs(_report(kind, ambient, k, backend, method).nullity - expected), 1

    @check("grassmann", f"gap {label} ({method})", tol=1 / linalg.GAP_REQUIRED)
    def _g(rng, n, backend):
        r = _report(kind, ambient, k, FLOAT, method)
        return 1.0 / r.gap_ratio, 1

    return _f, _g


for _kind, _amb, _k, _exp in _NULLITIES:
    for _method in ("lemma", "linearized"):
        _make_nullity_check(_kind, _amb, _k, _exp, _method)


@check("grassmann", "dim G2/SO(4)=8", tol=0)
def _homog_assoc(rng, n, backend):
    return abs(grassmann.homogeneous_dimension("associative") - _report("associative", "R7", 3, backend).nullity), 1


@check("grassmann", "dim isotropic Grassmannian=30", tol=0)
def _homog_iso(rng, n, backend):
    return abs(grassmann.homogeneous_dimension("isotropic", 3, 7) - _report("isotropic", "R14", 3, backend).nullity), 1


@check("grassmann", "dim U(7)/O(7)=28", tol=0)
def _homog_lag(rng, n, backend):
    return abs(grassmann.homogeneous_dimension("isotropic", 7, 7) - _report("isotropic", "R14", 7, backend).nullity), 1


@check("grassmann", "associative nullity on G2 orbit", tol=0, samples=3)
def _assoc_orbit(rng, n, backend):
    bad = 0
    for _ in range(n):
        g = g2core.random_g2(rng, complex_entries=False)
        plane = grassmann.Plane("R7", (g @ np.eye(7)[:, :3]).T)
        bad += abs(grassmann.tangent_dimension(plane, "associative").nullity - 8)
    return bad, n


# -- sympcompat --------------------------------------------------------------------


def _random_symmetric(rng, n=7):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (A + A.T) / 2


@check("sympcompat", "signature(g_t)=(7,7)", tol=0, samples=10)
def _family_signature(rng, n, backend):
    bad = 0
    for _ in range(n):
        B = _random_symmetric(rng)
        for t in np.linspace(0, 2 * np.pi, 64, endpoint=False):
            bad += sympcompat.metric_family(B, t).signature != (7, 7)
    return bad, n * 64


def _retraction_samples(rng, n):
    for _ in range(n):
        yield sympcompat.random_cal_j(rng, 7, scale=0.5)


@check("sympcompat", "J_t^2=-I", tol=1e-10, samples=100)
def _jt_square(rng, n, backend):
    worst = 0.0
    for J in _retraction_samples(rng, n):
        for r in sympcompat.retraction_residuals(J, np.linspace(0, 1, 11)):
            worst = max(worst, r["square"])
    return worst, n


@check("sympcompat", "omega(J_t.,J_t.)=omega", tol=1e-10, samples=100)
def _jt_symplectic(rng, n, backend):
    worst = 0.0
    for J in _retraction_samples(rng, n):
        for r in sympcompat.retraction_residuals(J, np.linspace(0, 1, 11)):
            worst = max(worst, r["symplectic"])
    return worst, n


@check("sympcompat", "omega(.,J_t.) positive", tol=1e-10, samples=100)
def _jt_positive(rng, n, backend):
    worst = 0.0
    for J in _retraction_samples(rng, n):
        for r in sympcompat.retraction_residuals(J, np.linspace(0, 1, 11)):
            worst = max(worst, max(0.0, -r["min_eig"]), r["symmetric"])
    return worst, n


@check("sympcompat", "J_0=J_std, J_1=J", tol=1e-12, samples=100)
def _jt_endpoints(rng, n, backend):
    worst = 0.0
    for J in _retraction_samples(rng, n):
        J0 = sympcompat.j_retract(J, 0.0).matrix
        J1 = sympcompat.j_retract(J, 1.0).matrix
        worst = max(worst, float(np.max(np.abs(J0 - sympcompat.standard_j(7)))),
                    float(np.max(np.abs(J1 - J.matrix))))
    return worst, n


def _skew_pair(rng, n=7):
    """g = Re-part realification of a complex symmetric B, with J the standard structure."""
    B = _random_symmetric(rng, n)
    return sympcompat.metric_family(B, 0.0).matrix, sympcompat.AlmostComplexStructure.standard(n), B


@check("sympcompat", "g_C(xi u,xi v)=B(u,v)/2", tol=1e-10, samples=1_000)
def _xi_projection(rng, n, backend):
    if backend == EXACT:
        bad = 0
        J = sympcompat.AlmostComplexStructure.standard(3)
        for _ in range(n):
            S = rng.integers(-5, 6, size=(6, 6))
            G = exact_array(_skew_symmetrize(S))
            B = G - exact_array(J.matrix.T.astype(int)) @ G * gaussian(0, 1)
            u, v = (exact_array(rng.integers(-9, 10, size=6)) for _ in range(2))
            lhs = sympcompat.xi_project(u, J) @ G @ sympcompat.xi_project(v, J)
            bad += bool(gaussian(lhs) - gaussian(u @ B @ v) / 2)
        return bad, n
    G, J, _ = _skew_pair(rng)
    B = sympcompat.bilinear_from_skew(G, J).matrix
    worst = 0.0
    for _ in range(n):
        u, v = rng.standard_normal(14), rng.standard_normal(14)
        lhs = sympcompat.xi_project(u, J) @ G @ sympcompat.xi_project(v, J)
        worst = max(worst, abs(lhs - 0.5 * (u @ B @ v)) / (np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(G, 2)))
    return worst, n


def _skew_symmetrize(S):
    """Integer symmetric g with J_std^T g J_std = -g."""
    S = S + S.T
    n = S.shape[0] // 2
    P, Q = S[:n, :n], S[:n, n:]
    Q = Q + Q.T
    return np.block([[P, -Q], [-Q, -P]])


@check("sympcompat", "B=g-ig(J.,.) symmetric", tol=1e-12, samples=100)
def _skew_bilinear(rng, n, backend):
    worst = 0.0
    for _ in range(n):
        G, J, _ = _skew_pair(rng)
        B = sympcompat.bilinear_from_skew(G, J).matrix
        worst = max(worst, float(np.max(np.abs(B - B.T))))
    return worst, n


# -- flatdeform --------------------------------------------------------------------


@check("flatdeform", "V spectrum=+-|k| mult 4", tol=1e-9)
def _v_spectrum(rng, n, backend):
    worst = 0.0
    count = 0
    for k in flatdeform.frequencies(flatdeform.DEFAULT_N).reshape(-1, 3):
        r = np.linalg.norm(k)
        lam = np.sort(flatdeform.dirac_blocks(k)["V"].real)
        worst = max(worst, float(np.max(np.abs(lam - np.array([-r] * 4 + [r] * 4)))))
        count += 1
    return worst, count


@check("flatdeform", "D formally self-adjoint", tol=1e-10, samples=20)
def _self_adjoint(rng, n, backend):
    worst = 0.0
    for _ in range(n):
        v, w = (flatdeform.SectionField.random(rng, flatdeform.DEFAULT_N, support=flatdeform.NORMAL) for _ in range(2))
        a = flatdeform.l2_pairing(flatdeform.dirac_apply(v), w)
        b = flatdeform.l2_pairing(v, flatdeform.dirac_apply(w))
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return worst, n


@check("flatdeform", "D^2=-Laplacian on V", tol=1e-10, samples=20)
def _dirac_square(rng, n, backend):
    worst = 0.0
    for _ in range(n):
        v = flatdeform.SectionField.random(rng, flatdeform.DEFAULT_N, support=flatdeform.VBUNDLE)
        DDv = flatdeform.dirac_apply(flatdeform.dirac_apply(v))
        lap = sum((v.derivative(i).derivative(i) for i in range(3)), flatdeform.SectionField.zeros(v.N))
        worst = max(worst, float(np.max(np.abs((DDv + lap).coefficients))))
    return worst, n


@check("flatdeform", "symbol block leakage=0", tol=1e-14)
def _leakage(rng, n, backend):
    ks = flatdeform.frequencies(flatdeform.DEFAULT_N).reshape(-1, 3)
    return max(flatdeform.block_leakage(k) for k in ks), len(ks)


def _random_chart(rng):
    return flatdeform.DeformationChart.random(rng, 2)


@check("flatdeform", "isotropy formula=pullback", tol=1e-8, samples=100)
def _isotropy_pullback(rng, n, backend):
    worst = 0.0
    for _ in range(n):
        chart = _random_chart(rng)
        pts = rng.uniform(0, 2 * np.pi, size=(8, 3))
        d = flatdeform.isotropy_residual(chart, pts) - flatdeform.pullback_omega(chart, pts)
        worst = max(worst, float(np.max(np.abs(d))))
    return worst, n


@check("flatdeform", "residual=-(da+psi1 x psi2)", tol=1e-10, samples=100)
def _reassembly(rng, n, backend):
    worst = 0.0
    for _ in range(n):
        worst = max(worst, flatdeform.da_decomposition(_random_chart(rng)).reassembly_error())
    return worst, n


@check("flatdeform", "translations are Killing", tol=1e-12, samples=10)
def _killing(rng, n, backend):
    worst = 0.0
    for _ in range(n):
        f = flatdeform.SectionField.constant(rng.standard_normal(3), 1)
        worst = max(worst, flatdeform.killing_residual(f)[1])
    return worst, n
