"""Real and complex structures on even-dimensional spaces.

Conventions: R^{2n} has coordinates (x, y) with x + iy in C^n, the standard
complex structure is J_std = [[0, -I], [I, 0]], and an omega-standard frame
{e_i, f_i} has omega = sum e^i ^ f^i, i.e. matrix -J_std.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InputError, PreconditionError
from .g2core import BilinearForm, real_signature
from .scalars import exact_array, gaussian, to_float_array

TOL = 1e-10


def standard_j(n: int) -> np.ndarray:
    I, Z = np.eye(n), np.zeros((n, n))
    return np.block([[Z, -I], [I, Z]])


def standard_symplectic(n: int) -> np.ndarray:
    """Matrix of sum e^i ^ f^i: omega(u, v) = u^T W v."""
    return -standard_j(n)


def _real_matrix(M, name="matrix") -> np.ndarray:
    M = np.asarray(M)
    if M.dtype == object:
        M = to_float_array(M)
    if np.iscomplexobj(M):
        if np.max(np.abs(M.imag), initial=0.0) > 1e-12:
            raise InputError(f"{name} must be real")
        M = M.real
    return M.astype(float)


@dataclass(frozen=True, eq=False)
class AlmostComplexStructure:
    """A real 2n x 2n matrix squaring to -I."""

    matrix: np.ndarray
    tol: float = TOL

    def __post_init__(self):
        M = _real_matrix(self.matrix, "complex structure")
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise InputError(f"complex structure must be square of even size, got {M.shape}")
        res = square_residual(M)
        if res > self.tol * max(1.0, np.linalg.norm(M, 2) ** 2):
            raise InputError(f"J^2 != -I (residual {res:.3e})")
        object.__setattr__(self, "matrix", M)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    @classmethod
    def standard(cls, n: int) -> "AlmostComplexStructure":
        return cls(standard_j(n))

    def __matmul__(self, v):
        return self.matrix @ v


def square_residual(J) -> float:
    J = np.asarray(J)
    return float(np.max(np.abs(J @ J + np.eye(J.shape[0]))))


def iota_embed(X, Y) -> np.ndarray:
    """The real 2n x 2n matrix of X + iY acting on (x, y) ~ x + iy."""
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise InputError(f"iota_embed needs equal square shapes, got {X.shape} and {Y.shape}")
    return np.block([[X, -Y], [Y, X]])


def iota(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    return iota_embed(A.real, A.imag)


def is_complex_linear(M, tol: float = 1e-12) -> bool:
    """True iff M commutes with J_std, i.e. M lies in the image of iota."""
    M = _real_matrix(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise InputError(f"need a square matrix of even size, got {M.shape}")
    J = standard_j(M.shape[0] // 2)
    return bool(np.max(np.abs(M @ J - J @ M), initial=0.0) <= tol * max(1.0, np.max(np.abs(M))))


def _complex_symmetric(B) -> np.ndarray:
    M = B.matrix if isinstance(B, BilinearForm) else B
    M = to_float_array(M) if np.asarray(M).dtype == object else np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError("bilinear form must be square")
    if np.max(np.abs(M - M.T)) > 1e-12 * max(1.0, np.max(np.abs(M))):
        raise InputError("bilinear form must be symmetric")
    return M


def metric_family(B, t: float) -> BilinearForm:
    """cos(t) Re B + sin(t) Im B as a real form on R^{2n} = C^n."""
    M = _complex_symmetric(B)
    P, Q = M.real, M.imag
    re = np.block([[P, -Q], [-Q, -P]])
    im = np.block([[Q, P], [P, -Q]])
    G = np.cos(t) * re + np.sin(t) * im
    return BilinearForm(G, real_signature(G))


def skew_compatibility_residual(g, J) -> tuple[float, tuple[int, int]]:
    """max |g(Ju, Jv) + g(u, v)| over basis pairs, with the worst entry."""
    G = _real_matrix(g.matrix if isinstance(g, BilinearForm) else g)
    Jm = J.matrix if isinstance(J, AlmostComplexStructure) else _real_matrix(J)
    R = np.abs(Jm.T @ G @ Jm + G)
    idx = np.unravel_index(np.argmax(R), R.shape)
    return float(R[idx]), (int(idx[0]), int(idx[1]))


def bilinear_from_skew(g, J: AlmostComplexStructure, tol: float = TOL) -> BilinearForm:
    """B(u, v) = g(u, v) - i g(Ju, v), complex bilinear for the complex structure J."""
    G = _real_matrix(g.matrix if isinstance(g, BilinearForm) else g)
    res, (i, j) = skew_compatibility_residual(G, J)
    if res > tol * max(1.0, np.max(np.abs(G))):
        raise PreconditionError(
            f"g and J are not skew-compatible: |g(Je_{i},Je_{j}) + g(e_{i},e_{j})| = {res:.3e}"
        )
    return BilinearForm(G - 1j * (J.matrix.T @ G))


def xi_project(u, J: AlmostComplexStructure) -> np.ndarray:
    """(u - i J u) / 2, the projection of V_C onto the +i eigenspace of J."""
    u = np.asarray(u)
    if u.dtype == object:
        Jm = exact_array(J.matrix)
        return (u - (u @ Jm.T) * gaussian(0, 1)) / 2
    u = u.astype(complex)
    return 0.5 * (u - 1j * (u @ J.matrix.T))


def flat_cotangent_J(g) -> AlmostComplexStructure:
    """J(X + beta) = -g^{-1} beta + g X on R^n + (R^n)*."""
    G = _real_matrix(g.matrix if isinstance(g, BilinearForm) else g)
    n = G.shape[0]
    try:
        Gi = np.linalg.inv(G)
    except np.linalg.LinAlgError as exc:
        raise PreconditionError("metric is singular") from exc
    if np.linalg.cond(G) > 1e12:
        raise PreconditionError("metric is numerically singular")
    Z = np.zeros((n, n))
    return AlmostComplexStructure(np.block([[Z, -Gi], [G, Z]]))


def cotangent_symplectic(n: int) -> np.ndarray:
    """Matrix of omega(X + alpha, Y + beta) = alpha(Y) - beta(X)."""
    return standard_j(n)


# -- Lagrangian frames and the compatible-structure space ---------------------


@dataclass(frozen=True)
class SymplecticFrame:
    """Columns e_1..e_n (spanning the Lagrangian) then f_1..f_n."""

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[1] // 2


def frame_residual(frame, omega, Lambda, g) -> float:
    """How far ``frame`` is from an omega-standard frame extending a g-orthonormal basis of Lambda."""
    F = np.asarray(frame.matrix if isinstance(frame, SymplecticFrame) else frame, dtype=float)
    W = _real_matrix(omega)
    n = F.shape[1] // 2
    E = F[:, :n]
    L = np.asarray(Lambda, dtype=float)
    G = _real_matrix(g.matrix if isinstance(g, BilinearForm) else g)
    coords, *_ = np.linalg.lstsq(L, E, rcond=None)
    in_span = np.max(np.abs(L @ coords - E))
    gram = np.max(np.abs(coords.T @ G @ coords - np.eye(n)))
    sym = np.max(np.abs(F.T @ W @ F - standard_symplectic(n)))
    return float(max(in_span, gram, sym))


def standard_frame(omega, Lambda, g) -> SymplecticFrame:
    """Extend a g-orthonormal basis of the Lagrangian Lambda to an omega-standard frame.

    ``Lambda`` holds basis vectors as columns, ``g`` is the metric in that
    basis.  The f_i are the omega-dual basis taken in the orthogonal
    complement, then sheared along Lambda to make span(f) isotropic.
    """
    W = _real_matrix(omega, "symplectic form")
    L = np.asarray(Lambda, dtype=float)
    m = W.shape[0]
    if W.shape != (m, m) or m % 2 or L.shape != (m, m // 2):
        raise InputError(f"need a {m}x{m} form and a {m}x{m // 2} Lagrangian basis")
    n = m // 2
    if np.max(np.abs(L.T @ W @ L)) > TOL * max(1.0, np.max(np.abs(W))):
        raise InputError("subspace is not Lagrangian for omega")
    G = _real_matrix(g.matrix if isinstance(g, BilinearForm) else g)
    try:
        C = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise PreconditionError("metric on the Lagrangian must be positive definite") from exc
    E = L @ np.linalg.inv(C).T
    Qfull, _ = np.linalg.qr(np.hstack([E, np.eye(m)]))
    comp = Qfull[:, n:m]
    pairing = E.T @ W @ comp
    if abs(np.linalg.det(pairing)) < 1e-12:
        raise InputError("omega is degenerate on the chosen complement")
    Fd = comp @ np.linalg.inv(pairing)
    c = Fd.T @ W @ Fd
    Fd = Fd + E @ (c / 2)
    F = np.hstack([E, Fd])
    res = frame_residual(F, W, L, G)
    if res > 1e-8:
        raise InputError(f"could not build an omega-standard frame (residual {res:.3e})")
    return SymplecticFrame(F)


@dataclass(frozen=True)
class CompatibilityVerdict:
    squares_to_minus_one: float
    symplectic: float
    min_eigenvalue: float
    symmetric: float
    metric_block: float
    tol: float

    @property
    def holds(self) -> bool:
        return (self.squares_to_minus_one <= self.tol and self.symplectic <= self.tol
                and self.symmetric <= self.tol and self.metric_block <= self.tol
                and self.min_eigenvalue > self.tol)

    def __bool__(self):
        return self.holds


def _frame_coords(J, frame) -> np.ndarray:
    Jm = J.matrix if isinstance(J, AlmostComplexStructure) else _real_matrix(J)
    if frame is None:
        return Jm
    F = frame.matrix if isinstance(frame, SymplecticFrame) else np.asarray(frame, dtype=float)
    return np.linalg.solve(F, Jm @ F)


def cal_j_conditions(J, omega=None, Lambda=None, g=None, frame=None, tol: float = TOL) -> CompatibilityVerdict:
    """Evaluate the three matrix conditions for J in the omega-standard frame.

    With no omega/Lambda/g, J is taken to be already written in a standard
    frame (omega = sum e^i ^ f^i, Lambda = span(e), g = I).  A supplied
    frame is validated; otherwise one is built with ``standard_frame``.
    """
    if omega is not None:
        if Lambda is None or g is None:
            raise InputError("omega requires both Lambda and g")
        if frame is None:
            frame = standard_frame(omega, Lambda, g)
        else:
            res = frame_residual(frame, omega, Lambda, g)
            if res > 1e-8:
                raise InputError(
                    "frame must be omega-standard (omega = sum e^i ^ f^i) with e_i a "
                    f"g-orthonormal basis of Lambda; residual {res:.3e}"
                )
    M = _frame_coords(J, frame)
    m = M.shape[0]
    n = m // 2
    Js = standard_j(n)
    P = -Js @ M
    sq = float(np.max(np.abs(M @ M + np.eye(m))))
    sp = float(np.max(np.abs(M.T @ Js @ M - Js)))
    sym = float(np.max(np.abs(P - P.T)))
    blk = float(np.max(np.abs(P[:n, :n] - np.eye(n))))
    lam = float(np.linalg.eigvalsh((P + P.T) / 2).min())
    return CompatibilityVerdict(sq, sp, lam, sym, blk, tol)


def is_in_cal_J(J, omega=None, Lambda=None, g=None, frame=None, tol: float = TOL) -> bool:
    """Membership of J in the space of omega-compatible structures with omega(x, Jy) = g(x, y) on Lambda."""
    return cal_j_conditions(J, omega, Lambda, g, frame, tol).holds


def induced_symplectic(J, Lambda, g) -> np.ndarray:
    """Matrix of omega' = -Im h where h is the hermitian extension of g to Lambda + J Lambda.

    Vectors x + J y with x, y in Lambda are identified with x + iy, so that
    omega'(x + Jy1, x2 + Jy2) = g(x1, y2) - g(y1, x2).
    """
    Jm = J.matrix if isinstance(J, AlmostComplexStructure) else _real_matrix(J)
    L = np.asarray(Lambda, dtype=float)
    G = _real_matrix(g.matrix if isinstance(g, BilinearForm) else g)
    n = L.shape[1]
    basis = np.hstack([L, Jm @ L])
    if abs(np.linalg.det(basis)) < 1e-12:
        raise PreconditionError("Lambda and J(Lambda) do not span the space")
    Z = np.zeros((n, n))
    W_basis = np.block([[Z, G], [-G, Z]])
    Binv = np.linalg.inv(basis)
    return Binv.T @ W_basis @ Binv


def is_in_cal_J_phi(J, omega, Lambda, phi, tol: float = 1e-9) -> bool:
    """J such that the triple induced from (Lambda, phi, J) reproduces omega.

    The induced metric restricts to g_phi on Lambda and phi_C restricts to
    phi by construction, so only omega = omega' needs checking.
    """
    from .g2core import normalize_volume

    g = normalize_volume(phi).B
    try:
        Wp = induced_symplectic(J, Lambda, g)
    except PreconditionError:
        return False
    W = _real_matrix(omega)
    return bool(np.max(np.abs(Wp - W)) <= tol * max(1.0, np.max(np.abs(W))))


def retraction_block(J, frame=None) -> np.ndarray:
    """The off-diagonal block B of -J_std J = [[I, B], [B^T, I + B B^T]]."""
    M = _frame_coords(J, frame)
    n = M.shape[0] // 2
    return (-standard_j(n) @ M)[:n, n:]


def j_retract(J, t: float, frame=None, tol: float = TOL) -> AlmostComplexStructure:
    """J_std P_t with P_t = [[I, tB], [tB^T, I + t^2 B B^T]]: J_std at t = 0, J at t = 1.

    Returned in the same coordinates as J.  Parameters outside [0, 1] are
    evaluated but produce a warning.
    """
    verdict = cal_j_conditions(J, frame=frame, tol=tol)
    if not verdict.holds:
        raise PreconditionError(f"J is not in the compatible-structure space: {verdict}")
    if not 0.0 <= t <= 1.0:
        warnings.warn(f"t = {t} lies outside the retraction interval [0, 1]", stacklevel=2)
    B = retraction_block(J, frame)
    n = B.shape[0]
    I = np.eye(n)
    Pt = np.block([[I, t * B], [t * B.T, I + t * t * B @ B.T]])
    Jt = standard_j(n) @ Pt
    if frame is not None:
        F = frame.matrix if isinstance(frame, SymplecticFrame) else np.asarray(frame, dtype=float)
        Jt = F @ Jt @ np.linalg.inv(F)
    return AlmostComplexStructure(Jt, tol=max(tol, 1e-8))


def random_cal_j(rng: np.random.Generator, n: int, scale: float = 1.0) -> AlmostComplexStructure:
    """Random element of the compatible-structure space in standard-frame coordinates.

    The block B must be symmetric for -J_std J to be symplectic.
    """
    A = scale * rng.standard_normal((n, n))
    B = (A + A.T) / 2
    I = np.eye(n)
    P = np.block([[I, B], [B.T, I + B @ B.T]])
    return AlmostComplexStructure(standard_j(n) @ P, tol=1e-8)


def retraction_residuals(J: AlmostComplexStructure, ts) -> list[dict]:
    """Per-t residuals of the retraction path: square, symplectic, positivity."""
    out = []
    for t in ts:
        Jt = j_retract(J, float(t))
        v = cal_j_conditions(Jt)
        out.append({"t": float(t), "square": v.squares_to_minus_one, "symplectic": v.symplectic,
                    "symmetric": v.symmetric, "min_eig": v.min_eigenvalue})
    return out
