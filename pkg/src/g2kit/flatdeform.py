"""Flat model for deforming an associative 3-torus inside the complexified
flat G2 structure.

Y is the torus spanned by the first three coordinates of the flat 7-torus,
sitting in the zero section of its cotangent bundle R^7 x R^7 = C^7.
Fibre vectors are stored with 14 real components (x_1..x_7, y_1..y_7),
i.e. x + iy in C^7 = Im O_C.  Along Y the complex normal bundle splits as

    JTY  = components y_1..y_3     (real dimension 3)
    V    = x_4..x_7 and y_4..y_7   (real dimension 8)

Fields on Y are trigonometric polynomials with frequencies |k_i| <= N,
stored as centred coefficient arrays; products are formed on the
(2N + 1)^3 collocation grid and projected back.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np
from scipy.linalg import expm

from .errors import InputError, PreconditionError
from .octonion import cross_matrix

FIBER_DIM = 14
TANGENT = (0, 1, 2)
JTY = (7, 8, 9)
VBUNDLE = (3, 4, 5, 6, 10, 11, 12, 13)
NORMAL = JTY + VBUNDLE
TAGS = {"TY": TANGENT, "JTY": JTY, "V": VBUNDLE}
DEFAULT_N = 3
MODEL = "truncated Fourier series on the flat 3-torus, products on the 2N+1 collocation grid"


def fiber_split() -> dict:
    """Fibre component indices of TY, JTY and V."""
    return dict(TAGS)


def _cross_blocks() -> np.ndarray:
    """C[i] = 14 x 14 real matrix of v -> e_{i+1} x v on x + iy."""
    out = np.zeros((3, FIBER_DIM, FIBER_DIM))
    for i in range(3):
        c = cross_matrix(np.eye(7)[i]).real
        out[i, :7, :7] = c
        out[i, 7:, 7:] = c
    return out


CROSS = _cross_blocks()


def _full_cross(u7: np.ndarray) -> np.ndarray:
    """14 x 14 matrix of v -> u x v for a real 7-vector u."""
    c = cross_matrix(u7).real
    M = np.zeros((FIBER_DIM, FIBER_DIM))
    M[:7, :7] = c
    M[7:, 7:] = c
    return M


def frequencies(N: int) -> np.ndarray:
    """(M, M, M, 3) integer array of frequency triples, M = 2N + 1, centred."""
    r = np.arange(-N, N + 1)
    return np.stack(np.meshgrid(r, r, r, indexing="ij"), axis=-1)


def grid(N: int) -> np.ndarray:
    """(M, M, M, 3) collocation points 2 pi n / M."""
    M = 2 * N + 1
    t = 2 * np.pi * np.arange(M) / M
    return np.stack(np.meshgrid(t, t, t, indexing="ij"), axis=-1)


# -- fields -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SectionField:
    """Trigonometric polynomial field on T^3 with values in C^m.

    ``coefficients[a, b, c, :]`` is the coefficient of exp(i k.x) with
    k = (a - N, b - N, c - N).
    """

    max_freq: int
    coefficients: np.ndarray

    def __post_init__(self):
        C = np.asarray(self.coefficients, dtype=complex)
        M = 2 * self.max_freq + 1
        if self.max_freq < 0 or C.ndim != 4 or C.shape[:3] != (M, M, M):
            raise InputError(f"coefficients must have shape ({M},{M},{M},m), got {C.shape}")
        object.__setattr__(self, "coefficients", C)

    @property
    def N(self) -> int:
        return self.max_freq

    @property
    def components(self) -> int:
        return self.coefficients.shape[-1]

    @classmethod
    def zeros(cls, N: int, m: int = FIBER_DIM) -> "SectionField":
        M = 2 * N + 1
        return cls(N, np.zeros((M, M, M, m), dtype=complex))

    @classmethod
    def constant(cls, value, N: int = DEFAULT_N) -> "SectionField":
        value = np.atleast_1d(np.asarray(value, dtype=complex))
        f = cls.zeros(N, value.size)
        f.coefficients[N, N, N] = value
        return f

    @classmethod
    def from_modes(cls, N: int, modes: dict, m: int = FIBER_DIM, real: bool = True) -> "SectionField":
        """Coefficient dictionary {k: vector}; real fields get conjugate-completed at -k."""
        f = cls.zeros(N, m)
        C = f.coefficients
        for k, vec in modes.items():
            k = tuple(int(x) for x in k)
            if len(k) != 3 or max(abs(x) for x in k) > N:
                raise InputError(f"frequency {k} outside |k_i| <= {N}")
            vec = np.asarray(vec, dtype=complex)
            if vec.shape != (m,):
                raise InputError(f"mode {k} has {vec.size} components, expected {m}")
            C[k[0] + N, k[1] + N, k[2] + N] += vec
        if real:
            C = _conjugate_complete(C, N)
        return cls(N, C)

    @classmethod
    def from_grid(cls, values: np.ndarray) -> "SectionField":
        values = np.asarray(values)
        M = values.shape[0]
        if values.ndim == 3:
            values = values[..., None]
        C = np.fft.fftn(values, axes=(0, 1, 2)) / M**3
        return cls((M - 1) // 2, np.fft.fftshift(C, axes=(0, 1, 2)))

    @classmethod
    def random(cls, rng: np.random.Generator, N: int, m: int = FIBER_DIM, scale: float = 1.0,
               support=None, decay: float = 1.0) -> "SectionField":
        """Random real field; ``support`` restricts the nonzero components."""
        M = 2 * N + 1
        C = rng.standard_normal((M, M, M, m)) + 1j * rng.standard_normal((M, M, M, m))
        k = frequencies(N)
        C *= scale / (1.0 + np.linalg.norm(k, axis=-1) ** decay)[..., None]
        if support is not None:
            mask = np.zeros(m, dtype=bool)
            mask[list(support)] = True
            C[..., ~mask] = 0
        return cls(N, _conjugate_complete(C, N, average=True))

    def grid_values(self) -> np.ndarray:
        """Values at the collocation grid, shape (M, M, M, m)."""
        M = 2 * self.N + 1
        C = np.fft.ifftshift(self.coefficients, axes=(0, 1, 2))
        return np.fft.ifftn(C, axes=(0, 1, 2)) * M**3

    def evaluate(self, points) -> np.ndarray:
        """Values at arbitrary (possibly complex) points of shape (P, 3)."""
        pts = np.atleast_2d(np.asarray(points))
        k = frequencies(self.N).reshape(-1, 3)
        E = np.exp(1j * (pts @ k.T))
        return E @ self.coefficients.reshape(-1, self.components)

    def evaluate_real(self, points) -> np.ndarray:
        """Real field values as sum Re(c_k) cos(k.x) - Im(c_k) sin(k.x).

        The expression has real coefficients, so it stays analytic with
        exactly real values on real points (as complex-step differentiation needs).
        """
        pts = np.atleast_2d(np.asarray(points))
        k = frequencies(self.N).reshape(-1, 3)
        phase = pts @ k.T
        C = self.coefficients.reshape(-1, self.components)
        return np.cos(phase) @ C.real - np.sin(phase) @ C.imag

    def derivative(self, axis: int) -> "SectionField":
        k = frequencies(self.N)[..., axis]
        return SectionField(self.N, 1j * k[..., None] * self.coefficients)

    def gradient(self) -> list["SectionField"]:
        return [self.derivative(i) for i in range(3)]

    def is_real(self, tol: float = 1e-12) -> bool:
        C = self.coefficients
        flipped = np.conj(C[::-1, ::-1, ::-1])
        return bool(np.max(np.abs(C - flipped), initial=0.0) <= tol * max(1.0, np.max(np.abs(C))))

    def component_block(self, idx) -> "SectionField":
        return SectionField(self.N, self.coefficients[..., list(idx)])

    def max_abs_on(self, idx) -> float:
        return float(np.max(np.abs(self.coefficients[..., list(idx)]), initial=0.0))

    def __add__(self, other: "SectionField") -> "SectionField":
        return SectionField(self.N, self.coefficients + other.coefficients)

    def __sub__(self, other: "SectionField") -> "SectionField":
        return SectionField(self.N, self.coefficients - other.coefficients)

    def __mul__(self, s) -> "SectionField":
        return SectionField(self.N, self.coefficients * s)

    __rmul__ = __mul__


def _conjugate_complete(C: np.ndarray, N: int, average: bool = False) -> np.ndarray:
    """Enforce c(-k) = conj c(k).

    With ``average`` the field is replaced by its real part; otherwise
    coefficients missing at -k are filled in, and coefficients given at
    both k and -k must already agree.
    """
    flipped = np.conj(C[::-1, ::-1, ::-1])
    if average:
        return (C + flipped) / 2
    present = np.abs(C) > 0
    present_flip = present[::-1, ::-1, ::-1]
    out = C.copy()
    fill = ~present & present_flip
    out[fill] = flipped[fill]
    both = present & present_flip
    if np.any(both) and np.max(np.abs(C[both] - flipped[both])) > 1e-12 * max(1.0, np.max(np.abs(C))):
        raise InputError("coefficients at k and -k are not conjugate: field is not real")
    return out


# -- frames -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FrameField:
    """e_i(q) = exp(theta(q) X) e_i for i = 1, 2, 3, with q in the flat 7-torus.

    ``generator`` is a real antisymmetric 7 x 7 matrix; ``theta_terms`` is a
    list of (amplitude, k, phase) with k an integer 7-vector, giving
    theta(q) = sum amplitude * cos(k.q + phase).
    """

    generator: np.ndarray
    theta_terms: tuple = ()

    def __post_init__(self):
        X = np.asarray(self.generator, dtype=float)
        if X.shape != (7, 7) or np.max(np.abs(X + X.T)) > 1e-12:
            raise InputError("frame generator must be an antisymmetric 7x7 matrix")
        terms = []
        for amp, k, phase in self.theta_terms:
            k = np.asarray(k, dtype=int)
            if k.shape != (7,):
                raise InputError("theta frequencies are integer 7-vectors")
            terms.append((float(amp), k, float(phase)))
        object.__setattr__(self, "generator", X)
        object.__setattr__(self, "theta_terms", tuple(terms))

    @classmethod
    def constant(cls) -> "FrameField":
        return cls(np.zeros((7, 7)))

    @classmethod
    def rotation(cls, plane: tuple[int, int], theta_terms) -> "FrameField":
        """Rotation by theta(q) in the (e_a, e_b)-plane (1-based indices)."""
        a, b = plane
        X = np.zeros((7, 7))
        X[b - 1, a - 1] = 1.0
        X[a - 1, b - 1] = -1.0
        return cls(X, tuple(theta_terms))

    @property
    def is_constant(self) -> bool:
        return not self.theta_terms or not np.any(self.generator)

    def theta(self, q) -> np.ndarray:
        q = np.atleast_2d(q)
        out = np.zeros(q.shape[0])
        for amp, k, ph in self.theta_terms:
            out = out + amp * np.cos(q @ k + ph)
        return out

    def theta_gradient(self, q) -> np.ndarray:
        q = np.atleast_2d(q)
        out = np.zeros((q.shape[0], 7))
        for amp, k, ph in self.theta_terms:
            out = out - amp * np.sin(q @ k + ph)[:, None] * k[None, :]
        return out

    def values(self, q) -> np.ndarray:
        """(P, 3, 7): the three frame vectors at each point."""
        th = self.theta(q)
        E0 = np.eye(7)[:, :3]
        return np.array([(expm(t * self.generator) @ E0).T for t in th])

    def derivatives(self, q) -> np.ndarray:
        """(P, 7, 3, 7): d e_i / d q_j."""
        vals = self.values(q)
        grad = self.theta_gradient(q)
        Xe = np.einsum("ab,pib->pia", self.generator, vals)
        return grad[:, :, None, None] * Xe[:, None, :, :]

    def directional(self, q, v7) -> np.ndarray:
        """(P, 3, 7): derivative of e_i along the real 7-vectors v7 (one per point)."""
        return np.einsum("pj,pjia->pia", np.atleast_2d(v7), self.derivatives(q))


def embed_torus(x) -> np.ndarray:
    """Points of Y = T^3 x {0} in the flat 7-torus."""
    x = np.atleast_2d(x)
    return np.hstack([x, np.zeros((x.shape[0], 4))])


def check_frame(frame: FrameField, N: int, tol: float = 1e-10) -> np.ndarray:
    """Frame values on the grid after checking orthonormality, associativity and tangency to Y."""
    from .octonion import associator, embed_imaginary

    pts = grid(N).reshape(-1, 3)
    E = frame.values(embed_torus(pts))
    gram = np.einsum("pia,pja->pij", E, E) - np.eye(3)
    br = associator(*(embed_imaginary(E[:, i]) for i in range(3)))
    tang = np.abs(E[:, :, 3:]).max(axis=(1, 2))
    bad = np.abs(gram).max(axis=(1, 2))
    for name, arr in (("orthonormal", bad), ("associative", np.abs(br).max(axis=1)), ("tangent to Y", tang)):
        if arr.max() > tol:
            p = int(np.argmax(arr))
            raise PreconditionError(
                f"frame is not {name} at grid point x = {pts[p].round(6).tolist()} (defect {arr[p]:.3e})"
            )
    return E


# -- Dirac operator -----------------------------------------------------------------


def dirac_symbol(k) -> np.ndarray:
    """Fourier symbol i sum k_j C_j of the constant-frame operator on the 14-dim fibre."""
    k = np.asarray(k, dtype=float)
    return 1j * np.tensordot(k, CROSS, axes=1)


def dirac_apply(v: SectionField, frame: FrameField | None = None) -> SectionField:
    """D v = sum_i e_i x d_{e_i} v.

    With a constant standard frame this is the Fourier multiplier
    i sum k_j (e_j x); otherwise products are formed on the collocation grid.
    """
    if v.components != FIBER_DIM:
        raise InputError(f"sections need {FIBER_DIM} real fibre components")
    if frame is None or frame.is_constant:
        k = frequencies(v.N).astype(float)
        sym = 1j * np.einsum("abcj,jmn->abcmn", k, CROSS)
        return SectionField(v.N, np.einsum("abcmn,abcn->abcm", sym, v.coefficients))
    E = check_frame(frame, v.N)
    M = 2 * v.N + 1
    dv = np.stack([g.grid_values().reshape(-1, FIBER_DIM) for g in v.gradient()], axis=1)  # P, 3, 14
    out = np.zeros((M**3, FIBER_DIM), dtype=complex)
    for i in range(3):
        along = np.einsum("pj,pjm->pm", E[:, i, :3], dv)
        out += _cross_fields(E[:, i], along)
    return SectionField.from_grid(out.reshape(M, M, M, FIBER_DIM))


def _cross7(u7: np.ndarray, v7: np.ndarray) -> np.ndarray:
    from .octonion import cross, embed_imaginary

    return cross(embed_imaginary(np.asarray(u7, dtype=complex)), embed_imaginary(np.asarray(v7, dtype=complex)))[:, 1:]


def _cross_fields(u7: np.ndarray, v14: np.ndarray) -> np.ndarray:
    """Pointwise u x v for real 7-vectors u and fibre vectors v (x, y parts)."""
    return np.hstack([_cross7(u7, v14[:, :7]), _cross7(u7, v14[:, 7:])])


def perturbation_term(frame: FrameField, v: SectionField) -> SectionField:
    """a(v) = -sum e_i x (d e_i along v), using the horizontal part of v."""
    if v.components != FIBER_DIM:
        raise InputError(f"sections need {FIBER_DIM} real fibre components")
    E = check_frame(frame, v.N)
    M = 2 * v.N + 1
    pts = embed_torus(grid(v.N).reshape(-1, 3))
    vals = v.grid_values().reshape(-1, FIBER_DIM)
    horizontal = vals[:, :7].real
    dE = frame.directional(pts, horizontal)
    out = np.zeros((M**3, FIBER_DIM), dtype=complex)
    for i in range(3):
        out[:, :7] -= _cross7(E[:, i], dE[:, i])
    return SectionField.from_grid(out.reshape(M, M, M, FIBER_DIM))


def perturbed_dirac(frame: FrameField, v: SectionField) -> SectionField:
    """Left side of the deformation equation: D v + a(v)."""
    return dirac_apply(v, frame) + perturbation_term(frame, v)


def dirac_blocks(k) -> dict:
    """Eigenvalues of the symbol at frequency k on the JTY and V blocks."""
    S = dirac_symbol(k)
    out = {}
    for name, idx in (("JTY", JTY), ("V", VBUNDLE)):
        blk = S[np.ix_(idx, idx)]
        out[name] = np.sort(np.linalg.eigvalsh(blk))
    return out


def block_leakage(k) -> float:
    """Size of the symbol entries coupling JTY, V and TY (zero when the splitting is invariant)."""
    S = dirac_symbol(k)
    worst = 0.0
    for a, b in product(TAGS.values(), repeat=2):
        if a != b:
            worst = max(worst, float(np.max(np.abs(S[np.ix_(a, b)]))))
    return worst


def dirac_spectrum(max_freq: int = DEFAULT_N, block: str = "normal", decimals: int = 9) -> list[tuple[float, int]]:
    """Spectrum of the truncated constant-frame operator as (eigenvalue, multiplicity) pairs.

    ``block`` is ``normal`` (JTY + V), ``V`` or ``JTY``.
    """
    names = {"normal": ("JTY", "V"), "V": ("V",), "JTY": ("JTY",)}
    if block not in names:
        raise InputError(f"unknown block {block!r}")
    counts: dict[float, int] = {}
    for k in frequencies(max_freq).reshape(-1, 3):
        blocks = dirac_blocks(k)
        for name in names[block]:
            for lam in blocks[name]:
                key = float(np.round(lam, decimals)) + 0.0
                counts[key] = counts.get(key, 0) + 1
    return sorted(counts.items())


def l2_pairing(v: SectionField, w: SectionField) -> complex:
    """<v, w> = (2 pi)^-3 integral of conj(v) . w, by Parseval on the coefficients."""
    return complex(np.sum(np.conj(v.coefficients) * w.coefficients))


# -- isotropy residual ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DeformationChart:
    """sigma^4..sigma^14 as components of an 11-component real field.

    sigma^1..sigma^3 are the torus coordinates themselves.
    """

    sigma: SectionField

    def __post_init__(self):
        if self.sigma.components != 11:
            raise InputError("a chart holds the 11 components sigma^4 .. sigma^14")

    @property
    def N(self) -> int:
        return self.sigma.N

    @classmethod
    def zero(cls, N: int = DEFAULT_N) -> "DeformationChart":
        return cls(SectionField.zeros(N, 11))

    @classmethod
    def from_components(cls, N: int, comps: dict) -> "DeformationChart":
        """{j: SectionField or coefficient dict} for 4 <= j <= 14."""
        C = np.zeros((2 * N + 1,) * 3 + (11,), dtype=complex)
        for j, f in comps.items():
            if not 4 <= j <= 14:
                raise InputError(f"sigma^{j} is not a free chart component (need 4..14)")
            if not isinstance(f, SectionField):
                f = SectionField.from_modes(N, {k: [c] for k, c in f.items()}, m=1)
            if f.N != N or f.components != 1:
                raise InputError(f"sigma^{j} must be a scalar field with max frequency {N}")
            C[..., j - 4] = f.coefficients[..., 0]
        return cls(SectionField(N, C))

    @classmethod
    def random(cls, rng: np.random.Generator, N: int = DEFAULT_N, scale: float = 0.3,
               components=range(4, 15)) -> "DeformationChart":
        support = [j - 4 for j in components]
        return cls(SectionField.random(rng, N, 11, scale, support))

    def component(self, j: int) -> SectionField:
        return self.sigma.component_block([j - 4])

    def is_base_point(self, tol: float = 1e-14) -> bool:
        """sigma^8..sigma^14 vanish (the chart sits in the zero section)."""
        return self.sigma.max_abs_on(range(4, 11)) <= tol

    def map_points(self, x) -> np.ndarray:
        """sigma(x) in R^14 at (possibly complex) points x of shape (P, 3)."""
        x = np.atleast_2d(x)
        return np.hstack([x, self.sigma.evaluate_real(x)])


def _jacobian_on(chart: DeformationChart, points=None) -> np.ndarray:
    """(P, 3, 11): d sigma^{j} / d x^i for j = 4..14, from spectral derivatives."""
    grads = chart.sigma.gradient()
    if points is None:
        return np.stack([g.grid_values().reshape(-1, 11) for g in grads], axis=1).real
    return np.stack([g.evaluate(points) for g in grads], axis=1).real


def _full_jacobian(dsig: np.ndarray) -> np.ndarray:
    """(P, 3, 14): adds d sigma^i / d x^j = delta for the coordinate components."""
    P = dsig.shape[0]
    J = np.zeros((P, 3, 14))
    J[:, :, :3] = np.eye(3)
    J[:, :, 3:] = dsig
    return J


def isotropy_residual(chart: DeformationChart, points=None) -> np.ndarray:
    """R_ij = d_j sigma^{i+7} - d_i sigma^{j+7} + sum_{k=4..7} (d_i sigma^k d_j sigma^{k+7} - d_j sigma^k d_i sigma^{k+7}).

    Returns an antisymmetric (P, 3, 3) array; P runs over the collocation
    grid unless ``points`` are given.
    """
    J = _full_jacobian(_jacobian_on(chart, points))
    q, p = J[:, :, :7], J[:, :, 7:]
    R = np.zeros((J.shape[0], 3, 3))
    for i, j in combinations(range(3), 2):
        lin = p[:, j, i] - p[:, i, j]
        quad = np.sum(q[:, i, 3:] * p[:, j, 3:] - q[:, j, 3:] * p[:, i, 3:], axis=1)
        R[:, i, j] = lin + quad
        R[:, j, i] = -R[:, i, j]
    return R


def cotangent_omega_matrix() -> np.ndarray:
    """omega = sum dq^i ^ dp^i on R^14 with coordinates (q, p), built from the exterior module."""
    from .exterior import Multivector, two_form_matrix

    terms = {(i, i + 7): 1.0 for i in range(1, 8)}
    return two_form_matrix(Multivector.from_indices(14, terms, "R")).real


def pullback_omega(chart: DeformationChart, points, h: float = 1e-20) -> np.ndarray:
    """(sigma^* omega)(d_i, d_j) at real points by complex-step differentiation of sigma."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    W = cotangent_omega_matrix()
    cols = []
    for i in range(3):
        step = np.zeros(3, dtype=complex)
        step[i] = 1j * h
        cols.append(chart.map_points(pts + step).imag / h)
    J = np.stack(cols, axis=1)  # P, 3, 14
    return np.einsum("pia,ab,pjb->pij", J, W, J)


@dataclass(frozen=True, eq=False)
class DaDecomposition:
    a: np.ndarray          # (P, 3): sigma^8, sigma^9, sigma^10
    da: np.ndarray         # (P, 3, 3): d_i a_j - d_j a_i
    psi1: np.ndarray       # (P, 3, 4): d_i (sigma^4..sigma^7)
    psi2: np.ndarray       # (P, 3, 4): d_i (sigma^11..sigma^14)
    q_term: np.ndarray     # (P, 3, 3)
    residual: np.ndarray   # (P, 3, 3)

    def reassembly_error(self) -> float:
        """max |residual + da + q|; zero exactly when residual = -(da + q)."""
        return float(np.max(np.abs(self.residual + self.da + self.q_term), initial=0.0))


def cross_of_one_forms(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """(alpha x beta) as a 2-form: components alpha_i beta_j - alpha_j beta_i, summed over the fibre."""
    return np.einsum("pik,pjk->pij", alpha, beta) - np.einsum("pjk,pik->pij", alpha, beta)


def da_decomposition(chart: DeformationChart, points=None) -> DaDecomposition:
    """Split the isotropy residual as -(da + q(psi1 x psi2)).

    The J nu-valued psi2 is identified with nu-valued forms through J,
    which maps the p-direction f_k to -e_k.
    """
    if points is None:
        vals = chart.sigma.grid_values().reshape(-1, 11).real
    else:
        vals = chart.sigma.evaluate(points).real
    dsig = _jacobian_on(chart, points)
    a = vals[:, 4:7]
    da_vec = dsig[:, :, 4:7]
    da = da_vec - np.transpose(da_vec, (0, 2, 1))
    psi1 = dsig[:, :, 0:4]
    psi2 = dsig[:, :, 7:11]
    q_term = cross_of_one_forms(psi1, -psi2)
    return DaDecomposition(a, da, psi1, psi2, q_term, isotropy_residual(chart, points))


# -- Killing check -----------------------------------------------------------------------


def killing_residual(f: SectionField) -> tuple[np.ndarray, float]:
    """Pointwise max over (i, j) of |d_i f^j + d_j f^i| and its grid maximum.

    For the flat torus metric this symmetrized gradient is the Lie
    derivative of the metric along f (up to sign); it vanishes exactly for
    Killing fields.
    """
    if f.components != 3:
        raise InputError("a vector field on the 3-torus has 3 components")
    grads = [g.grid_values().real for g in f.gradient()]  # grads[i][..., j] = d_i f^j
    S = np.zeros(grads[0].shape[:3] + (3, 3))
    for i in range(3):
        for j in range(3):
            S[..., i, j] = -(grads[i][..., j] + grads[j][..., i])
    field = np.abs(S).max(axis=(-1, -2))
    return field, float(field.max())


# -- JSON ---------------------------------------------------------------------------------


def chart_from_json(obj, N: int | None = None) -> DeformationChart:
    """{"sigma8": [{"k": [0, 1, 0], "re": 0, "im": 0.5}, ...], ...}; -k terms are conjugate-completed."""
    if not isinstance(obj, dict):
        raise InputError("chart JSON must be an object")
    modes: dict[int, dict] = {}
    maxk = 0
    for key, terms in obj.items():
        if key in ("max_freq", "N"):
            continue
        if not key.startswith("sigma") or not key[5:].isdigit():
            raise InputError(f"unexpected chart key {key!r}")
        j = int(key[5:])
        if not 4 <= j <= 14:
            raise InputError(f"{key}: only sigma4 .. sigma14 are free (sigma1..3 are the coordinates)")
        if not isinstance(terms, list):
            raise InputError(f"{key} must be a list of terms")
        acc: dict[tuple, complex] = {}
        for t in terms:
            try:
                k = tuple(int(x) for x in t["k"])
                c = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"{key}: bad term {t!r}") from exc
            if len(k) != 3:
                raise InputError(f"{key}: frequency must have 3 entries")
            acc[k] = acc.get(k, 0) + c
            maxk = max(maxk, *(abs(x) for x in k))
        modes[j] = acc
    n = obj.get("max_freq", obj.get("N", maxk)) if N is None else N
    if maxk > n:
        raise InputError(f"chart frequency {maxk} exceeds max_freq {n}")
    return DeformationChart.from_components(int(n), modes)


def chart_to_json(chart: DeformationChart, tol: float = 1e-15) -> dict:
    out: dict = {"max_freq": chart.N}
    ks = frequencies(chart.N).reshape(-1, 3)
    C = chart.sigma.coefficients.reshape(-1, 11)
    for j in range(4, 15):
        terms = [{"k": [int(x) for x in k], "re": float(c.real), "im": float(c.imag)}
                 for k, c in zip(ks, C[:, j - 4]) if abs(c) > tol]
        if terms:
            out[f"sigma{j}"] = terms
    return out


def residual_to_json(R: np.ndarray, N: int) -> dict:
    M = 2 * N + 1
    comps = {}
    for i, j in combinations(range(3), 2):
        comps[f"{i + 1}{j + 1}"] = R[:, i, j].reshape(M, M, M).tolist()
    return {"max_freq": N, "grid": M, "model": MODEL, "components": comps,
            "max_abs": float(np.max(np.abs(R), initial=0.0))}


def spectrum_to_json(spectrum) -> list:
    return [{"eigenvalue": lam, "multiplicity": m} for lam, m in spectrum]
