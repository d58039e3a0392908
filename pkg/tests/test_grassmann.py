import json

import numpy as np
import pytest

from g2kit import g2core
from g2kit import grassmann as Gr
from g2kit import octonion as O
from g2kit.errors import DegeneracyError, InputError, PreconditionError
from g2kit.scalars import to_float_array


def e(i, n=7):
    v = np.zeros(n)
    v[i - 1] = 1
    return v


def f(i):
    """i * e_i in the R14 coordinates (x, y)."""
    return e(7 + i, 14)


def r14(*vecs):
    return Gr.Plane.from_vectors("R14", np.array(vecs))


def L0(ambient="R14", exact=True):
    return Gr.standard_plane(ambient, 3, exact=exact)


# -- planes ---------------------------------------------------------------------


def test_plane_validation():
    with pytest.raises(InputError):
        Gr.Plane("R7", np.array([e(1), 2 * e(1)]))
    with pytest.raises(InputError):
        Gr.Plane("R7", np.ones((2, 6)))
    with pytest.raises(InputError):
        Gr.Plane("R7", np.array([1j * e(1)]))
    with pytest.raises(InputError):
        Gr.Plane("C7", np.array([e(1), 1j * e(1)]))   # dependent over C
    Gr.Plane("R14", np.array([e(1), 1j * e(1)]))       # independent over R
    with pytest.raises(InputError):
        Gr.Plane("Q8", np.array([e(1)]))


# -- B-orthonormalization -------------------------------------------------------


def test_b_orthonormalize_examples():
    p = Gr.b_orthonormalize(Gr.Plane("R7", np.array([e(1), e(2)])))
    assert np.allclose(p.basis, [e(1), e(2)])
    p = Gr.b_orthonormalize(Gr.Plane("R7", np.array([2 * e(1), e(1) + e(2)])))
    assert np.allclose(np.abs(p.basis), [e(1), e(2)])
    null = Gr.Plane("C7", np.array([e(1) + 1j * e(2)]))
    with pytest.raises(DegeneracyError, match="step 1"):
        Gr.b_orthonormalize(null)


def test_b_orthonormalize_random(rng):
    for amb in ("R7", "C7"):
        b = rng.standard_normal((3, 7)) + (1j * rng.standard_normal((3, 7)) if amb == "C7" else 0)
        p = Gr.b_orthonormalize(Gr.Plane(amb, b))
        assert Gr.is_b_orthonormal(p, 1e-10)
        # same span
        both = np.vstack([to_float_array(p.basis), b])
        assert np.linalg.matrix_rank(both, tol=1e-9) == 3


def test_b_orthonormalize_pivots_past_null_vector():
    # both inputs are B-null, their sum is not
    p = Gr.Plane("C7", np.array([e(1) + 1j * e(2), e(1) - 1j * e(2)]))
    out = Gr.b_orthonormalize(p)
    assert Gr.is_b_orthonormal(out)
    # a null direction B-orthogonal to the rest cannot be rescued
    with pytest.raises(DegeneracyError, match="step 2"):
        Gr.b_orthonormalize(Gr.Plane("C7", np.array([e(1) + 1j * e(2), e(3)])))


# -- symplectic classification ---------------------------------------------------


def test_classify_examples():
    assert Gr.classify_symplectic(r14(e(1, 14), e(2, 14), e(3, 14))).kind == "isotropic"
    assert Gr.classify_symplectic(r14(e(1, 14), f(1))).kind == "symplectic"
    assert Gr.classify_symplectic(r14(*np.eye(14)[:7])).kind == "lagrangian"
    rows = np.vstack([np.eye(14)[:7], f(1)])
    assert Gr.classify_symplectic(Gr.Plane.from_vectors("R14", rows)).kind == "coisotropic"
    assert Gr.classify_symplectic(r14(e(1, 14) + f(2), e(2, 14))).kind in ("symplectic", "generic")


def test_double_complement(rng):
    for k in (2, 3, 5, 9):
        rows = rng.standard_normal((k, 14))
        comp = Gr.classify_symplectic(Gr.Plane.from_vectors("R14", rows)).complement
        back = Gr.classify_symplectic(Gr.Plane.from_vectors("R14", comp)).complement
        assert np.linalg.matrix_rank(np.vstack([rows, back]), tol=1e-8) == k == back.shape[0]


def test_classify_requires_r14():
    with pytest.raises(InputError):
        Gr.classify_symplectic(L0("R7"))


def test_unitary_frame_examples():
    X = np.eye(7)[:, :3]
    assert Gr.unitary_frame_check(X, np.zeros((7, 3)))
    assert Gr.unitary_frame_check(np.zeros((7, 3)), X)
    Y = np.triu(np.ones((7, 3)), 1)
    assert not Gr.unitary_frame_check(X, Y)


def test_unitary_frames_span_isotropic_planes(rng):
    # a real orthonormal frame rotated by a common phase is unitary with real h
    for _ in range(100):
        k = int(rng.integers(1, 8))
        Q, _ = np.linalg.qr(rng.standard_normal((7, k)))
        U = np.exp(1j * rng.uniform(0, 2 * np.pi)) * Q
        assert Gr.unitary_frame_check(U.real, U.imag)
        plane = Gr.Plane.from_vectors("R14", np.hstack([U.real.T, U.imag.T]))
        kind = Gr.classify_symplectic(plane).kind
        assert kind == ("lagrangian" if k == 7 else "isotropic")


def test_complex_unitary_frames(rng):
    # any unitary frame (h = I) is accepted, whatever its phases
    Z, _ = np.linalg.qr(rng.standard_normal((7, 3)) + 1j * rng.standard_normal((7, 3)))
    assert Gr.unitary_frame_check(Z.real, Z.imag)
    plane = Gr.Plane.from_vectors("R14", np.hstack([Z.real.T, Z.imag.T]))
    assert Gr.classify_symplectic(plane).kind == "isotropic"
    # z1 = e1, z2 = i e1 has h(z1, z2) = -i
    X = np.stack([e(1), np.zeros(7)], axis=1)
    Y = np.stack([np.zeros(7), e(1)], axis=1)
    assert not Gr.unitary_frame_check(X, Y)


# -- membership -----------------------------------------------------------------


def test_associative_examples():
    assert Gr.is_associative(Gr.Plane("R7", np.array([e(1), e(2), e(3)])))
    assert not Gr.is_associative(Gr.Plane("R7", np.array([e(1), e(2), e(4)])))
    assert not Gr.is_associative(Gr.Plane("R7", np.array([e(1), e(2), e(3) + 1e-3 * e(4)])))
    with pytest.raises(InputError):
        Gr.is_associative(Gr.Plane("R7", np.array([e(1), e(2)])))


def test_associativity_oracle(rng):
    # independent oracle: a 3-plane is associative iff it is closed under the cross product
    for _ in range(20):
        g = g2core.random_g2(rng, complex_entries=False).real
        A = rng.standard_normal((3, 3)) + 3 * np.eye(3)
        b = A @ (g @ np.eye(7)[:, :3]).T
        cr = Gr.cross7(b[0], b[1])
        assert np.linalg.matrix_rank(np.vstack([b, cr]), tol=1e-8) == 3
        assert Gr.is_associative(Gr.Plane("R7", b))
    for _ in range(20):
        b = rng.standard_normal((3, 7))
        cr = Gr.cross7(b[0], b[1])
        assert np.linalg.matrix_rank(np.vstack([b, cr]), tol=1e-8) == 4
        assert not Gr.is_associative(Gr.Plane("R7", b))


def test_isotropic_associative_examples():
    assert Gr.is_isotropic_associative(L0())
    p = r14(e(1, 14), e(2, 14), f(3))
    # oracle: evaluate both conditions directly
    z = [e(1).astype(complex), e(2).astype(complex), 1j * e(3)]
    br = O.associator(*(O.embed_imaginary(v) for v in z))
    iso = all(abs(Gr.omega(a, b)) < 1e-14 for a in z for b in z)
    assert Gr.is_isotropic_associative(p) == (iso and np.allclose(br, 0))
    assert not Gr.is_isotropic_associative(r14(e(1, 14), f(1), e(2, 14)))


def test_b_real_examples():
    assert Gr.is_b_real_associative(L0())
    assert not Gr.is_b_real_associative(r14(f(1), f(2), f(3)))
    p = r14(e(1, 14), e(2, 14), e(3, 14) + f(4))
    assert not Gr.is_b_real_associative(p)


def test_b_real_conditions_report_all_three():
    c = Gr.b_real_conditions(r14(e(1, 14), e(2, 14), e(3, 14) + f(4)))
    assert set(c) == {"re_positive", "im_zero", "associative"}
    assert c["im_zero"] and not c["re_positive"] and not c["associative"]
    c = Gr.b_real_conditions(r14(e(1, 14), e(2, 14), e(3, 14) + 0.5 * f(3)))
    assert c["re_positive"] and not c["im_zero"] and c["associative"]
    c = Gr.b_real_conditions(r14(f(1), f(2), f(3)))
    assert c["im_zero"] and c["associative"] and not c["re_positive"]


# -- tangent dimensions ------------------------------------------------------------


EXPECTED = [
    ("associative", "R7", 3, 8),
    ("isotropic", "R14", 3, 30),
    ("isotropic_associative", "R14", 3, 22),
    ("b_real_associative", "R14", 3, 19),
    ("isotropic", "R14", 7, 28),
]


@pytest.mark.parametrize("kind,ambient,k,expected", EXPECTED)
@pytest.mark.parametrize("method", ["lemma", "linearized"])
@pytest.mark.parametrize("exact", [True, False])
def test_nullities_at_standard_plane(kind, ambient, k, expected, method, exact):
    r = Gr.tangent_dimension(Gr.standard_plane(ambient, k, exact=exact), kind, method=method)
    assert r.nullity == expected
    assert r.exact == exact
    assert r.well_separated
    if not exact:
        assert r.gap_ratio > 1e6
    assert len(r.basis_of_kernel) == r.nullity + r.gauge if method == "linearized" else len(r.basis_of_kernel) == r.nullity


def test_associative_complex_nullity():
    r = Gr.tangent_dimension(L0("C7"), "associative")
    assert r.nullity == 16 and r.complex_nullity == 8


def test_homogeneous_cross_checks():
    assert Gr.homogeneous_dimension("associative") == 14 - 6 == 8
    assert Gr.homogeneous_dimension("isotropic", 3, 7) == 49 - (3 + 16) == 30
    assert Gr.homogeneous_dimension("isotropic", 7, 7) == 49 - 21 == 28
    with pytest.raises(InputError):
        Gr.homogeneous_dimension("b_real_associative")


def rotated_l0(rng, ambient="R14", complex_g=False):
    g = g2core.random_g2(rng, complex_entries=complex_g)
    b = (g @ np.eye(7)[:, :3]).T
    if ambient == "R7":
        b = b.real
    return Gr.Plane(ambient, b)


def test_nullities_on_g2_orbit(rng):
    for _ in range(3):
        assert Gr.tangent_dimension(rotated_l0(rng, "R7"), "associative").nullity == 8
        p = rotated_l0(rng, "R14")
        assert Gr.tangent_dimension(p, "isotropic_associative").nullity == 22
        assert Gr.tangent_dimension(p, "b_real_associative").nullity == 19
        assert Gr.tangent_dimension(p, "isotropic").nullity == 30


def test_isotropic_associative_at_phase_rotated_plane():
    p = Gr.Plane("R14", np.exp(0.7j) * np.eye(7)[:3])
    assert Gr.is_isotropic_associative(p) and not Gr.is_b_real_associative(p)
    for method in ("lemma", "linearized"):
        r = Gr.tangent_dimension(p, "isotropic_associative", method=method)
        assert r.nullity == 22 and r.well_separated
    r = Gr.tangent_dimension(p, "ia")
    assert set(r.variants) == {"stated", "full"}


def test_complex_associative_plane_off_real_locus(rng):
    p = rotated_l0(rng, "C7", complex_g=True)
    for method in ("lemma", "linearized"):
        r = Gr.tangent_dimension(p, "associative", method=method)
        assert r.nullity == 16 and r.well_separated


def test_nullity_invariant_under_reframing(rng):
    base = Gr.tangent_dimension(L0("R7", exact=False), "associative").nullity
    for _ in range(5):
        A = rng.standard_normal((3, 3)) + 3 * np.eye(3)
        p = Gr.Plane("R7", A @ np.eye(7)[:3])
        assert Gr.tangent_dimension(p, "associative").nullity == base


def test_kernel_substitution(rng):
    for p in (L0("R7", exact=False), rotated_l0(rng, "R7")):
        r = Gr.tangent_dimension(p, "associative")
        assert Gr.substitution_residual(r, p) < 1e-10


def test_linearized_gauge_directions_in_kernel():
    p = L0("R14", exact=False)
    for kind in ("isotropic", "isotropic_associative", "b_real_associative"):
        r = Gr.tangent_dimension(p, kind, method="linearized")
        assert Gr.gauge_in_kernel(r, p)


def test_tangent_preconditions():
    with pytest.raises(PreconditionError):
        Gr.tangent_dimension(Gr.Plane("R7", np.array([e(1), e(2), e(4)])), "associative")
    with pytest.raises(InputError):
        Gr.tangent_dimension(L0("R7"), "isotropic")
    with pytest.raises(InputError):
        Gr.tangent_dimension(L0(), "associative", method="bogus")
    with pytest.raises(InputError):
        Gr.tangent_dimension(L0(), "not-a-kind")
    with pytest.raises(PreconditionError):
        Gr.tangent_dimension(r14(f(1), f(2), f(3)), "b-real")


def test_degenerate_associative_plane():
    u = e(1) + 1j * e(2)
    v = e(4).astype(complex)
    p = Gr.Plane("C7", np.array([u, v, Gr.cross7(u, v)]))
    assert Gr.is_associative(p)
    with pytest.raises(DegeneracyError, match="degenerate"):
        Gr.tangent_dimension(p, "associative")


def test_kind_aliases():
    a = Gr.tangent_dimension(L0(), "b-real").nullity
    b = Gr.tangent_dimension(L0(), "b_real_associative").nullity
    assert a == b == 19
    assert Gr.tangent_dimension(Gr.standard_plane("R14", 7), "lagrangian").nullity == 28


def test_report_summary_is_json_ready():
    r = Gr.tangent_dimension(L0(exact=False), "isotropic")
    s = r.summary()
    s["gap_ratio"] = None if not np.isfinite(s["gap_ratio"]) else s["gap_ratio"]
    json.dumps(s)
    assert s["nullity"] == 30


# -- JSON -----------------------------------------------------------------------------


@pytest.mark.parametrize("ambient", ["R7", "C7", "R14"])
def test_plane_json_round_trip(rng, ambient):
    b = rng.standard_normal((3, 7)) + (1j * rng.standard_normal((3, 7)) if ambient != "R7" else 0)
    p = Gr.Plane(ambient, b)
    q = Gr.plane_from_json(json.loads(json.dumps(Gr.plane_to_json(p))))
    assert q.ambient == ambient and np.allclose(to_float_array(q.basis), to_float_array(p.basis))


def test_plane_json_exact():
    obj = {"ambient": "R14", "basis": [list(e(1, 14)), list(e(2, 14)), list(e(3, 14))]}
    p = Gr.plane_from_json(obj, exact=True)
    assert p.exact and Gr.tangent_dimension(p, "ia").exact


@pytest.mark.parametrize("obj", [
    {}, {"ambient": "R14"}, {"ambient": "X", "basis": [[0] * 14]},
    {"ambient": "R14", "basis": [[0] * 13]}, {"ambient": "C7", "basis": [[1, 2]]},
    {"ambient": "R7", "basis": [["a"] * 7]}, {"ambient": "R7", "basis": []},
])
def test_plane_json_rejects(obj):
    with pytest.raises(InputError):
        Gr.plane_from_json(obj)
