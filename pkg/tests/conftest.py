from itertools import permutations

import numpy as np
import pytest

# Signed terms of the reference 3-form, written out by hand as an oracle.
PHI0_LITERAL = {
    (1, 2, 3): 1, (1, 4, 5): -1, (1, 6, 7): -1, (2, 4, 6): -1,
    (2, 5, 7): 1, (3, 4, 7): -1, (3, 5, 6): -1,
}


def perm_sign(p) -> int:
    p = list(p)
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def phi0_tensor() -> np.ndarray:
    """phi0(e_i, e_j, e_k) as a dense 7x7x7 array (0-based)."""
    T = np.zeros((7, 7, 7))
    for idx, c in PHI0_LITERAL.items():
        for p in permutations(range(3)):
            T[tuple(idx[q] - 1 for q in p)] = c * perm_sign(p)
    return T


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def metric_oracle(T: np.ndarray) -> np.ndarray:
    """b_ij from the tensor identity b_ij vol = (1/6) iota_i phi ^ iota_j phi ^ phi, expanded in index form.

    (iota_i phi ^ iota_j phi ^ phi)_{1..7} = sum over permutations sigma of S7 with
    the usual 1/(2!2!3!) normalization; computed by brute force over index splits.
    """


    b = np.zeros((7, 7), dtype=np.result_type(T, float))
    perms = list(permutations(range(7)))
    signs = np.array([perm_sign(p) for p in perms])
    P = np.array(perms)
    for i in range(7):
        for j in range(i, 7):
            vals = T[i][P[:, 0], P[:, 1]] * T[j][P[:, 2], P[:, 3]] * T[P[:, 4], P[:, 5], P[:, 6]]
            b[i, j] = b[j, i] = np.sum(signs * vals) / (2 * 2 * 6) / 6
    return b
