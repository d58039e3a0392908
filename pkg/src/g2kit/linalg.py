"""Rank, nullspace and determinant helpers for both scalar backends.

Float mode uses the SVD with a relative threshold; exact mode delegates to
sympy's ``DomainMatrix`` over QQ or QQ(i).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .scalars import GaussianRational, gaussian, is_exact_array

RANK_RTOL = 1e-9
GAP_REQUIRED = 1e6


@dataclass(frozen=True)
class RankInfo:
    rank: int
    nullity: int
    null_basis: np.ndarray  # columns span the kernel
    singular_values: np.ndarray | None
    gap_ratio: float
    exact: bool

    @property
    def well_separated(self) -> bool:
        return self.exact or self.gap_ratio > GAP_REQUIRED


def svd_rank(M: np.ndarray, rtol: float = RANK_RTOL) -> RankInfo:
    """Numerical rank with singular values below ``rtol * s_max`` treated as zero.

    ``gap_ratio`` is the smallest retained singular value over the largest
    discarded one (``inf`` when nothing is discarded or it is exactly 0).
    """
    M = np.atleast_2d(np.asarray(M))
    rows, cols = M.shape
    if M.size == 0:
        return RankInfo(0, cols, np.eye(cols), np.zeros(0), np.inf, False)
    u, s, vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * smax)) if smax > 0 else 0
    kept = s[:rank]
    dropped = s[rank:]
    if rank == 0:
        gap = np.inf if smax == 0 else 0.0
    elif dropped.size == 0 or dropped.max() == 0.0:
        gap = np.inf
    else:
        gap = float(kept.min() / dropped.max())
    null = vh[rank:].conj().T
    return RankInfo(rank, cols - rank, null, s, gap, False)


def _domain(M) -> tuple[list, object]:
    M = np.asarray(M, dtype=object)
    vals = [gaussian(x) if not isinstance(x, GaussianRational) else x for x in M.flat]
    if all(not v.y for v in vals):
        dom = QQ
        vals = [v.x for v in vals]
    else:
        dom = QQ_I
    rows = [vals[i * M.shape[1]:(i + 1) * M.shape[1]] for i in range(M.shape[0])]
    return rows, dom


def exact_rank(M) -> RankInfo:
    M = np.atleast_2d(np.asarray(M, dtype=object))
    rows, cols = M.shape
    if M.size == 0:
        return RankInfo(0, cols, np.eye(cols, dtype=object), None, np.inf, True)
    data, dom = _domain(M)
    dM = DomainMatrix(data, (rows, cols), dom)
    ns = dM.nullspace().to_list()
    null = np.empty((cols, len(ns)), dtype=object)
    for j, vec in enumerate(ns):
        for i, x in enumerate(vec):
            null[i, j] = gaussian(x) if dom == QQ else x
    rank = cols - len(ns)
    return RankInfo(rank, len(ns), null, None, np.inf, True)


def rank_info(M, rtol: float = RANK_RTOL) -> RankInfo:
    """Exact rank for exact arrays, SVD rank otherwise."""
    if is_exact_array(M):
        return exact_rank(M)
    return svd_rank(np.asarray(M, dtype=complex if np.iscomplexobj(M) else float), rtol)


def exact_det(M):
    M = np.asarray(M, dtype=object)
    data, dom = _domain(M)
    d = DomainMatrix(data, M.shape, dom).det()
    return gaussian(d) if dom == QQ else d


def exact_inv(M) -> np.ndarray:
    M = np.asarray(M, dtype=object)
    data, dom = _domain(M)
    inv = DomainMatrix(data, M.shape, dom).inv().to_list()
    return np.array([[gaussian(x) if dom == QQ else x for x in row] for row in inv], dtype=object)


def det(M):
    return exact_det(M) if is_exact_array(M) else np.linalg.det(np.asarray(M))


def inv(M):
    return exact_inv(M) if is_exact_array(M) else np.linalg.inv(np.asarray(M))


def realify_rows(M: np.ndarray) -> np.ndarray:
    """Stack real and imaginary parts of complex constraint rows into a real system."""
    M = np.asarray(M)
    if M.dtype == object:
        re = np.vectorize(lambda x: gaussian(x).x if not isinstance(x, GaussianRational) else x.x, otypes=[object])(M)
        im = np.vectorize(lambda x: gaussian(x).y if not isinstance(x, GaussianRational) else x.y, otypes=[object])(M)
        out = np.vstack([re, im])
        return np.vectorize(gaussian, otypes=[object])(out)
    return np.vstack([M.real, M.imag])


def orthonormal_complement(A: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Columns: orthonormal basis of the (real Euclidean / complex hermitian) complement of span(A's columns)."""
    A = np.atleast_2d(np.asarray(A))
    info = svd_rank(A.conj().T, rtol)
    return info.null_basis
