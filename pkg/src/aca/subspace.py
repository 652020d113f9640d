"""Orthonormal bases: complements, lifting and random directions.

A basis is a ``(d, r)`` array whose columns are orthonormal; ``r == 0`` is the
empty basis.  Directions are plain 1-D unit vectors.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "as_basis",
    "gram_deviation",
    "reorthonormalize",
    "orthonormal_complement",
    "lift",
    "random_unit",
    "sample_cap",
]

GRAM_TOL = 1e-10


def as_basis(columns, ambient_dim: int | None = None) -> np.ndarray:
    """Coerce ``columns`` to a float ``(d, r)`` array, checking the dimension."""
    B = np.asarray(columns, dtype=float)
    if B.ndim == 1:
        B = B.reshape(-1, 1) if B.size else np.zeros((ambient_dim or 0, 0))
    if B.ndim != 2:
        raise InvalidInputError(f"basis must be 2-D, got shape {B.shape}")
    if ambient_dim is not None and B.shape[0] != ambient_dim:
        raise InvalidInputError(
            f"basis has ambient dimension {B.shape[0]}, expected {ambient_dim}"
        )
    if not np.all(np.isfinite(B)):
        raise InvalidInputError("basis contains non-finite values")
    return B


def gram_deviation(B: np.ndarray) -> float:
    """Max absolute entry of ``B^T B - I``."""
    if B.shape[1] == 0:
        return 0.0
    return float(np.max(np.abs(B.T @ B - np.eye(B.shape[1]))))


def reorthonormalize(B: np.ndarray, tol: float = GRAM_TOL) -> np.ndarray:
    """Return ``B`` unchanged if orthonormal within ``tol``, else a cleaned copy.

    Cleaning is a QR factorization with the signs chosen so that each column
    keeps a positive inner product with the column it replaces.
    """
    if gram_deviation(B) <= tol:
        return B
    Q, R = np.linalg.qr(B)
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    return Q * signs


def orthonormal_complement(found, ambient_dim: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(found)``.

    The found columns are completed to a full orthonormal set by Gram-Schmidt
    over the candidates ``e_1, ..., e_d``, always taking the candidate with the
    largest residual norm (lowest index on ties), so the result is
    deterministic.  Only the completing columns are returned.

    Args:
        found: ``(d, k)`` array with orthonormal columns, ``k`` may be 0.
        ambient_dim: ``d``.

    Returns:
        ``(d, d - k)`` array; empty when ``k == d``.
    """
    d = int(ambient_dim)
    if d < 1:
        raise InvalidInputError("ambient_dim must be >= 1")
    A = as_basis(found, d)
    k = A.shape[1]
    if k > d:
        raise InvalidInputError(f"{k} columns cannot be orthonormal in R^{d}")
    Q = reorthonormalize(A) if k else np.zeros((d, 0))
    cand = np.eye(d)
    out = []
    for _ in range(d - k):
        # two projection passes keep the residuals orthogonal to working precision
        resid = cand - Q @ (Q.T @ cand)
        resid = resid - Q @ (Q.T @ resid)
        norms = np.linalg.norm(resid, axis=0)
        j = int(np.argmax(norms))
        q = resid[:, j] / norms[j]
        out.append(q)
        Q = np.column_stack([Q, q])
    if not out:
        return np.zeros((d, 0))
    return np.column_stack(out)


def lift(coeffs, basis) -> np.ndarray:
    """Map a unit vector of basis coordinates to a unit direction in R^d."""
    B = as_basis(basis)
    if B.shape[1] == 0:
        raise InvalidInputError("cannot lift into an empty basis")
    t = np.asarray(coeffs, dtype=float).ravel()
    if t.size != B.shape[1]:
        raise InvalidInputError(
            f"coefficient length {t.size} does not match basis rank {B.shape[1]}"
        )
    return B @ t


def random_unit(r: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the unit sphere in R^r (normalized Gaussian)."""
    if r < 1:
        raise InvalidInputError("dimension of a random unit vector must be >= 1")
    while True:
        g = rng.standard_normal(r)
        nrm = np.linalg.norm(g)
        if nrm > 0.0:
            return g / nrm


def sample_cap(center: np.ndarray, radius: float, m: int,
               rng: np.random.Generator) -> np.ndarray:
    """Draw ``m`` points uniformly from a geodesic cap on the unit sphere.

    The polar angle has density proportional to ``sin(theta)^(r-2)`` on
    ``[0, radius]`` and is drawn by rejection; the tangent direction is a
    normalized Gaussian projected off the center.

    Returns:
        ``(m, r)`` array of unit vectors.
    """
    center = np.asarray(center, dtype=float)
    r = center.size
    if r == 1 or m == 0:
        return np.tile(center, (m, 1))
    if radius >= np.pi:
        return np.array([random_unit(r, rng) for _ in range(m)])
    top = np.sin(min(radius, np.pi / 2))
    theta = np.empty(m)
    filled = 0
    while filled < m:
        prop = radius * rng.random(2 * (m - filled) + 4)
        acc = prop[rng.random(prop.size) <= (np.sin(prop) / top) ** (r - 2)]
        take = min(acc.size, m - filled)
        theta[filled:filled + take] = acc[:take]
        filled += take
    tang = rng.standard_normal((m, r))
    tang -= np.outer(tang @ center, center)
    nrm = np.linalg.norm(tang, axis=1)
    # a zero tangent has probability zero; fall back to the center itself
    nrm[nrm == 0.0] = np.inf
    tang /= nrm[:, None]
    pts = np.cos(theta)[:, None] * center + np.sin(theta)[:, None] * tang
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)
