"""Weighted operator means, parallel sums and symmetrized products.

All inverses go through the eigendecomposition (``1/t`` functional
calculus), so there is a single numerical pathway.
"""
from __future__ import annotations

import numpy as np

from . import linalg_core as la


def _same_shape(A: np.ndarray, B: np.ndarray) -> None:
    if np.shape(A) != np.shape(B):
        raise ValueError(f"dimension mismatch: {np.shape(A)} vs {np.shape(B)}")


def _check_alpha(alpha: float, open_: bool = False) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0 or (open_ and alpha in (0.0, 1.0)):
        raise ValueError(f"alpha must be in {'(0, 1)' if open_ else '[0, 1]'}, got {alpha}")
    return alpha


def _require_pd(M: np.ndarray, what: str, eps_rel: float) -> None:
    if not la.strictly_positive(M, eps_rel):
        raise np.linalg.LinAlgError(f"{what} is not positive definite (min eig {la.min_eig(M):.3e})")


def nabla(A: np.ndarray, B: np.ndarray, alpha: float) -> np.ndarray:
    """Weighted arithmetic mean ``(1 - alpha) A + alpha B``."""
    _same_shape(A, B)
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        return np.array(A)
    if alpha == 1.0:
        return np.array(B)
    return (1 - alpha) * A + alpha * B


def harmonic(A: np.ndarray, B: np.ndarray, alpha: float, eps_rel: float = la.EPS_REL) -> np.ndarray:
    """Weighted harmonic mean ``((1 - alpha) A^-1 + alpha B^-1)^-1``.

    ``alpha`` of 0 or 1 returns ``A`` or ``B`` unchanged.
    """
    _same_shape(A, B)
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        return np.array(A)
    if alpha == 1.0:
        return np.array(B)
    _require_pd(A, "A", eps_rel)
    _require_pd(B, "B", eps_rel)
    return la.inverse((1 - alpha) * la.inverse(A) + alpha * la.inverse(B))


def parallel_sum(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``(A^-1 + B^-1)^-1``."""
    _same_shape(A, B)
    return la.inverse(la.inverse(A) + la.inverse(B))


def symmetrized_product(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``AB + BA``, computed as ``P + P^*`` with ``P = AB`` so it is exactly Hermitian."""
    _same_shape(A, B)
    P = np.asarray(A) @ np.asarray(B)
    return P + P.conj().T


def mean_gap_sides(A: np.ndarray, B: np.ndarray, alpha: float, eps_rel: float = la.EPS_REL):
    """Both sides of the arithmetic/harmonic gap identity.

    Returns ``(lhs, rhs)`` with ``lhs = A nabla_alpha B - A !_alpha B`` and
    ``rhs = alpha (1 - alpha) (A - B) X^-1 (A - B)``, ``X = alpha A + (1 - alpha) B``.
    Note the weights in ``X`` are swapped relative to ``nabla``.
    """
    alpha = _check_alpha(alpha, open_=True)
    X = alpha * A + (1 - alpha) * B
    _require_pd(X, "alpha A + (1 - alpha) B", eps_rel)
    D = A - B
    lhs = nabla(A, B, alpha) - harmonic(A, B, alpha, eps_rel)
    rhs = alpha * (1 - alpha) * la.symmetrize(D @ la.inverse(X) @ D)
    return lhs, rhs


def mean_gap_residual(A: np.ndarray, B: np.ndarray, alpha: float, eps_rel: float = la.EPS_REL) -> float:
    """Spectral norm of ``lhs - rhs`` from :func:`mean_gap_sides`."""
    lhs, rhs = mean_gap_sides(A, B, alpha, eps_rel)
    return float(np.linalg.norm(lhs - rhs, 2))


def parallel_sum_minimizer(A: np.ndarray, B: np.ndarray, z) -> tuple[np.ndarray, float]:
    """Minimizer of ``<Ax, x> + <B(z - x), z - x>`` and the minimum value.

    The minimum equals ``<(A^-1 + B^-1)^-1 z, z>`` and is attained at
    ``x* = A^-1 (A^-1 + B^-1)^-1 z``.
    """
    _same_shape(A, B)
    _require_pd(A, "A", la.EPS_REL)
    _require_pd(B, "B", la.EPS_REL)
    z = np.asarray(z)
    P = parallel_sum(A, B)
    Pz = P @ z
    x_star = la.inverse(A) @ Pz
    value = float(np.real(np.vdot(z, Pz)))
    return x_star, value


def decomposition_value(A: np.ndarray, B: np.ndarray, x, y) -> float:
    """``<Ax, x> + <By, y>``."""
    return float(np.real(np.vdot(x, A @ x) + np.vdot(y, B @ y)))
