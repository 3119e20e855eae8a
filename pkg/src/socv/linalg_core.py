"""Hermitian matrix primitives.

Matrices are plain ``numpy.ndarray`` objects (float64 when real, complex128
otherwise).  ``as_hermitian`` is the single gate that validates and
symmetrizes input; everything downstream assumes its output.

The numerical order relation follows one tolerance model: a gap matrix ``G``
is treated as positive semidefinite when

    min_eig(G) >= -eps_rel * max(1, scale)

where ``scale`` defaults to ``||G||_2`` and callers may pass the magnitude of
the terms that were combined to form ``G`` (rounding error is proportional to
those, not to the possibly cancelled result).
"""
from __future__ import annotations

import hashlib
import json
from typing import Callable, NamedTuple, Sequence

import numpy as np

EPS_REL = 1e-8
SYMMETRY_RTOL = 1e-12


class DomainError(ValueError):
    """Spectrum of a matrix is not contained in a function's domain."""

    def __init__(self, message: str, offending: Sequence[float] = ()):
        super().__init__(message)
        self.offending = list(offending)


class EighError(np.linalg.LinAlgError):
    """Eigensolver failed; carries the fingerprint of the input."""

    def __init__(self, message: str, fingerprint: str):
        super().__init__(f"{message} (matrix fingerprint {fingerprint})")
        self.fingerprint = fingerprint


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.conj().T


class PsdVerdict(NamedTuple):
    is_psd: bool
    margin: float
    tolerance_used: float


class SpectrumStats(NamedTuple):
    min_eig: float
    max_eig: float
    op_norm: float


# ---------------------------------------------------------------------------
# construction and serialization


def as_hermitian(M, rtol: float = SYMMETRY_RTOL) -> np.ndarray:
    """Validate ``M`` as Hermitian and return ``(M + M^*) / 2``.

    Real input stays real.  Raises ``ValueError`` if ``M`` is not square or
    deviates from Hermitian symmetry by more than ``rtol`` relative to its
    largest entry.
    """
    M = np.atleast_2d(np.asarray(M))
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {M.shape}")
    if np.iscomplexobj(M):
        M = M.astype(np.complex128)
        if not np.any(M.imag):
            M = M.real.copy()
    else:
        M = M.astype(np.float64)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    MH = M.conj().T
    asym = np.max(np.abs(M - MH))
    size = max(1.0, float(np.max(np.abs(M))))
    if asym > rtol * size:
        raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
    return (M + MH) / 2


def symmetrize(M: np.ndarray) -> np.ndarray:
    """Exact Hermitian part of a product computed in floating point."""
    return (M + M.conj().T) / 2


def to_json(H: np.ndarray) -> dict:
    """Matrix JSON object ``{"dim", "re", "im"}``; ``im`` omitted when zero.

    Python floats serialize via ``repr`` which round-trips IEEE-754 doubles
    exactly, so ``from_json(json.loads(json.dumps(to_json(H))))`` is
    bit-identical to ``H``.
    """
    H = np.asarray(H)
    out = {"dim": int(H.shape[0]), "re": np.real(H).tolist()}
    if np.iscomplexobj(H) and np.any(H.imag):
        out["im"] = np.imag(H).tolist()
    return out


def from_json(obj: dict) -> np.ndarray:
    re = np.asarray(obj["re"], dtype=np.float64)
    n = int(obj.get("dim", re.shape[0]))
    if re.shape != (n, n):
        raise ValueError(f"'re' has shape {re.shape}, expected {(n, n)}")
    if "im" in obj and obj["im"] is not None:
        im = np.asarray(obj["im"], dtype=np.float64)
        if im.shape != (n, n):
            raise ValueError(f"'im' has shape {im.shape}, expected {(n, n)}")
        if np.any(im):
            return re + 1j * im
    return re


def fingerprint(*items) -> str:
    """Short sha256 digest of matrices and JSON-serializable parameters."""
    h = hashlib.sha256()
    for item in items:
        if isinstance(item, np.ndarray):
            arr = np.ascontiguousarray(item)
            h.update(str(arr.dtype).encode())
            h.update(str(arr.shape).encode())
            h.update(arr.tobytes())
        else:
            h.update(json.dumps(item, sort_keys=True, default=str).encode())
        h.update(b"|")
    return h.hexdigest()[:16]


# ---------------------------------------------------------------------------
# spectral decomposition


def eigh(H: np.ndarray, method: str = "lapack") -> SpectralDecomposition:
    """Spectral decomposition with ascending eigenvalues.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``method="jacobi"`` uses
    the cyclic Jacobi sweep in :func:`jacobi_eigh`.
    """
    if method == "jacobi":
        return jacobi_eigh(H)
    try:
        w, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise EighError(str(exc), fingerprint(np.asarray(H))) from exc
    return SpectralDecomposition(w, U)


def jacobi_eigh(H: np.ndarray, tol: float = 1e-15, max_sweeps: int = 60) -> SpectralDecomposition:
    """Cyclic Jacobi eigensolver for real symmetric or complex Hermitian ``H``.

    Each rotation first removes the phase of the pivot entry with a diagonal
    unitary, then applies the real symmetric Schur rotation.
    """
    A = np.array(H, dtype=np.complex128 if np.iscomplexobj(H) else np.float64)
    n = A.shape[0]
    V = np.eye(n, dtype=A.dtype)
    scale = np.linalg.norm(A)
    if n == 1 or scale == 0:
        return SpectralDecomposition(np.real(np.diag(A)).copy(), V)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p, q]
                r = abs(h)
                if r <= 1e-300:
                    continue
                phase = np.conj(h) / r
                a, b = A[p, p].real, A[q, q].real
                tau = (b - a) / (2 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                G = np.array([[c, s], [-s * phase, c * phase]], dtype=A.dtype)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0
                V[:, idx] = V[:, idx] @ G
    else:
        raise EighError(f"Jacobi did not converge in {max_sweeps} sweeps", fingerprint(np.asarray(H)))
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], V[:, order])


def eigvalsh(H: np.ndarray) -> np.ndarray:
    # same LAPACK driver as eigh so endpoints agree bit for bit
    return eigh(H).eigenvalues


def spectrum_stats(H: np.ndarray) -> SpectrumStats:
    w = eigvalsh(H)
    lo, hi = float(w[0]), float(w[-1])
    return SpectrumStats(lo, hi, max(abs(lo), abs(hi)))


def op_norm(H: np.ndarray) -> float:
    return spectrum_stats(H).op_norm


def min_eig(H: np.ndarray) -> float:
    return float(eigvalsh(H)[0])


# ---------------------------------------------------------------------------
# functional calculus


def apply_function(f: Callable, H: np.ndarray) -> np.ndarray:
    """Return ``f(H) = U diag(f(lambda)) U^*``.

    If ``f`` has a ``domain`` attribute (an open interval), every eigenvalue
    must lie strictly inside it; otherwise :class:`DomainError` is raised.
    """
    w, U = eigh(H)
    domain = getattr(f, "domain", None)
    if domain is not None:
        bad = [float(x) for x in w if not domain.contains(x)]
        if bad:
            name = getattr(f, "name", repr(f))
            raise DomainError(f"spectrum outside domain {domain} of {name}: {bad}", bad)
    fw = np.asarray(f(w), dtype=np.float64)
    if fw.shape != w.shape:
        fw = np.broadcast_to(fw, w.shape)
    if not np.all(np.isfinite(fw)):
        raise DomainError(f"function {getattr(f, 'name', f)!r} is not finite on spectrum {w.tolist()}", w)
    return symmetrize((U * fw) @ U.conj().T)


def inverse(H: np.ndarray) -> np.ndarray:
    """Inverse of an invertible Hermitian matrix via its eigendecomposition."""
    w, U = eigh(H)
    if np.any(w == 0):
        raise np.linalg.LinAlgError("singular matrix")
    return symmetrize((U / w) @ U.conj().T)


def mpow(H: np.ndarray, p: float) -> np.ndarray:
    """Real power of a positive definite matrix."""
    w, U = eigh(H)
    if w[0] <= 0:
        raise DomainError(f"power {p} requires a positive definite matrix", w[w <= 0])
    return symmetrize((U * w**p) @ U.conj().T)


# ---------------------------------------------------------------------------
# order relation


def psd_check(H: np.ndarray, tol: float) -> PsdVerdict:
    """Absolute-tolerance PSD test: ``is_psd`` iff ``min_eig(H) >= -tol``."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    m = min_eig(H)
    return PsdVerdict(m >= -tol, m, float(tol))


def tolerance(eps_rel: float, *scales: float) -> float:
    return eps_rel * max(1.0, *(abs(float(s)) for s in scales))


def numerically_psd(G: np.ndarray, eps_rel: float = EPS_REL, scale: float | None = None) -> PsdVerdict:
    if scale is None:
        scale = op_norm(G)
    return psd_check(G, tolerance(eps_rel, scale))


def strictly_positive(G: np.ndarray, eps_rel: float = EPS_REL, scale: float | None = None) -> bool:
    if scale is None:
        scale = op_norm(G)
    return min_eig(G) > tolerance(eps_rel, scale)


def block2x2(M11, M12, M21, M22) -> np.ndarray:
    """Assemble ``[[M11, M12], [M21, M22]]``; result must be Hermitian."""
    blocks = [np.atleast_2d(np.asarray(M)) for M in (M11, M12, M21, M22)]
    n = blocks[0].shape[0]
    for M in blocks:
        if M.shape != (n, n):
            raise ValueError(f"block shapes differ: {[b.shape for b in blocks]}")
    return as_hermitian(np.block([[blocks[0], blocks[1]], [blocks[2], blocks[3]]]))


def random_unitary(rng: np.random.Generator, dim: int, complex_entries: bool = False) -> np.ndarray:
    """Haar-distributed orthogonal/unitary matrix (QR of a Gaussian matrix)."""
    Z = rng.standard_normal((dim, dim))
    if complex_entries:
        Z = Z + 1j * rng.standard_normal((dim, dim))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def with_spectrum(eigenvalues, U: np.ndarray) -> np.ndarray:
    w = np.asarray(eigenvalues, dtype=np.float64)
    return symmetrize((U * w) @ U.conj().T)
