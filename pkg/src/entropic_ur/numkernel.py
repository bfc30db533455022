"""Dense complex matrix primitives: Hermitian eigensolvers and spectral functions.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  Two
eigensolvers are available: LAPACK (``numpy.linalg.eigh``, the default) and a
cyclic complex Jacobi solver that depends on nothing but numpy array
arithmetic.  The Jacobi solver is used as an independent cross-check and can be
selected globally with :func:`set_default_method`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NotHermitianError, NotSquareError, NumericalError

HERMITIAN_TOL = 1e-12
SYMMETRIZE_TOL = 1e-8
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60

_METHODS = ("lapack", "jacobi")
_default_method = "lapack"


def set_default_method(method: str) -> None:
    global _default_method
    if method not in _METHODS:
        raise ValueError(f"unknown eigensolver {method!r}; choose from {_METHODS}")
    _default_method = method


def get_default_method() -> str:
    return _default_method


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def apply(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        V = self.eigenvectors
        out = (V * np.asarray(f(self.eigenvalues), dtype=float)) @ V.conj().T
        return 0.5 * (out + out.conj().T)


def as_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise NotSquareError(f"expected a non-empty square matrix, got shape {A.shape}")
    return A


def hermiticity(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def residuals(M) -> dict:
    """Hermiticity, unitarity and trace of ``M``.

    ``hermiticity`` is the largest entry of ``|M - M^H|``, ``unitarity`` the
    Frobenius norm of ``M^H M - I``.
    """
    A = as_matrix(M)
    n = A.shape[0]
    return {
        "hermiticity": hermiticity(A),
        "unitarity": float(np.linalg.norm(A.conj().T @ A - np.eye(n))),
        "trace": complex(np.trace(A)),
    }


def hermitian_part(M, tol: float = SYMMETRIZE_TOL) -> np.ndarray:
    """Return ``(M + M^H)/2``, refusing inputs that are far from Hermitian.

    The tolerance is relative to ``1 + max|M|``.
    """
    A = as_matrix(M)
    res = hermiticity(A)
    bound = tol * (1.0 + float(np.max(np.abs(A))))
    if res > bound:
        raise NotHermitianError(res, bound)
    return 0.5 * (A + A.conj().T)


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    A = as_matrix(M)
    return hermiticity(A) <= tol * (1.0 + float(np.max(np.abs(A))))


def _offdiag_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.linalg.norm(off))


def jacobi_eigh(A: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Each rotation first removes the phase of the pivot ``A[p, q]`` and then
    applies a real Givens rotation to the resulting real symmetric 2x2 block.
    Stops once the off-diagonal Frobenius mass drops below ``tol * ||A||_F``.
    Returns ``(eigenvalues, eigenvectors, sweeps)`` unsorted.
    """
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(A))
    if n == 1 or scale == 0.0:
        return np.real(np.diag(A)).copy(), V, 0
    target = tol * scale
    tiny = np.finfo(float).tiny / np.finfo(float).eps
    sweeps = 0
    while _offdiag_norm(A) > target:
        if sweeps >= max_sweeps:
            raise NumericalError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal mass {_offdiag_norm(A):.3e})"
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[p, q]
                r = abs(b)
                if r <= tiny:
                    continue
                phase = b / r
                theta = 0.5 * math.atan2(2.0 * r, A[q, q].real - A[p, p].real)
                c, s = math.cos(theta), math.sin(theta)
                # columns p, q of the local unitary diag(1, conj(phase)) @ [[c, s], [-s, c]]
                R = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ R
                A[idx, :] = R.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ R
    return np.real(np.diag(A)).copy(), V, sweeps


def herm_eig(M, method: str | None = None) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues ascending.

    Inputs within ``SYMMETRIZE_TOL`` of Hermitian are symmetrised first; others
    raise :class:`NotHermitianError` carrying the residual.
    """
    A = hermitian_part(M)
    method = method or _default_method
    if method == "lapack":
        w, V = np.linalg.eigh(A)
    elif method == "jacobi":
        w, V, _ = jacobi_eigh(A)
        order = np.argsort(w, kind="stable")
        w, V = w[order], V[:, order]
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return SpectralDecomposition(np.asarray(w, dtype=float), np.asarray(V, dtype=complex))


def matrix_function(
    M,
    f: Callable[[np.ndarray], np.ndarray],
    domain_guard: Callable[[np.ndarray], np.ndarray] | None = None,
    name: str = "f",
    method: str | None = None,
) -> np.ndarray:
    """Apply the real scalar function ``f`` to a Hermitian matrix spectrally.

    ``domain_guard`` maps the eigenvalue vector to a boolean mask; any ``False``
    entry raises :class:`DomainError` naming the first offending eigenvalue.
    """
    dec = M if isinstance(M, SpectralDecomposition) else herm_eig(M, method)
    if domain_guard is not None:
        ok = np.asarray(domain_guard(dec.eigenvalues), dtype=bool)
        if not ok.all():
            raise DomainError(dec.eigenvalues[~ok][0], name)
    return dec.apply(f)


def expm_h(M, method: str | None = None) -> np.ndarray:
    return matrix_function(M, np.exp, name="exp", method=method)


def logm_h(M, method: str | None = None) -> np.ndarray:
    return matrix_function(M, np.log, lambda w: w > 0, name="log", method=method)


def sqrtm_h(M, method: str | None = None) -> np.ndarray:
    return matrix_function(M, np.sqrt, lambda w: w >= 0, name="sqrt", method=method)


def logsumexp(x) -> float:
    x = np.asarray(x, dtype=float)
    m = float(np.max(x))
    if not np.isfinite(m):
        return m
    return m + math.log(float(np.sum(np.exp(x - m))))


def log_trace_exp(M, method: str | None = None) -> float:
    """``ln tr e^M`` evaluated with a spectral shift so it never overflows."""
    dec = M if isinstance(M, SpectralDecomposition) else herm_eig(M, method)
    return logsumexp(dec.eigenvalues)


def dft_matrix(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / math.sqrt(n)
