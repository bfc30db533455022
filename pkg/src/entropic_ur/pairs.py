"""Unitary transform pairs between weighted spaces and their overlap constant.

A pair stores the unitary ``W`` acting on orthonormalised coordinates.  Its
integral kernel is recovered as ``K(y_l, x_i) = W[l, i] / sqrt(nu_l mu_i)``
and the overlap constant ``c`` is the largest kernel magnitude, which for
counting measures is ``max |<a_j|b_k>|``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import numkernel as nk
from .errors import InvalidPairError
from .spaces import WeightedSpace

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TransformPair:
    source: WeightedSpace
    target: WeightedSpace
    W: np.ndarray = field(repr=False)
    label: str = ""
    factors: tuple = field(default=(), repr=False)
    c: float = field(init=False)

    def __post_init__(self):
        W = np.array(self.W, dtype=complex)
        if W.shape != (self.target.dim, self.source.dim):
            raise InvalidPairError(
                f"W has shape {W.shape}, expected {(self.target.dim, self.source.dim)}"
            )
        n = W.shape[0]
        r1 = np.linalg.norm(W.conj().T @ W - np.eye(n))
        r2 = np.linalg.norm(W @ W.conj().T - np.eye(n))
        if max(r1, r2) > UNITARY_TOL:
            raise InvalidPairError(f"W is not unitary (residual {max(r1, r2):.3e})")
        W.setflags(write=False)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "c", _kernel_sup(W, self.source.weights, self.target.weights))

    @property
    def dim(self) -> int:
        return self.source.dim

    @property
    def kernel(self) -> np.ndarray:
        """Kernel values ``K[l, i]`` relative to the two measures."""
        return self.W / np.sqrt(np.outer(self.target.weights, self.source.weights))

    def unitarity_residual(self) -> float:
        return nk.residuals(self.W)["unitarity"]


def _kernel_sup(W, mu, nu) -> float:
    return float(np.max(np.abs(W) / np.sqrt(np.outer(nu, mu))))


def kernel_sup(pair: TransformPair) -> float:
    """Recompute ``c`` by scanning every kernel entry."""
    return _kernel_sup(pair.W, pair.source.weights, pair.target.weights)


def identity_pair(n: int) -> TransformPair:
    sp = WeightedSpace.counting(n)
    return TransformPair(sp, sp, np.eye(n), label=f"identity:{n}")


def dft_pair(n: int) -> TransformPair:
    if n < 1:
        raise InvalidPairError("dft needs N >= 1")
    sp = WeightedSpace.counting(n)
    return TransformPair(sp, sp, nk.dft_matrix(n), label=f"dft:{n}")


def grid_points(L: float, M: int) -> np.ndarray:
    """Cell midpoints of an ``M``-cell partition of ``(-L/2, L/2)``."""
    h = L / M
    return -L / 2 + (np.arange(M) + 0.5) * h


def frequency_points(L: float, M: int) -> np.ndarray:
    """Frequencies ``n / L`` for ``n`` in ``-ceil(M/2)+1 .. floor(M/2)``, ascending."""
    n = np.arange(-math.ceil(M / 2) + 1, M // 2 + 1)
    return n / L


def sampled_fourier_pair(L: float, M: int) -> TransformPair:
    """Position grid on ``(-L/2, L/2)`` against ``M`` frequencies spaced ``1/L``.

    Position weights are ``L/M``, frequency weights ``1/L`` and the kernel is
    ``exp(-2 pi i k x)``, so every kernel entry has modulus one.
    """
    if not L > 0 or M < 1:
        raise InvalidPairError(f"need L > 0 and M >= 1, got L={L!r}, M={M!r}")
    x = grid_points(L, M)
    k = frequency_points(L, M)
    W = np.exp(-2j * np.pi * np.outer(k, x)) / math.sqrt(M)
    return TransformPair(
        WeightedSpace.grid(x, L / M), WeightedSpace.grid(k, 1.0 / L), W,
        label=f"fourier:L={L:g},M={M}",
    )


def _check_orthonormal(A, name):
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidPairError(f"{name} must be a square matrix of basis columns")
    res = np.linalg.norm(A.conj().T @ A - np.eye(A.shape[1]))
    if res > UNITARY_TOL:
        raise InvalidPairError(f"columns of {name} are not orthonormal (residual {res:.3e})")
    return A


def general_pair(A, B) -> TransformPair:
    """Change of basis from the columns of ``A`` to the columns of ``B``.

    Coordinates with respect to ``a_j`` are mapped to coordinates with respect
    to ``b_k``; the matrix is ``W[k, j] = <b_k|a_j>``.
    """
    A = _check_orthonormal(A, "A")
    B = _check_orthonormal(B, "B")
    if A.shape != B.shape:
        raise InvalidPairError("bases have different dimensions")
    sp = WeightedSpace.counting(A.shape[0])
    return TransformPair(sp, sp, B.conj().T @ A, label="general")


def haar_unitary(n: int, seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def haar_pair(n: int, seed=None) -> TransformPair:
    sp = WeightedSpace.counting(n)
    return TransformPair(sp, sp, haar_unitary(n, seed), label=f"haar:N={n},seed={seed}")


def tensor_pair(p: TransformPair, q: TransformPair) -> TransformPair:
    return TransformPair(
        p.source.product(q.source), p.target.product(q.target), np.kron(p.W, q.W),
        label=f"tensor({p.label},{q.label})", factors=(p, q),
    )


def rescale_measures(pair: TransformPair, a: float, b: float) -> TransformPair:
    """Scale the source measure by ``a`` and the target measure by ``b``.

    The kernel as a function of ``(y, x)`` and the matrix ``W`` are unchanged,
    so probability masses stay put, densities shrink by ``a`` and ``b`` and
    ``c`` becomes ``c / sqrt(a b)``.
    """
    if not (a > 0 and b > 0):
        raise InvalidPairError("rescaling factors must be positive")
    return TransformPair(
        pair.source.scaled(a), pair.target.scaled(b), pair.W,
        label=f"rescale({pair.label},a={a:g},b={b:g})",
    )


def load_pair(path) -> TransformPair:
    """Read a pair from JSON.

    Keys: ``W_real`` (rows of the orthonormalised matrix), optional ``W_imag``,
    optional ``source_weights``/``target_weights`` (default all ones) and
    optional ``source_points``/``target_points``.
    """
    data = json.loads(Path(path).read_text())
    try:
        W = np.asarray(data["W_real"], dtype=float)
    except KeyError:
        raise InvalidPairError(f"{path}: missing 'W_real'") from None
    if "W_imag" in data:
        W = W + 1j * np.asarray(data["W_imag"], dtype=float)
    ny, nx = W.shape
    mu = np.asarray(data.get("source_weights", np.ones(nx)), dtype=float)
    nu = np.asarray(data.get("target_weights", np.ones(ny)), dtype=float)
    src = WeightedSpace(tuple(data.get("source_points", range(nx))), mu)
    tgt = WeightedSpace(tuple(data.get("target_points", range(ny))), nu)
    return TransformPair(src, tgt, W, label=f"file:{path}")


def save_pair(pair: TransformPair, path) -> None:
    def _pt(x):
        return x if isinstance(x, (int, float, str)) else str(x)

    data = {
        "W_real": np.real(pair.W).tolist(),
        "W_imag": np.imag(pair.W).tolist(),
        "source_weights": pair.source.weights.tolist(),
        "target_weights": pair.target.weights.tolist(),
        "source_points": [_pt(x) for x in pair.source.points],
        "target_points": [_pt(x) for x in pair.target.points],
    }
    Path(path).write_text(json.dumps(data))
