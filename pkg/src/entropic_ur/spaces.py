"""Finite weighted measure spaces and density matrices over them.

A function ``f`` on a weighted space with weights ``mu`` is stored through its
orthonormalised coordinates ``u_i = sqrt(mu_i) f(x_i)``.  In these coordinates
every operator is an ordinary matrix, the probability mass of point ``i`` is
the diagonal entry ``gamma[i, i]`` and the density relative to the measure is
``gamma[i, i] / mu_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import numkernel as nk
from .errors import DimensionMismatchError, InvalidStateError

PSD_TOL = 1e-10
TRACE_TOL = 1e-10


@dataclass(frozen=True)
class WeightedSpace:
    """Points with strictly positive, finite measure weights."""

    points: tuple
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).reshape(-1)
        pts = tuple(self.points)
        if len(pts) != w.shape[0]:
            raise ValueError(f"{len(pts)} points but {w.shape[0]} weights")
        if w.shape[0] < 1:
            raise ValueError("a weighted space needs at least one point")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be strictly positive and finite")
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def counting(cls, n: int) -> "WeightedSpace":
        return cls(tuple(range(n)), np.ones(n))

    @classmethod
    def grid(cls, points: Sequence[float], weight: float) -> "WeightedSpace":
        pts = tuple(float(x) for x in points)
        return cls(pts, np.full(len(pts), float(weight)))

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    @property
    def is_counting(self) -> bool:
        return bool(np.all(self.weights == 1.0))

    def scaled(self, a: float) -> "WeightedSpace":
        return WeightedSpace(self.points, self.weights * a)

    def product(self, other: "WeightedSpace") -> "WeightedSpace":
        pts = tuple((x, y) for x in self.points for y in other.points)
        return WeightedSpace(pts, np.kron(self.weights, other.weights))

    def __eq__(self, other):
        if not isinstance(other, WeightedSpace):
            return NotImplemented
        return self.points == other.points and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.points, self.weights.tobytes()))


def xlogx(p) -> np.ndarray:
    """Elementwise ``p ln p`` with ``0 ln 0 = 0``."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log(p[pos])
    return out


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive semidefinite, unit-trace matrix in orthonormalised coordinates.

    Eigenvalues in ``(-PSD_TOL, 0)`` are clipped to zero and the trace is
    renormalised; anything more negative, or a trace further than
    ``TRACE_TOL`` from one, is rejected.
    """

    space: WeightedSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        A = nk.hermitian_part(self.matrix)
        if A.shape[0] != self.space.dim:
            raise DimensionMismatchError(
                f"matrix of size {A.shape[0]} on a space of dimension {self.space.dim}"
            )
        tr = float(np.trace(A).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"trace {tr!r} differs from 1")
        dec = nk.herm_eig(A)
        lam = dec.eigenvalues
        if lam[0] < -PSD_TOL:
            raise InvalidStateError(f"negative eigenvalue {lam[0]:.3e}")
        if lam[0] < 0:
            lam = np.clip(lam, 0.0, None)
            lam = lam / lam.sum()
            dec = nk.SpectralDecomposition(lam, dec.eigenvectors)
            A = dec.reconstruct()
            A = 0.5 * (A + A.conj().T)
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "_spectrum", dec)

    @classmethod
    def normalized(cls, space: WeightedSpace, M) -> "DensityMatrix":
        A = np.asarray(M, dtype=complex)
        tr = np.trace(A).real
        if not tr > 0:
            raise InvalidStateError("cannot normalise a matrix with non-positive trace")
        return cls(space, A / tr)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def spectrum(self) -> nk.SpectralDecomposition:
        return self._spectrum

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.clip(self._spectrum.eigenvalues, 0.0, None)

    @cached_property
    def masses(self) -> np.ndarray:
        p = np.clip(np.real(np.diag(self.matrix)), 0.0, None)
        return p

    @property
    def density(self) -> np.ndarray:
        return self.masses / self.space.weights

    def conjugate(self, U: np.ndarray, space: WeightedSpace | None = None) -> "DensityMatrix":
        """The state ``U gamma U^H`` on ``space`` (default: same space)."""
        U = np.asarray(U, dtype=complex)
        M = U @ self.matrix @ U.conj().T
        return DensityMatrix(space or self.space, 0.5 * (M + M.conj().T))

    def mixed_with_identity(self, eps: float) -> "DensityMatrix":
        n = self.dim
        return DensityMatrix(self.space, (1.0 - eps) * self.matrix + eps * np.eye(n) / n)


def density_masses(gamma: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Probability masses ``p`` and densities ``rho = p / mu``, read off the diagonal."""
    p = gamma.masses
    return p.copy(), p / gamma.space.weights


def von_neumann_entropy(gamma: DensityMatrix | np.ndarray) -> float:
    lam = gamma.eigenvalues if isinstance(gamma, DensityMatrix) else np.asarray(gamma)
    return float(-np.sum(xlogx(lam))) + 0.0  # no signed zero for pure states


def maximally_mixed(space: WeightedSpace) -> DensityMatrix:
    n = space.dim
    return DensityMatrix(space, np.eye(n) / n)


def pure_state(vector, space: WeightedSpace | None = None) -> DensityMatrix:
    v = np.asarray(vector, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise InvalidStateError("pure_state needs a nonzero vector")
    v = v / norm
    space = space or WeightedSpace.counting(v.shape[0])
    return DensityMatrix(space, np.outer(v, v.conj()))


def basis_state(k: int, space: WeightedSpace) -> DensityMatrix:
    if not 0 <= k < space.dim:
        raise InvalidStateError(f"basis index {k} out of range for dimension {space.dim}")
    v = np.zeros(space.dim)
    v[k] = 1.0
    return pure_state(v, space)


def random_density(dim: int, rank: int | None = None, seed=None,
                   space: WeightedSpace | None = None) -> DensityMatrix:
    """``G G^H / tr(G G^H)`` with ``G`` a seeded ``dim x rank`` complex Gaussian."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise InvalidStateError(f"rank {rank} outside [1, {dim}]")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    return DensityMatrix.normalized(space or WeightedSpace.counting(dim), G @ G.conj().T)


def random_hermitian(dim: int, seed=None, scale: float = 1.0) -> np.ndarray:
    """Seeded GUE-like Hermitian matrix with entries of order ``scale``."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (X + X.conj().T) / (2.0 * math.sqrt(dim))


def make_gibbs(H, beta: float, space: WeightedSpace | None = None) -> DensityMatrix:
    """Thermal state ``exp(-beta H) / Z`` built from the spectrum of ``H``."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    dec = H if isinstance(H, nk.SpectralDecomposition) else nk.herm_eig(H)
    space = space or WeightedSpace.counting(dec.dim)
    return DensityMatrix(space, dec.apply(lambda e: gibbs_weights(e, beta)))


def gibbs_weights(energies, beta: float) -> np.ndarray:
    """Softmax of ``-beta * energies``, shifted so the largest exponent is zero."""
    x = -beta * np.asarray(energies, dtype=float)
    w = np.exp(x - x.max())
    return w / w.sum()


def tensor_state(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix.normalized(a.space.product(b.space), np.kron(a.matrix, b.matrix))
