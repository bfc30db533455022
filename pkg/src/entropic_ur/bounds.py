"""Classical entropies of the two diagonals and the lower bounds on their sum."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DimensionMismatchError, UnsupportedMeasureError
from .pairs import TransformPair
from .spaces import DensityMatrix, von_neumann_entropy, xlogx

DEFAULT_TOL = 1e-9
MASS_NEG_TOL = 1e-12


def inequality_tol(dim: int, base: float = DEFAULT_TOL) -> float:
    """Absolute slack for inequality checks: ``base`` up to dimension 64, linear above."""
    return base * max(1.0, dim / 64.0)


def shannon_entropy(p, weights=None) -> float:
    """``-sum p ln(p / mu)``, the entropy of the density ``p / mu`` relative to ``mu``.

    With counting measure this is the ordinary Shannon entropy in nats; with
    general weights it can be negative.
    """
    p = np.asarray(p, dtype=float)
    mu = np.ones_like(p) if weights is None else np.asarray(weights, dtype=float)
    if p.shape != mu.shape:
        raise DimensionMismatchError(f"{p.shape[0]} masses but {mu.shape[0]} weights")
    if np.any(mu <= 0):
        raise ValueError("weights must be positive")
    if np.any(p < -MASS_NEG_TOL):
        raise ValueError(f"negative mass {p.min():.3e}")
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"masses sum to {total!r}, not 1")
    p = np.clip(p, 0.0, None)
    pos = p > 0
    return float(-np.sum(xlogx(p)) + np.sum(p[pos] * np.log(mu[pos])))


def transformed_masses(gamma: DensityMatrix, pair: TransformPair) -> np.ndarray:
    """Diagonal of ``W gamma W^H``: the masses of the transformed state on the target."""
    W = pair.W
    q = np.real(np.einsum("li,ij,lj->l", W, gamma.matrix, W.conj()))
    return np.clip(q, 0.0, None)


@dataclass(frozen=True)
class UncertaintyReport:
    H_X: float
    H_Y: float
    S: float
    c: float
    bound_FL: float
    bound_MU: float
    bound_Deutsch: float
    bound_Rumin: float
    deficit: float
    masses_X: list = field(repr=False)
    masses_Y: list = field(repr=False)
    state_spec: str = ""
    pair_spec: str = ""
    seed: int | None = None
    tol: float = DEFAULT_TOL
    counting: bool = field(default=True, repr=False)

    @property
    def deficit_MU(self) -> float:
        return self.H_X + self.H_Y - self.bound_MU

    def violations(self, tol: float | None = None) -> list[str]:
        tol = self.tol if tol is None else tol
        out = []
        if self.deficit < -tol:
            out.append(f"deficit {self.deficit:.3e} below -{tol:g}")
        if not self.bound_Deutsch <= self.bound_MU + tol:
            out.append("bound_Deutsch exceeds bound_MU")
        if not self.bound_MU <= self.bound_FL + tol:
            out.append("bound_MU exceeds bound_FL")
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("counting")
        d["deficit_MU"] = self.deficit_MU
        d["deutsch_source"] = "external: -2 ln((1+c)/2), not derived here"
        return d


def uncertainty_report(gamma: DensityMatrix, pair: TransformPair, *, state_spec: str = "",
                       pair_spec: str = "", seed=None, tol: float | None = None) -> UncertaintyReport:
    if gamma.space != pair.source:
        if gamma.dim != pair.dim:
            raise DimensionMismatchError(
                f"state has dimension {gamma.dim}, pair source has {pair.dim}"
            )
        raise DimensionMismatchError("state lives on a different weighted space than the pair source")
    p = gamma.masses
    q = transformed_masses(gamma, pair)
    # renormalise away accumulated rounding before the entropy sum check
    p = p / p.sum()
    q = q / q.sum()
    H_X = shannon_entropy(p, pair.source.weights)
    H_Y = shannon_entropy(q, pair.target.weights)
    S = von_neumann_entropy(gamma)
    c = pair.c
    log_c = math.log(c)
    lam_max = float(gamma.eigenvalues.max())
    return UncertaintyReport(
        H_X=H_X,
        H_Y=H_Y,
        S=S,
        c=c,
        bound_FL=S - 2.0 * log_c,
        bound_MU=-2.0 * log_c,
        bound_Deutsch=-2.0 * math.log((1.0 + c) / 2.0),
        bound_Rumin=-math.log(lam_max) - 2.0 * log_c,
        deficit=H_X + H_Y - S + 2.0 * log_c,
        masses_X=p.tolist(),
        masses_Y=q.tolist(),
        state_spec=state_spec,
        pair_spec=pair_spec or pair.label,
        seed=seed,
        tol=inequality_tol(gamma.dim) if tol is None else tol,
        counting=pair.source.is_counting and pair.target.is_counting,
    )


@dataclass(frozen=True)
class DominationResult:
    ok_X: bool
    ok_Y: bool
    margin_X: float
    margin_Y: float


def entropy_dominates_vn(report: UncertaintyReport, tol: float = DEFAULT_TOL) -> DominationResult:
    """Check that each classical entropy is at least the von Neumann entropy.

    Only meaningful for counting measures; weighted spaces are refused.
    """
    if not report.counting:
        raise UnsupportedMeasureError(
            "entropy domination is only established for counting measures"
        )
    mx = report.H_X - report.S
    my = report.H_Y - report.S
    return DominationResult(mx >= -tol, my >= -tol, mx, my)


def majorization_gap(p, lam) -> float:
    """Largest ``sum_{top k} p - sum_{top k} lam`` over ``k < n``.

    Nonpositive iff ``p`` is majorised by ``lam`` (both sum to one). The
    ``k = n`` term only restates normalisation and is left out.
    """
    p = np.sort(np.asarray(p, dtype=float))[::-1]
    lam = np.sort(np.asarray(lam, dtype=float))[::-1]
    if p.shape != lam.shape:
        raise DimensionMismatchError("vectors differ in length")
    if p.shape[0] < 2:
        return 0.0
    diff = np.cumsum(p)[:-1] - np.cumsum(lam)[:-1]
    return float(diff.max())


def majorization_check(p, lam, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    for name, v in (("p", p), ("lam", lam)):
        s = float(np.sum(v))
        if abs(s - 1.0) > tol:
            raise ValueError(f"{name} sums to {s!r}, not 1")
    gap = majorization_gap(p, lam)
    return gap <= tol, gap
