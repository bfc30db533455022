"""Step-by-step numerical replay of the lower-bound argument.

For a state ``gamma`` and a pair with matrix ``W`` the chain is

    H_X + H_Y - S  >=  -ln tr e^{-H}                        (Gibbs variational principle)
                   >=  -ln tr rho_X^{1/2} W^H rho_Y W rho_X^{1/2}   (Golden-Thompson)
                   >=  -2 ln c                                (kernel bound)

with ``H = -ln rho_X - W^H ln rho_Y W`` and ``rho_X``, ``rho_Y`` the densities
of the two diagonals acting as multiplication operators.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import numkernel as nk
from .bounds import transformed_masses, uncertainty_report
from .errors import DimensionMismatchError, NumericalError
from .pairs import TransformPair
from .spaces import DensityMatrix, make_gibbs, von_neumann_entropy

AUTO_EPS = 1e-12
CHAIN_TOL = 1e-8


def gibbs_gap(gamma: DensityMatrix, H) -> float:
    """``tr(gamma H) + tr(gamma ln gamma) + ln tr e^{-H}``; nonnegative, zero only at the Gibbs state."""
    H = nk.hermitian_part(H)
    energy = float(np.real(np.einsum("ij,ji->", gamma.matrix, H)))
    return energy - von_neumann_entropy(gamma) + nk.log_trace_exp(-H)


def golden_thompson_terms(A, B) -> tuple[float, float]:
    """``(tr e^{A+B}, tr e^{A/2} e^B e^{A/2})``."""
    A = nk.hermitian_part(A)
    B = nk.hermitian_part(B)
    if A.shape != B.shape:
        raise DimensionMismatchError("A and B differ in dimension")
    lhs = float(np.sum(np.exp(nk.herm_eig(A + B).eigenvalues)))
    half = nk.expm_h(A / 2)
    rhs = float(np.real(np.trace(half @ nk.expm_h(B) @ half)))
    return lhs, rhs


def golden_thompson_gap(A, B) -> float:
    lhs, rhs = golden_thompson_terms(A, B)
    return rhs - lhs


def _log_densities(gamma: DensityMatrix, pair: TransformPair):
    p = gamma.masses
    q = transformed_masses(gamma, pair)
    if p.min() <= 0 or q.min() <= 0:
        raise NumericalError("a density vanishes; smoothing did not make all masses positive")
    return np.log(p / pair.source.weights), np.log(q / pair.target.weights)


def proof_operator(gamma: DensityMatrix, pair: TransformPair) -> np.ndarray:
    """``H = -ln rho_X - W^H ln rho_Y W`` in orthonormalised source coordinates."""
    log_x, log_y = _log_densities(gamma, pair)
    W = pair.W
    H = -np.diag(log_x) - (W.conj().T * log_y) @ W
    return 0.5 * (H + H.conj().T)


def smooth(gamma: DensityMatrix, pair: TransformPair, eps: float) -> tuple[DensityMatrix, float]:
    """Mix with the maximally mixed state; pick ``AUTO_EPS`` when ``eps == 0`` and a mass vanishes."""
    if eps < 0 or eps >= 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps!r}")
    if eps == 0:
        if gamma.masses.min() > 0 and transformed_masses(gamma, pair).min() > 0:
            return gamma, 0.0
        eps = AUTO_EPS
    return gamma.mixed_with_identity(eps), eps


@dataclass(frozen=True)
class ProofTrace:
    epsilon: float
    lhs: float
    lhs_trace_form: float
    step1: float
    step2: float
    step3: float
    residuals: tuple
    hs_value: float
    hs_trace: float
    c: float
    gt_gap: float
    gibbs_gap: float

    def ok(self, tol: float = CHAIN_TOL) -> bool:
        return (
            all(r >= -tol for r in self.residuals)
            and self.hs_value <= self.c ** 2 * (1 + tol)
            and abs(self.lhs - self.lhs_trace_form) <= tol
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["residuals"] = {
            "lhs-step1": self.residuals[0],
            "step1-step2": self.residuals[1],
            "step2-step3": self.residuals[2],
        }
        return d


def proof_trace(gamma: DensityMatrix, pair: TransformPair, eps: float = 0.0) -> ProofTrace:
    if gamma.dim != pair.dim:
        raise DimensionMismatchError(f"state dimension {gamma.dim} vs pair {pair.dim}")
    g, eps = smooth(gamma, pair, eps)
    log_x, log_y = _log_densities(g, pair)
    W = pair.W
    A = np.diag(log_x).astype(complex)
    B = (W.conj().T * log_y) @ W
    B = 0.5 * (B + B.conj().T)
    H = -(A + B)

    rep = uncertainty_report(g, pair)
    S = rep.S
    lhs = rep.H_X + rep.H_Y - S
    lhs_trace = float(np.real(np.einsum("ij,ji->", g.matrix, H))) - S

    step1 = -nk.log_trace_exp(-H)

    rho_x = np.exp(log_x)
    rho_y = np.exp(log_y)
    sx = np.sqrt(rho_x)
    composed = (sx[:, None] * (W.conj().T * rho_y)) @ W * sx[None, :]
    hs_trace = float(np.real(np.trace(composed)))
    K = pair.kernel
    mu = pair.source.weights
    nu = pair.target.weights
    hs_value = float(np.sum((rho_y * nu)[:, None] * np.abs(K) ** 2 * (rho_x * mu)[None, :]))

    step2 = -math.log(hs_trace)
    step3 = -2.0 * math.log(pair.c)
    return ProofTrace(
        epsilon=eps,
        lhs=lhs,
        lhs_trace_form=lhs_trace,
        step1=step1,
        step2=step2,
        step3=step3,
        residuals=(lhs - step1, step1 - step2, step2 - step3),
        hs_value=hs_value,
        hs_trace=hs_trace,
        c=pair.c,
        gt_gap=math.exp(-step2) - math.exp(-step1),
        gibbs_gap=lhs_trace - step1,
    )


@dataclass
class MinimizeResult:
    log: list = field(default_factory=list)
    best_state: DensityMatrix | None = None
    best_deficit: float = math.inf
    best_iter: int = -1
    converged: bool = False

    LOG_FIELDS = ("iter", "deficit", "best_deficit", "gibbs_gap", "gt_gap")


def selfconsistent_minimize(pair: TransformPair, gamma0: DensityMatrix, max_iters: int = 50,
                            eps: float = AUTO_EPS, tol: float = 1e-12,
                            damping: float = 0.0) -> MinimizeResult:
    """Fixed-point search for low-deficit states.

    Repeats ``gamma <- exp(-H(gamma)) / tr exp(-H(gamma))`` with ``H`` the proof
    operator of the smoothed iterate, optionally mixing in the previous iterate
    with weight ``damping``.  Nothing guarantees convergence; the iterate with
    the smallest deficit is returned.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    if not 0 <= damping < 1:
        raise ValueError("damping must lie in [0, 1)")
    res = MinimizeResult()
    g = gamma0
    for t in range(max_iters + 1):
        deficit = uncertainty_report(g, pair).deficit
        tr = proof_trace(g, pair, eps)
        if deficit < res.best_deficit:
            res.best_deficit, res.best_state, res.best_iter = deficit, g, t
        res.log.append({
            "iter": t,
            "deficit": deficit,
            "best_deficit": res.best_deficit,
            "gibbs_gap": tr.gibbs_gap,
            "gt_gap": tr.gt_gap,
        })
        if t == max_iters:
            break
        gs, _ = smooth(g, pair, eps)
        H = proof_operator(gs, pair)
        nxt = make_gibbs(H, 1.0, pair.source)
        if damping:
            nxt = DensityMatrix(pair.source, (1 - damping) * nxt.matrix + damping * g.matrix)
        if not np.all(np.isfinite(nxt.matrix)):
            raise NumericalError(f"non-finite iterate at step {t + 1}")
        step = float(np.linalg.norm(nxt.matrix - g.matrix))
        g = nxt
        if step <= tol:
            res.converged = True
            # the fixed point equals the current iterate up to tol; no new entry needed
            break
    return res
