"""Entropy-regularized coupling solver on discrete supports.

Solves the dual fixed-point system

    phi(y0) = eps * log E_{Y1~nu} exp((y0*Y1 - psi(Y1)) / eps)
    psi(y1) = eps * log E_{Y0~mu} exp((y1*Y0 - phi(Y0)) / eps)

by alternating log-domain half sweeps (full phi update, then full psi update),
with the additive gauge fixed by centering phi under mu after every sweep.
Convergence requires both a small marginal residual of the induced coupling
and a small geometric extrapolation of the iterate gap, so that the returned
potentials are within ``tol`` of the fixed point rather than merely moving
slowly.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .empirical import EmpiricalMeasure
from .errors import ConvergenceError, DomainError, NumericalError

_ANNEAL_FACTOR = 2.0
_ANNEAL_START = 0.25
_STAGE_SWEEPS = 40
_STAGE_DELTA = 1e-3


def epsilon_of_rho(rho: float) -> float:
    """Regularization strength (1 - rho) / rho for stickiness rho in (0, 1]."""
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"stickiness must lie in (0, 1], got {rho!r}")
    return (1.0 - rho) / rho


@dataclass(frozen=True)
class Stickiness:
    """Stickiness level rho together with its regularization strength."""

    rho: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.rho <= 1.0:
            raise DomainError(f"stickiness must lie in (0, 1], got {self.rho!r}")
        if not self.epsilon >= 0.0:
            raise DomainError("epsilon must be nonnegative")

    @classmethod
    def from_rho(cls, rho: float) -> "Stickiness":
        return cls(rho=float(rho), epsilon=epsilon_of_rho(rho))

    @classmethod
    def with_epsilon(cls, rho: float, epsilon: float) -> "Stickiness":
        """Decoupled epsilon override (reference-copula and limit experiments)."""
        return cls(rho=float(rho), epsilon=float(epsilon))


@dataclass
class SinkhornPotentials:
    """Solved dual potentials on the two atom supports.

    ``phi`` is gauge-centered (weighted mean zero under mu);
    ``marginal_residual`` is the final sup-norm marginal defect of the induced
    coupling; ``iterations`` counts full sweeps including annealing stages.
    """

    phi: np.ndarray
    psi: np.ndarray
    stickiness: Stickiness
    gauge_residual: float
    marginal_residual: float
    iterations: int


@dataclass
class Coupling:
    """Joint weight matrix over (mu-atom, nu-atom) pairs."""

    matrix: np.ndarray
    mu: EmpiricalMeasure
    nu: EmpiricalMeasure

    @property
    def mass(self) -> float:
        return float(self.matrix.sum())

    def row_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    def col_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    def marginal_residual(self) -> float:
        r = np.max(np.abs(self.row_sums() - self.mu.weights))
        c = np.max(np.abs(self.col_sums() - self.nu.weights))
        return float(max(r, c))


def _anneal_schedule(eps: float, anneal: bool) -> list[float]:
    stages = [eps]
    if anneal:
        while stages[-1] < _ANNEAL_START:
            stages.append(stages[-1] * _ANNEAL_FACTOR)
        stages.reverse()
    return stages


def solve_potentials(
    mu: EmpiricalMeasure,
    nu: EmpiricalMeasure,
    stickiness: Stickiness,
    *,
    tol: float = 1e-9,
    max_iter: int = 10_000,
    anneal: bool = True,
    psi_init=None,
) -> SinkhornPotentials:
    """Solve the dual system to sup-norm marginal residual <= tol.

    ``anneal=True`` warm-starts through a decreasing epsilon ladder, which
    speeds up small-epsilon fits without changing the fixed point; disable it
    to study initialization sensitivity (``psi_init`` seeds the first sweep).
    """
    if stickiness.epsilon <= 0.0:
        raise DomainError(
            "epsilon must be positive: the rho = 1 case is the quantile-matched "
            "(comonotone) coupling, handled outside this solver"
        )
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    y0, w0 = mu.atoms, mu.weights
    y1, w1 = nu.atoms, nu.weights
    logw0 = np.log(w0)
    logw1 = np.log(w1)
    eps = stickiness.epsilon

    if psi_init is None:
        psi = np.zeros_like(y1)
    else:
        psi = np.array(psi_init, dtype=float)
        if psi.shape != y1.shape:
            raise DomainError("psi_init must match the nu support size")

    stages = _anneal_schedule(eps, anneal)
    total = 0
    resid = math.inf
    phi = np.zeros_like(y0)
    converged = False
    for si, e in enumerate(stages):
        last = si == len(stages) - 1
        phi = kernels.lse_update(y0, y1, logw1, psi, e)
        psi = kernels.lse_update(y1, y0, logw0, phi, e)
        shift = float(w0 @ phi)
        phi = phi - shift
        psi = psi + shift
        total += 1
        prev_delta = math.inf
        scale = max(1.0, float(np.max(np.abs(phi))))
        while total < max_iter:
            phi_next = kernels.lse_update(y0, y1, logw1, psi, e)
            if last:
                resid = float(np.max(w0 * np.abs(np.expm1((phi_next - phi) / e))))
            psi_next = kernels.lse_update(y1, y0, logw0, phi_next, e)
            shift = float(w0 @ phi_next)
            phi_next = phi_next - shift
            psi_next = psi_next + shift
            delta = float(np.max(np.abs(phi_next - phi)))
            phi, psi = phi_next, psi_next
            total += 1
            if last:
                if delta == 0.0 or delta < 5e-15 * scale:
                    extrapolated = delta
                elif math.isfinite(prev_delta) and delta < prev_delta:
                    lam = delta / prev_delta
                    extrapolated = delta * lam / (1.0 - lam)
                else:
                    extrapolated = math.inf
                if resid <= tol and extrapolated <= tol:
                    converged = True
                    break
            elif delta <= _STAGE_DELTA:
                break
            prev_delta = delta
        if last and not converged:
            raise ConvergenceError(
                f"no convergence after {total} sweeps (marginal residual {resid:.3e})",
                residual=resid,
                iterations=total,
            )
    return SinkhornPotentials(
        phi=phi,
        psi=psi,
        stickiness=stickiness,
        gauge_residual=float(w0 @ phi),
        marginal_residual=resid,
        iterations=total,
    )


def coupling_from_potentials(
    potentials: SinkhornPotentials, mu: EmpiricalMeasure, nu: EmpiricalMeasure
) -> Coupling:
    """Materialize the coupling exp((y0*y1 - phi - psi)/eps) d(mu x nu)."""
    eps = potentials.stickiness.epsilon
    log_m = (
        np.log(mu.weights)[:, None]
        + np.log(nu.weights)[None, :]
        + (np.outer(mu.atoms, nu.atoms) - potentials.phi[:, None] - potentials.psi[None, :]) / eps
    )
    if not np.all(np.isfinite(log_m)):
        raise NumericalError("non-finite coupling exponent")
    matrix = np.exp(log_m)
    if not np.all(np.isfinite(matrix)):
        raise NumericalError("non-finite coupling weight")
    return Coupling(matrix=matrix, mu=mu, nu=nu)


def independence_coupling(mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> Coupling:
    return Coupling(matrix=np.outer(mu.weights, nu.weights), mu=mu, nu=nu)


def comonotone_coupling(mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> Coupling:
    """Quantile-matched coupling via the northwest-corner mass sweep."""
    matrix = np.zeros((len(mu), len(nu)))
    i = j = 0
    ri = float(mu.weights[0])
    cj = float(nu.weights[0])
    while True:
        m = min(ri, cj)
        matrix[i, j] += m
        ri -= m
        cj -= m
        if ri <= 1e-15:
            i += 1
            if i == len(mu):
                break
            ri = float(mu.weights[i])
        if cj <= 1e-15:
            j += 1
            if j == len(nu):
                break
            cj = float(nu.weights[j])
    return Coupling(matrix=matrix, mu=mu, nu=nu)


def antitone_coupling(mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> Coupling:
    """Rank-reversed counterpart of the comonotone coupling."""
    flipped = comonotone_coupling(mu, EmpiricalMeasure(-nu.atoms, nu.weights[::-1]))
    return Coupling(matrix=flipped.matrix[:, ::-1].copy(), mu=mu, nu=nu)


def rank_correlation(coupling: Coupling) -> float:
    """Covariance of (Y0, Y1) under the coupling.

    Equals half the expected product of coordinate gaps across two independent
    draws, the average rank-preservation functional being maximized.
    """
    joint = float(np.einsum("ij,i,j->", coupling.matrix, coupling.mu.atoms, coupling.nu.atoms))
    return joint - coupling.mu.mean() * coupling.nu.mean()


def kl_to_independence(coupling: Coupling) -> float:
    """KL divergence of the coupling from the product of its marginals."""
    prod = np.outer(coupling.mu.weights, coupling.nu.weights)
    m = coupling.matrix
    pos = m > 0.0
    if np.any(pos & (prod <= 0.0)):
        raise DomainError("coupling places mass outside the product support")
    vals = np.zeros_like(m)
    vals[pos] = m[pos] * np.log(m[pos] / prod[pos])
    return float(vals.sum())


def potentials_to_dict(
    potentials: SinkhornPotentials, mu: EmpiricalMeasure, nu: EmpiricalMeasure
) -> dict:
    return {
        "rho": potentials.stickiness.rho,
        "epsilon": potentials.stickiness.epsilon,
        "mu_atoms": [float(v) for v in mu.atoms],
        "nu_atoms": [float(v) for v in nu.atoms],
        "phi": [float(v) for v in potentials.phi],
        "psi": [float(v) for v in potentials.psi],
        "residual": potentials.marginal_residual,
        "iterations": potentials.iterations,
    }


def potentials_to_json(
    potentials: SinkhornPotentials, mu: EmpiricalMeasure, nu: EmpiricalMeasure
) -> str:
    return json.dumps(potentials_to_dict(potentials, mu, nu), sort_keys=True)


def potentials_from_dict(payload: dict) -> tuple[SinkhornPotentials, EmpiricalMeasure, EmpiricalMeasure]:
    mu_atoms = np.asarray(payload["mu_atoms"], dtype=float)
    nu_atoms = np.asarray(payload["nu_atoms"], dtype=float)
    mu = EmpiricalMeasure(mu_atoms, np.full(mu_atoms.size, 1.0 / mu_atoms.size))
    nu = EmpiricalMeasure(nu_atoms, np.full(nu_atoms.size, 1.0 / nu_atoms.size))
    pots = SinkhornPotentials(
        phi=np.asarray(payload["phi"], dtype=float),
        psi=np.asarray(payload["psi"], dtype=float),
        stickiness=Stickiness.with_epsilon(payload["rho"], payload["epsilon"]),
        gauge_residual=0.0,
        marginal_residual=float(payload["residual"]),
        iterations=int(payload["iterations"]),
    )
    return pots, mu, nu
