"""Bob's side: how well the token alone reveals the committed bit."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import sqrtm

from .fock import TOKEN, DensityMatrix, Operator, entangled_cat, partial_trace, truncation_dim

DEGENERATE_ALPHA = 0.1
CSV_COLUMNS = ("alpha", "alpha_prime", "g_max_analytic", "g_max_numeric", "lambda_plus", "trace_norm")


def dim_for_alpha(alpha: float) -> int:
    return truncation_dim(4.0 * abs(alpha) ** 2)


def reduced_states(alpha: complex, dim: Optional[int] = None) -> Tuple[DensityMatrix, DensityMatrix]:
    """Token-mode states ``rho_0, rho_1`` of the two entangled commitments."""
    if dim is None:
        dim = dim_for_alpha(abs(alpha))
    return tuple(partial_trace(entangled_cat(b, alpha, dim), keep=TOKEN) for b in (0, 1))


def _difference_spectrum(rho0: DensityMatrix, rho1: DensityMatrix):
    if rho0.dim != rho1.dim:
        raise ValueError(f"dimension mismatch: {rho0.dim} vs {rho1.dim}")
    h = rho0.matrix - rho1.matrix
    h = 0.5 * (h + h.conj().T)
    return np.linalg.eigh(h)


def trace_distance(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """``Tr|rho0 - rho1| / 2`` from the full Hermitian spectrum."""
    vals, _ = _difference_spectrum(rho0, rho1)
    return 0.5 * float(np.sum(np.abs(vals)))


def g_max_analytic(alpha: float) -> float:
    """``e^{-2a^2} / (2 (1 + e^{-4a^2}))``, half the trace distance."""
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    a2 = alpha * alpha
    return math.exp(-2.0 * a2) / (2.0 * (1.0 + math.exp(-4.0 * a2)))


def h_eigen_analytic(alpha: float) -> Tuple[float, float]:
    """Nonzero eigenvalues ``+/- e^{2a^2} / (1 + e^{4a^2})`` of ``rho0 - rho1``."""
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    a2 = alpha * alpha
    lam = math.exp(-2.0 * a2) / (1.0 + math.exp(-4.0 * a2))  # same value, overflow-safe
    return lam, -lam


def n_copy_gain(g_max: float, n: int) -> float:
    """``(1 - (1 - 2g)^n) / 2``: Bob succeeds unless every copy is inconclusive."""
    if not 0.0 <= g_max <= 0.5:
        raise ValueError(f"g_max must lie in [0, 1/2], got {g_max}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return -0.5 * math.expm1(n * math.log1p(-2.0 * g_max)) if g_max < 0.5 else 0.5


def helstrom_projectors(rho0: DensityMatrix, rho1: DensityMatrix) -> Tuple[Operator, Operator]:
    """Projectors for guessing 0 (non-negative part of rho0 - rho1) and 1 (negative part)."""
    vals, vecs = _difference_spectrum(rho0, rho1)
    pos = vecs[:, vals >= 0]
    neg = vecs[:, vals < 0]
    return Operator(pos @ pos.conj().T), Operator(neg @ neg.conj().T)


def helstrom_success(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """Success probability of the Helstrom measurement for equiprobable states."""
    p0, p1 = helstrom_projectors(rho0, rho1)
    return 0.5 * float(np.trace(p0.matrix @ rho0.matrix).real + np.trace(p1.matrix @ rho1.matrix).real)


def state_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2``."""
    root = sqrtm(rho.matrix)
    inner = sqrtm(root @ sigma.matrix @ root)
    return float(np.trace(inner).real ** 2)


@dataclass(frozen=True)
class DistinguishReport:
    alpha: float
    g_max_analytic: float
    g_max_numeric: Optional[float]
    lambda_plus: Optional[float]
    lambda_minus: Optional[float]
    trace_norm: Optional[float]
    degenerate: bool = False

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def csv_row(self):
        def fmt(v):
            return "" if v is None else f"{v:.17g}"

        return [
            fmt(self.alpha),
            fmt(math.sqrt(2.0) * self.alpha),
            fmt(self.g_max_analytic),
            fmt(self.g_max_numeric),
            fmt(self.lambda_plus),
            fmt(self.trace_norm),
        ]


def distinguish(alpha: float, dim: Optional[int] = None) -> DistinguishReport:
    """Analytic and numeric information gain at coherent amplitude ``alpha``.

    Below ``alpha = 0.1`` the odd commitment state is close to the zero
    vector; the report is flagged degenerate and the numeric side is
    skipped at ``alpha = 0``.
    """
    alpha = float(alpha)
    degenerate = alpha < DEGENERATE_ALPHA
    analytic = g_max_analytic(alpha)
    if alpha == 0.0:
        return DistinguishReport(alpha, analytic, None, None, None, None, True)
    rho0, rho1 = reduced_states(alpha, dim)
    vals, _ = _difference_spectrum(rho0, rho1)
    trace_norm = float(np.sum(np.abs(vals)))
    return DistinguishReport(
        alpha=alpha,
        g_max_analytic=analytic,
        g_max_numeric=0.25 * trace_norm,
        lambda_plus=float(vals[-1]),
        lambda_minus=float(vals[0]),
        trace_norm=trace_norm,
        degenerate=degenerate,
    )
