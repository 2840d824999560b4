"""Wigner functions from displaced parity, plus the analytic cat-state form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .fock import CatSpec, DensityMatrix, FockVector, Parity, TruncationError

# e^{-|beta|^2/2} underflows near |beta|^2/2 = 745
_MAX_HALF_BETA2 = 600.0


@dataclass(frozen=True)
class PhasePoint:
    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise ValueError(f"non-finite phase point ({self.x}, {self.p})")

    @property
    def gamma(self) -> complex:
        return complex(self.x, self.p) / math.sqrt(2.0)


def _as_density(state: Union[FockVector, DensityMatrix]) -> np.ndarray:
    if isinstance(state, FockVector):
        amps = state.amplitudes
        return np.outer(amps, amps.conj())
    if isinstance(state, DensityMatrix):
        return np.asarray(state.matrix)
    raise TypeError(f"expected FockVector or DensityMatrix, got {type(state).__name__}")


def wigner_values(state, x, p) -> np.ndarray:
    """Vectorized ``W(x, p) = tr[rho D(g) P D(-g)] / pi`` with ``g = (x + ip)/sqrt2``.

    Uses ``D(g) P D(-g) = D(2g) P`` and the exact number-basis elements
    ``<n|D(b)|m>`` generated column by column:
    ``<n|D|m> = (sqrt(n) <n-1|D|m-1> - b* <n|D|m-1>) / sqrt(m)``,
    contracted as ``sum_{m,n} rho[m, n] <n|D|m> (-1)^m``.
    Only the DxD support of rho is needed, so no cutoff padding is involved.
    """
    rho = _as_density(state)
    dim = rho.shape[0]
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    shape = np.broadcast(x, p).shape
    beta = (np.broadcast_to(x, shape) + 1j * np.broadcast_to(p, shape)).ravel() * math.sqrt(2.0)
    if beta.size and np.max(np.abs(beta)) ** 2 / 2 > _MAX_HALF_BETA2:
        raise TruncationError("phase point too far from the origin for displaced-parity evaluation")

    n = np.arange(dim)
    sqrt_n = np.sqrt(n)
    # column m = 0: coherent amplitudes of beta, built by the same recursion in n
    col = np.empty((dim, beta.size), dtype=complex)
    col[0] = np.exp(-0.5 * np.abs(beta) ** 2)
    for k in range(1, dim):
        col[k] = col[k - 1] * beta / sqrt_n[k]
    bconj = beta.conj()
    total = rho[0, :] @ col
    for m in range(1, dim):
        nxt = -bconj * col
        nxt[1:] += sqrt_n[1:, None] * col[:-1]
        col = nxt / sqrt_n[m]
        total = total + (-1.0) ** m * (rho[m, :] @ col)
    return (total.real / math.pi).reshape(shape)


def wigner_point(state, pt: PhasePoint) -> float:
    return float(wigner_values(state, pt.x, pt.p))


def wigner_cat_closed_form(spec: CatSpec, x, p):
    """Analytic Wigner function of the normalized cat ``|a'> -/+ |-a'>`` (real a').

    Two Gaussians at ``x = +/- sqrt2 a'`` plus a central fringe term
    ``+/- 2 e^{-x^2-p^2} cos(2 sqrt2 a' p)``, all divided by ``pi N^2`` with
    ``N^2 = 2 (1 +/- e^{-2 a'^2})``.
    """
    a = spec.alpha_prime
    x0 = math.sqrt(2.0) * a
    s = float(spec.parity.value)
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    gauss = np.exp(-((x - x0) ** 2) - p**2) + np.exp(-((x + x0) ** 2) - p**2)
    fringe = 2.0 * np.exp(-(x**2) - p**2) * np.cos(2.0 * x0 * p)
    norm2 = 2.0 * (1.0 + s * math.exp(-2.0 * a * a))
    out = (gauss + s * fringe) / (math.pi * norm2)
    return float(out) if out.ndim == 0 else out


def cat_wigner_on_p_axis(alpha_prime: float, parity: Parity, p):
    """``pi W(0, p)`` of the cat, i.e. the mean parity after shifting the origin to (0, p).

    Written so the exponentially small pieces never cancel catastrophically:
    ``e^{-p^2} (e^{-2a'^2} +/- cos(2 sqrt2 a' p)) / (1 +/- e^{-2a'^2})``.
    """
    s = float(Parity.parse(parity).value)
    e = math.exp(-2.0 * alpha_prime**2)
    p = np.asarray(p, dtype=float)
    k = 2.0 * math.sqrt(2.0) * alpha_prime
    if s < 0:
        denom = -math.expm1(-2.0 * alpha_prime**2)
    else:
        denom = 1.0 + e
    out = np.exp(-(p**2)) * (e + s * np.cos(k * p)) / denom
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Samples ``values[j, i] = W(x[i], p[j])``; CSV rows run over p."""

    x_range: Tuple[float, float]
    p_range: Tuple[float, float]
    nx: int
    np: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.np, self.nx):
            raise ValueError(f"values shape {vals.shape} != ({self.np}, {self.nx})")
        if not np.all(np.isfinite(vals)):
            raise ValueError("non-finite Wigner values")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "x_range", (float(self.x_range[0]), float(self.x_range[1])))
        object.__setattr__(self, "p_range", (float(self.p_range[0]), float(self.p_range[1])))

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(self.p_range[0], self.p_range[1], self.np)

    def integral(self) -> float:
        """Trapezoid-rule integral over the grid."""
        return float(np.trapezoid(np.trapezoid(self.values, self.x, axis=1), self.p))

    def to_csv(self) -> str:
        lines = [
            f"# x: {self.x_range[0]:.17g} {self.x_range[1]:.17g} {self.nx}",
            f"# p: {self.p_range[0]:.17g} {self.p_range[1]:.17g} {self.np}",
        ]
        lines += [",".join(f"{v:.17g}" for v in row) for row in self.values]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "WignerGrid":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        axes = {}
        for ln in lines[:2]:
            name, rest = ln.lstrip("#").split(":", 1)
            lo, hi, count = rest.split()
            axes[name.strip()] = (float(lo), float(hi), int(count))
        rows = [[float(v) for v in ln.split(",")] for ln in lines[2:]]
        xlo, xhi, nx = axes["x"]
        plo, phi, np_ = axes["p"]
        return cls((xlo, xhi), (plo, phi), nx, np_, np.array(rows))


def wigner_grid(state, x_range, p_range, nx: int, np_: int) -> WignerGrid:
    if nx < 1 or np_ < 1:
        raise ValueError("grid sizes must be positive")
    xs = np.linspace(x_range[0], x_range[1], nx)
    ps = np.linspace(p_range[0], p_range[1], np_)
    X, P = np.meshgrid(xs, ps)
    return WignerGrid(tuple(x_range), tuple(p_range), nx, np_, wigner_values(state, X, P))


def cat_wigner_grid(spec: CatSpec, x_range, p_range, nx: int, np_: int) -> WignerGrid:
    xs = np.linspace(x_range[0], x_range[1], nx)
    ps = np.linspace(p_range[0], p_range[1], np_)
    X, P = np.meshgrid(xs, ps)
    return WignerGrid(tuple(x_range), tuple(p_range), nx, np_, wigner_cat_closed_form(spec, X, P))
