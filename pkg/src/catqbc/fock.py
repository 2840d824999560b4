"""Truncated Fock-space linear algebra for one and two bosonic modes.

Conventions: ``a = (x + i p)/sqrt(2)`` with hbar = 1.  Two-mode amplitude
arrays are indexed ``A[n0, n1]`` where mode 0 is Alice's proof mode and
mode 1 the token mode.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln
from scipy.stats import poisson

log = logging.getLogger(__name__)

MIN_DIM = 64
TAIL_TOL = 1e-12
UNITARY_TOL = 1e-8
NORM_TOL = 1e-10

PROOF = 0
TOKEN = 1


class TruncationError(ValueError):
    """The photon-number cutoff is too small for the requested state or operator."""


class DimensionMismatchError(ValueError):
    pass


def truncation_dim(mean_photons: float) -> int:
    """Cutoff ``max(64, ceil(mu + 10 sqrt(mu) + 20))`` for mean photon number ``mu``."""
    mu = max(float(mean_photons), 0.0)
    return max(MIN_DIM, math.ceil(mu + 10.0 * math.sqrt(mu) + 20.0))


def dim_for_cat(alpha_prime: float) -> int:
    # 2 alpha'^2 covers the |2 alpha> intermediate inside the non-Gaussian cheat
    return truncation_dim(2.0 * float(alpha_prime) ** 2)


class Parity(enum.Enum):
    ODD = -1
    EVEN = 1

    @property
    def bit(self) -> int:
        return 0 if self is Parity.ODD else 1

    @classmethod
    def from_bit(cls, bit: int) -> "Parity":
        if bit not in (0, 1):
            raise ValueError(f"bit must be 0 or 1, got {bit!r}")
        return cls.ODD if bit == 0 else cls.EVEN

    @classmethod
    def parse(cls, label: Union[str, "Parity"]) -> "Parity":
        if isinstance(label, Parity):
            return label
        try:
            return cls[str(label).strip().upper()]
        except KeyError:
            raise ValueError(f"parity must be 'odd' or 'even', got {label!r}") from None

    def flipped(self) -> "Parity":
        return Parity.EVEN if self is Parity.ODD else Parity.ODD

    @property
    def label(self) -> str:
        return self.name.lower()


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class FockVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("FockVector needs a 1-d amplitude array with dim >= 2")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "FockVector":
        return FockVector(self.amplitudes / self.norm())

    def padded(self, dim: int) -> "FockVector":
        if dim < self.dim:
            raise DimensionMismatchError(f"cannot pad dim {self.dim} down to {dim}")
        out = np.zeros(dim, dtype=complex)
        out[: self.dim] = self.amplitudes
        return FockVector(out)

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class TwoModeVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1] or amps.shape[0] < 2:
            raise ValueError("TwoModeVector needs a square DxD amplitude array with D >= 2")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "TwoModeVector":
        return TwoModeVector(self.amplitudes / self.norm())

    def joint_distribution(self) -> np.ndarray:
        """``p[n0, n1]``, the joint photon-number probabilities."""
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError("DensityMatrix needs a square DxD array with D >= 2")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def validate(self, herm_tol: float = 1e-12, tol: float = NORM_TOL) -> None:
        """Raise ``ValueError`` unless Hermitian, unit trace and positive semidefinite."""
        dev = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if dev > herm_tol:
            raise ValueError(f"not Hermitian (max deviation {dev:.3g})")
        if abs(self.trace() - 1.0) > tol:
            raise ValueError(f"trace {self.trace()!r} != 1")
        lo = self.eigenvalues().min()
        if lo < -tol:
            raise ValueError(f"negative eigenvalue {lo:.3g}")


@dataclass(frozen=True, eq=False)
class Operator:
    matrix: np.ndarray
    unitary: bool = False

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("Operator needs a square matrix")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def unitarity_deviation(self) -> float:
        eye = np.eye(self.dim)
        return float(np.max(np.abs(self.matrix.conj().T @ self.matrix - eye)))

    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.unitary)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _check_dims(self.dim, other.dim)
            return Operator(self.matrix @ other.matrix, self.unitary and other.unitary)
        if isinstance(other, FockVector):
            _check_dims(self.dim, other.dim)
            return FockVector(self.matrix @ other.amplitudes)
        if isinstance(other, DensityMatrix):
            _check_dims(self.dim, other.dim)
            return DensityMatrix(self.matrix @ other.matrix @ self.matrix.conj().T)
        return NotImplemented


@dataclass(frozen=True)
class CatSpec:
    alpha_prime: float
    parity: Parity

    def __post_init__(self):
        a = float(self.alpha_prime)
        if not (math.isfinite(a) and a > 0):
            raise ValueError(f"alpha_prime must be finite and positive, got {self.alpha_prime!r}")
        object.__setattr__(self, "alpha_prime", a)
        object.__setattr__(self, "parity", Parity.parse(self.parity))


@dataclass(frozen=True)
class GaussianUnitaryParams:
    """Parameters of ``D(beta) U(phi) S(r) U(theta)``."""

    beta: complex = 0j
    phi: float = 0.0
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "beta", complex(self.beta))
        for name in ("phi", "r", "theta"):
            object.__setattr__(self, name, float(getattr(self, name)))
        vals = (self.beta.real, self.beta.imag, self.phi, self.r, self.theta)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite Gaussian unitary parameter in {self!r}")


State = Union[FockVector, DensityMatrix]


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(f"dimension mismatch: {a} vs {b}")


# -- states -----------------------------------------------------------------


def _coherent_raw(alpha: complex, dim: int) -> np.ndarray:
    """Un-renormalized truncated coherent amplitudes ``e^{-|a|^2/2} a^n / sqrt(n!)``."""
    alpha = complex(alpha)
    n = np.arange(dim)
    mag = abs(alpha)
    if mag == 0.0:
        out = np.zeros(dim, dtype=complex)
        out[0] = 1.0
        return out
    logmag = -0.5 * mag**2 + n * math.log(mag) - 0.5 * gammaln(n + 1)
    return np.exp(logmag) * np.exp(1j * n * np.angle(alpha))


def _require_tail(mean_photons: float, dim: int, what: str) -> float:
    tail = float(poisson.sf(dim - 1, mean_photons)) if mean_photons > 0 else 0.0
    if tail > TAIL_TOL:
        raise TruncationError(
            f"{what}: tail mass {tail:.3g} beyond n={dim - 1} exceeds {TAIL_TOL:g}; "
            f"use dim >= {truncation_dim(mean_photons)}"
        )
    if tail > 0:
        log.debug("%s: renormalizing after truncation, tail mass %.3g", what, tail)
    return tail


def coherent_state(alpha: complex, dim: int) -> FockVector:
    _require_tail(abs(alpha) ** 2, dim, f"coherent({alpha})")
    raw = _coherent_raw(alpha, dim)
    return FockVector(raw / np.linalg.norm(raw))


def vacuum(dim: int) -> FockVector:
    return number_state(0, dim)


def number_state(n: int, dim: int) -> FockVector:
    if not 0 <= n < dim:
        raise ValueError(f"number state |{n}> outside cutoff {dim}")
    out = np.zeros(dim, dtype=complex)
    out[n] = 1.0
    return FockVector(out)


def cat_state(spec: CatSpec, dim: int) -> FockVector:
    """Normalized ``|a'> -/+ |-a'>``; odd parity takes the minus sign."""
    _require_tail(spec.alpha_prime**2, dim, f"cat({spec.alpha_prime})")
    raw = _coherent_raw(spec.alpha_prime, dim)
    n = np.arange(dim)
    # c_n(-a) = (-1)^n c_n(a): keep only the surviving parity, no cancellation
    keep = (n % 2 == 1) if spec.parity is Parity.ODD else (n % 2 == 0)
    amps = np.where(keep, 2.0 * raw, 0.0)
    return FockVector(amps / np.linalg.norm(amps))


def entangled_cat(bit: int, alpha: complex, dim: int) -> TwoModeVector:
    """``(|a>|-a> -/+ |-a>|a>)`` normalized; bit 0 takes the minus sign."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    if bit == 0 and abs(alpha) == 0:
        raise ValueError("entangled_cat(0, 0) is the zero vector")
    _require_tail(abs(alpha) ** 2, dim, f"entangled_cat({alpha})")
    plus = _coherent_raw(alpha, dim)
    minus = _coherent_raw(-complex(alpha), dim)
    sign = -1.0 if bit == 0 else 1.0
    amps = np.outer(plus, minus) + sign * np.outer(minus, plus)
    return TwoModeVector(amps / np.linalg.norm(amps))


def product_state(a: FockVector, b: FockVector) -> TwoModeVector:
    _check_dims(a.dim, b.dim)
    return TwoModeVector(np.outer(a.amplitudes, b.amplitudes))


# -- operators --------------------------------------------------------------


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def _unitary_from_generator(gen: np.ndarray, what: str) -> Operator:
    u = expm(gen)
    op = Operator(u, unitary=True)
    dev = op.unitarity_deviation()
    if dev > UNITARY_TOL:
        raise TruncationError(f"{what}: unitarity deviation {dev:.3g}")
    # column 0 leaking into the last levels means the cutoff clips the action
    edge = float(np.sum(np.abs(u[-2:, 0]) ** 2))
    if edge > TAIL_TOL:
        raise TruncationError(f"{what}: edge mass {edge:.3g} on vacuum column, increase dim")
    return op


def displacement_operator(beta: complex, dim: int) -> Operator:
    beta = complex(beta)
    if beta == 0:
        return identity(dim)
    a = annihilation(dim)
    return _unitary_from_generator(beta * a.T - beta.conjugate() * a, f"D({beta})")


def squeeze_operator(r: float, dim: int) -> Operator:
    """``S(r) = exp[(r/2)(a^2 - a†^2)]``; r > 0 squeezes the x quadrature."""
    if r == 0:
        return identity(dim)
    a = annihilation(dim)
    a2 = a @ a
    return _unitary_from_generator(0.5 * r * (a2 - a2.T), f"S({r})")


def phase_rotation(theta: float, dim: int) -> Operator:
    return Operator(np.diag(np.exp(1j * theta * np.arange(dim))), unitary=True)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim), unitary=True)


def parity_operator(dim: int) -> Operator:
    return Operator(np.diag((-1.0) ** np.arange(dim)), unitary=True)


def gaussian_unitary(params: GaussianUnitaryParams, dim: int) -> Operator:
    """``D(beta) U(phi) S(r) U(theta)``."""
    return (
        displacement_operator(params.beta, dim)
        @ phase_rotation(params.phi, dim)
        @ squeeze_operator(params.r, dim)
        @ phase_rotation(params.theta, dim)
    )


# -- beam splitter ----------------------------------------------------------


@lru_cache(maxsize=8)
def _beam_splitter_blocks(dim: int, inverse: bool):
    """Per total-photon-number blocks of the balanced beam splitter.

    Each entry is ``(n0_indices, block)`` with ``block`` acting on the
    amplitudes ``A[n0, N - n0]`` that fit inside the cutoff.
    """
    angle = math.pi / 4 if inverse else -math.pi / 4
    blocks = []
    for total in range(2 * dim - 1):
        n0 = np.arange(total + 1)
        n1 = total - n0
        # generator a0† a1 - a0 a1† restricted to the block, basis |n0, total - n0>
        up = np.sqrt((n0[:-1] + 1.0) * n1[:-1])
        gen = np.diag(up, -1) - np.diag(up, 1)
        full = expm(angle * gen)
        keep = (n0 < dim) & (n1 < dim)
        idx = n0[keep]
        blocks.append((idx, np.ascontiguousarray(full[np.ix_(keep, keep)])))
    return blocks


def beam_splitter_apply(state: TwoModeVector, inverse: bool = False) -> TwoModeVector:
    """Balanced beam splitter ``|a>|b> -> |(a-b)/sqrt2>|(a+b)/sqrt2>``.

    ``inverse=True`` applies the inverse map, which is how a cat in mode 0
    plus vacuum in mode 1 becomes the entangled commitment state.
    """
    dim = state.dim
    amps = state.amplitudes
    out = np.zeros_like(amps)
    for total, (idx, block) in enumerate(_beam_splitter_blocks(dim, inverse)):
        other = total - idx
        out[idx, other] = block @ amps[idx, other]
    result = TwoModeVector(out)
    drift = abs(result.norm() - state.norm())
    if drift > UNITARY_TOL:
        raise TruncationError(f"beam splitter lost norm {drift:.3g}; increase dim")
    return result


def apply_on_mode(op: Operator, mode: int, state: TwoModeVector) -> TwoModeVector:
    _check_dims(op.dim, state.dim)
    if mode == 0:
        return TwoModeVector(op.matrix @ state.amplitudes)
    if mode == 1:
        return TwoModeVector(state.amplitudes @ op.matrix.T)
    raise ValueError(f"mode must be 0 or 1, got {mode!r}")


def partial_trace(state: TwoModeVector, keep: int) -> DensityMatrix:
    """Reduced state of mode ``keep``."""
    amps = state.amplitudes
    if keep == 0:
        return DensityMatrix(amps @ amps.conj().T)
    if keep == 1:
        return DensityMatrix(amps.T @ amps.conj())
    raise ValueError(f"keep must be 0 or 1, got {keep!r}")


# -- measurements -----------------------------------------------------------


def photon_number_distribution(state: State) -> np.ndarray:
    if isinstance(state, FockVector):
        p = np.abs(state.amplitudes) ** 2
    elif isinstance(state, DensityMatrix):
        p = np.clip(np.diag(state.matrix).real, 0.0, None)
    else:
        raise TypeError(f"expected FockVector or DensityMatrix, got {type(state).__name__}")
    return p


def parity_expectation(state: State) -> float:
    p = photon_number_distribution(state)
    signs = (-1.0) ** np.arange(p.size)
    return float(np.dot(signs, p))


def mean_photon_number(state: State) -> float:
    p = photon_number_distribution(state)
    return float(np.dot(np.arange(p.size), p))


def overlap(a: FockVector, b: FockVector) -> complex:
    _check_dims(a.dim, b.dim)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: FockVector, b: FockVector) -> float:
    return abs(overlap(a, b)) ** 2


def two_mode_fidelity(a: TwoModeVector, b: TwoModeVector) -> float:
    _check_dims(a.dim, b.dim)
    return abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
