"""Alice's side: optimal Gaussian cheating against the parity unveil.

The committed cat's Wigner function along the p axis is
``pi W(0, p) = e^{-p^2} (E +/- cos(k p)) / (1 +/- E)`` with
``E = e^{-2a'^2}`` and ``k = 2 sqrt2 a'``.  Displacing the proof mode moves
the phase-space origin of the unveiled cat, so the best displacement sits
on the highest fringe (odd commitment) or the deepest dip (even commitment).
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from .fock import (
    PROOF,
    CatSpec,
    FockVector,
    GaussianUnitaryParams,
    Operator,
    Parity,
    TwoModeVector,
    apply_on_mode,
    beam_splitter_apply,
    cat_state,
    dim_for_cat,
    displacement_operator,
    entangled_cat,
    gaussian_unitary,
    product_state,
    vacuum,
)
from .wigner import cat_wigner_on_p_axis

ROOT_XTOL = 1e-10
SCAN_POINTS = 4001
ASYMPTOTIC_MIN_ALPHA = 1.5


class NoRootError(RuntimeError):
    """No stationary point of W(0, p) could be bracketed."""


class OutsideValidityError(ValueError):
    pass


def _k(alpha_prime: float) -> float:
    return 2.0 * math.sqrt(2.0) * alpha_prime


def stationarity_residual(p, alpha_prime: float, committed: Parity, coefficient: Optional[float] = None):
    """``p cos(kp) + c sin(kp) -/+ p e^{-2a'^2}``; zero at stationary points of W(0, p).

    The minus sign on the last term is for an odd commitment.  The default
    coefficient ``c = sqrt2 a'`` follows from differentiating the closed-form
    Wigner function; pass ``coefficient=alpha_prime`` for the other reading.
    """
    committed = Parity.parse(committed)
    c = math.sqrt(2.0) * alpha_prime if coefficient is None else coefficient
    k = _k(alpha_prime)
    p = np.asarray(p, dtype=float)
    tail = p * math.exp(-2.0 * alpha_prime**2)
    out = p * np.cos(k * p) + c * np.sin(k * p) + (tail if committed is Parity.EVEN else -tail)
    return float(out) if out.ndim == 0 else out


def _slope_sign_fn(alpha_prime: float, committed: Parity, coefficient: Optional[float]):
    # d/dp [pi W(0,p)] = 2 e^{-p^2} * (sign) * residual / (1 +/- E); the envelope is dropped
    sign = 1.0 if committed is Parity.ODD else -1.0

    def f(p):
        return sign * stationarity_residual(p, alpha_prime, committed, coefficient)

    return f


def optimal_displacement(
    alpha_prime: float, committed, coefficient: Optional[float] = None, check_global: bool = True
) -> float:
    """Smallest positive p where W(0, p) reaches its target extremum.

    For an odd commitment that is the first maximum (slope + to -); for an
    even commitment the first minimum (slope - to +).  The first period
    ``(1e-6, 2 pi / k)`` is scanned for the sign change, then bisected.
    """
    committed = Parity.parse(committed)
    if not alpha_prime > 0:
        raise ValueError(f"alpha_prime must be positive, got {alpha_prime!r}")
    slope = _slope_sign_fn(alpha_prime, committed, coefficient)
    upper = 2.0 * math.pi / _k(alpha_prime)
    grid = np.linspace(1e-6, upper, SCAN_POINTS)
    vals = slope(grid)
    if committed is Parity.ODD:
        hits = np.nonzero((vals[:-1] > 0) & (vals[1:] <= 0))[0]
    else:
        hits = np.nonzero((vals[:-1] < 0) & (vals[1:] >= 0))[0]
    if hits.size == 0:
        raise NoRootError(
            f"no {'maximum' if committed is Parity.ODD else 'minimum'} of W(0,p) bracketed in "
            f"(1e-6, {upper:.6g}) for alpha'={alpha_prime}"
        )
    i = hits[0]
    lo, hi = grid[i], grid[i + 1]
    if vals[i + 1] == 0:
        d = float(hi)
    else:
        d = float(bisect(slope, lo, hi, xtol=ROOT_XTOL / 4, maxiter=200))
    if check_global and coefficient is None:
        _check_global(alpha_prime, committed, d)
    return d


def _check_global(alpha_prime: float, committed: Parity, d: float) -> None:
    k = _k(alpha_prime)
    ps = np.linspace(0.0, 2.0 * 2.0 * math.pi / k, 20001)
    w = cat_wigner_on_p_axis(alpha_prime, committed, ps)
    at = cat_wigner_on_p_axis(alpha_prime, committed, d)
    worse = (w.max() - at) if committed is Parity.ODD else (at - w.min())
    if worse > 1e-8:
        raise NoRootError(f"stationary point d={d} is not the global extremum (off by {worse:.3g})")


def resolve_stationarity_coefficient(alpha_prime: float = 3 / math.sqrt(2)) -> dict:
    """Roots of the stationarity condition under both readings of its sine coefficient.

    Returns the odd-commitment root for ``c = sqrt2 a'`` (derived) and
    ``c = a'`` (literal), alongside the large-amplitude estimate
    ``pi / (2 sqrt2 a')``.
    """
    derived = optimal_displacement(alpha_prime, Parity.ODD)
    literal = optimal_displacement(alpha_prime, Parity.ODD, coefficient=alpha_prime, check_global=False)
    return {
        "alpha_prime": alpha_prime,
        "d_derived": derived,
        "d_literal": literal,
        "d_large_amplitude": math.pi / (2.0 * math.sqrt(2.0) * alpha_prime),
        "residual_derived_at_derived": float(stationarity_residual(derived, alpha_prime, Parity.ODD)),
        "residual_literal_at_derived": float(
            stationarity_residual(derived, alpha_prime, Parity.ODD, coefficient=alpha_prime)
        ),
    }


@dataclass(frozen=True)
class CheatReport:
    alpha_prime: float
    committed: str
    d: float
    parity_at_d: float
    c_max: float
    p_nop: float
    c_max_prime: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


CSV_COLUMNS = ("alpha_prime", "parity_label", "d", "parity_at_d", "c_max", "p_nop", "c_max_prime")


def c_max(alpha_prime: float, committed) -> CheatReport:
    """Maximum control of the displacement attack, with and without vacuum monitoring."""
    committed = Parity.parse(committed)
    d = optimal_displacement(alpha_prime, committed)
    parity = float(cat_wigner_on_p_axis(alpha_prime, committed, d))
    if committed is Parity.ODD:
        cm = (parity + 1.0) / 4.0
    else:
        cm = (1.0 - parity) / 4.0
    p_nop = math.exp(-d * d / 2.0)
    return CheatReport(alpha_prime, committed.label, d, parity, cm, p_nop, cm * p_nop)


def report_csv_row(rep: CheatReport) -> List[str]:
    return [
        f"{rep.alpha_prime:.17g}",
        rep.committed,
        f"{rep.d:.17g}",
        f"{rep.parity_at_d:.17g}",
        f"{rep.c_max:.17g}",
        f"{rep.p_nop:.17g}",
        f"{rep.c_max_prime:.17g}",
    ]


def c_max_asymptotic(alpha_prime: float, check: bool = True) -> float:
    """Large-amplitude law ``exp(-pi^2 / (8 a'^2)) / 2`` as published.

    Raises ``OutsideValidityError`` below a' = 3/2 unless ``check=False``.
    """
    if check and alpha_prime < ASYMPTOTIC_MIN_ALPHA:
        raise OutsideValidityError(f"asymptotic law only holds for alpha' >= 3/2, got {alpha_prime}")
    return math.exp(-math.pi**2 / (8.0 * alpha_prime**2)) / 2.0


def c_max_fringe_estimate(alpha_prime: float) -> float:
    """``(1 + exp(-pi^2 / (8 a'^2))) / 4``: the maximum control with d = pi/(2 sqrt2 a')
    and the Gaussian envelope kept, fringe contrast taken as 1."""
    return (1.0 + math.exp(-math.pi**2 / (8.0 * alpha_prime**2))) / 4.0


def n_copy_control(c_max_value: float, n: int) -> float:
    """``2^(n-1) c^n``: every one of n copies must be flipped."""
    if not 0.0 <= c_max_value <= 0.5:
        raise ValueError(f"c_max must lie in [0, 1/2], got {c_max_value}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return (2.0 * c_max_value) ** n / 2.0


def non_gaussian_cheat_unitary(alpha: complex, dim: int) -> Operator:
    """``D(-a) exp(i pi |0><0|) D(a)``: leaves |a> alone, flips the sign of |-a>."""
    reflect = np.eye(dim, dtype=complex)
    reflect[0, 0] = -1.0
    return displacement_operator(-complex(alpha), dim) @ Operator(reflect, unitary=True) @ displacement_operator(
        alpha, dim
    )


def cheat_displacement_amplitude(d: float) -> complex:
    """Proof-mode displacement that shifts the unveiled origin to (0, d).

    A shift of the proof by beta moves Bob's first output by beta/sqrt2,
    i.e. by ``(Re beta, Im beta)`` in quadrature units.
    """
    return complex(0.0, d)


def unveiled_parity(state: TwoModeVector) -> float:
    """Parity of Bob's first beam-splitter output, computed without the beam splitter.

    The parity of ``(a0 - a1)/sqrt2`` is the mode swap, so
    ``<P> = sum_{n0,n1} conj(A[n0, n1]) A[n1, n0]``.
    """
    amps = state.amplitudes
    return float(np.vdot(amps, amps.T).real)


@dataclass(frozen=True)
class SuboptimalityReport:
    alpha_prime: float
    committed: str
    displacement_only_parity: float
    best_parity: float
    best_params: GaussianUnitaryParams
    best_squeeze_rotation_parity: Optional[float]
    best_squeeze_rotation_params: Optional[GaussianUnitaryParams]
    evaluated: int
    margin: float

    @property
    def passed(self) -> bool:
        return self.margin <= 1e-6


def _target_score(parity: float, committed: Parity) -> float:
    # odd commitment aims at +1, even at -1
    return parity if committed is Parity.ODD else -parity


def verify_gaussian_suboptimality(
    alpha_prime: float,
    committed,
    r_values: Sequence[float] = (-0.3, -0.1, 0.1, 0.3),
    theta_values: Sequence[float] = (0.0, math.pi / 4, math.pi / 2),
    beta_re: Optional[Iterable[float]] = None,
    beta_im: Optional[Iterable[float]] = None,
    phi_values: Sequence[float] = (0.0,),
    dim: Optional[int] = None,
) -> SuboptimalityReport:
    """Exhaustively score ``D(beta) U(phi) S(r) U(theta)`` on the proof mode.

    Every grid entry is applied to the entangled commitment state and the
    parity of Bob's (generally mixed) unveiled mode is compared with the
    displacement-only optimum from the closed-form Wigner function.
    ``margin`` is how far the best entry beats that optimum (<= 0 means it
    does not).
    """
    committed = Parity.parse(committed)
    if dim is None:
        dim = dim_for_cat(alpha_prime)
    if beta_re is None:
        beta_re = np.round(np.arange(-0.3, 0.3 + 1e-9, 0.05), 10)
    if beta_im is None:
        beta_im = np.round(np.arange(-0.1, 1.0 + 1e-9, 0.05), 10)
    beta_re = list(beta_re)
    beta_im = list(beta_im)

    ref = c_max(alpha_prime, committed)
    ref_score = _target_score(ref.parity_at_d, committed)

    chi = entangled_cat(committed.bit, alpha_prime / math.sqrt(2.0), dim)
    shifts = {(br, bi): displacement_operator(complex(br, bi), dim) for br in beta_re for bi in beta_im}
    best = (-np.inf, None)
    best_sr = (-np.inf, None)
    count = 0
    for r in r_values:
        for theta in theta_values:
            for phi in phi_values:
                core = gaussian_unitary(GaussianUnitaryParams(0j, phi, r, theta), dim)
                shaped = apply_on_mode(core, PROOF, chi)
                for (br, bi), shift in shifts.items():
                    params = GaussianUnitaryParams(complex(br, bi), phi, r, theta)
                    state = apply_on_mode(shift, PROOF, shaped)
                    score = _target_score(unveiled_parity(state), committed)
                    count += 1
                    if score > best[0]:
                        best = (score, params)
                    if (r != 0 or theta != 0 or phi != 0) and score > best_sr[0]:
                        best_sr = (score, params)
    sign = 1.0 if committed is Parity.ODD else -1.0
    return SuboptimalityReport(
        alpha_prime=alpha_prime,
        committed=committed.label,
        displacement_only_parity=ref.parity_at_d,
        best_parity=sign * best[0],
        best_params=best[1],
        best_squeeze_rotation_parity=None if best_sr[1] is None else sign * best_sr[0],
        best_squeeze_rotation_params=best_sr[1],
        evaluated=count,
        margin=float(best[0] - ref_score),
    )


def displaced_cat_state(alpha_prime: float, parity, d: float, dim: Optional[int] = None) -> FockVector:
    """Bob's unveiled cat after the proof was displaced so the origin sits at (0, d)."""
    parity = Parity.parse(parity)
    if dim is None:
        dim = dim_for_cat(alpha_prime)
    cat = cat_state(CatSpec(alpha_prime, parity), dim)
    return displacement_operator(complex(0.0, -d) / math.sqrt(2.0), dim) @ cat


def cheated_commitment(alpha_prime: float, committed, op: Operator, dim: Optional[int] = None) -> TwoModeVector:
    """Commitment state with ``op`` applied to the proof mode during the hold."""
    committed = Parity.parse(committed)
    if dim is None:
        dim = op.dim
    cat = cat_state(CatSpec(alpha_prime, committed), dim)
    chi = beam_splitter_apply(product_state(cat, vacuum(dim)), inverse=True)
    return apply_on_mode(op, PROOF, chi)

