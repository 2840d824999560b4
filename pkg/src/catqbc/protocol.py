"""Two-party commit / hold / unveil engine with seeded Monte-Carlo sampling.

Each session builds the exact two-mode state Bob ends up measuring; trials
then sample photon counts from its joint number distribution.  Every
(trial, copy) pair draws from its own ``SeedSequence(seed, spawn_key=(trial, copy))``
stream, so results do not depend on evaluation order.
"""

from __future__ import annotations

import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import cheat, distinguish
from .fock import (
    PROOF,
    TOKEN,
    CatSpec,
    GaussianUnitaryParams,
    Operator,
    Parity,
    TwoModeVector,
    apply_on_mode,
    beam_splitter_apply,
    cat_state,
    dim_for_cat,
    displacement_operator,
    gaussian_unitary,
    photon_number_distribution,
    product_state,
    vacuum,
)

PHOTON_Z_THRESHOLD = 3.0


class ProtocolError(RuntimeError):
    """A party was driven out of phase order."""


class ConfigError(ValueError):
    pass


# -- strategies -------------------------------------------------------------


@dataclass(frozen=True)
class Honest:
    name = "honest"

    def to_dict(self) -> dict:
        return {"name": self.name}


@dataclass(frozen=True)
class DisplaceOptimal:
    name = "displace-optimal"

    def to_dict(self) -> dict:
        return {"name": self.name}


@dataclass(frozen=True)
class Displace:
    d: float
    name = "displace"

    def to_dict(self) -> dict:
        return {"name": self.name, "d": self.d}


@dataclass(frozen=True)
class Gaussian:
    params: GaussianUnitaryParams
    name = "gaussian"

    def to_dict(self) -> dict:
        p = self.params
        return {
            "name": self.name,
            "beta_re": p.beta.real,
            "beta_im": p.beta.imag,
            "phi": p.phi,
            "r": p.r,
            "theta": p.theta,
        }


@dataclass(frozen=True)
class NonGaussian:
    name = "non-gaussian"

    def to_dict(self) -> dict:
        return {"name": self.name}


@dataclass(frozen=True)
class OverAmplitude:
    """Commit a cat of amplitude ``alpha_committed`` instead of the agreed one,
    then displace optimally for that amplitude."""

    alpha_committed: float
    name = "over-amplitude"

    def to_dict(self) -> dict:
        return {"name": self.name, "alpha_committed": self.alpha_committed}


AliceStrategy = Union[Honest, DisplaceOptimal, Displace, Gaussian, NonGaussian, OverAmplitude]
BOB_STRATEGIES = ("honest", "helstrom-during-hold")


def parse_alice_strategy(text: str) -> AliceStrategy:
    """Parse ``honest``, ``displace-optimal``, ``displace:D``, ``non-gaussian``,
    ``over-amplitude:A`` or ``gaussian:BETA_RE,BETA_IM,PHI,R,THETA``."""
    name, _, arg = text.strip().lower().partition(":")
    try:
        if name == "honest" and not arg:
            return Honest()
        if name == "displace-optimal" and not arg:
            return DisplaceOptimal()
        if name == "non-gaussian" and not arg:
            return NonGaussian()
        if name == "displace":
            return Displace(float(arg))
        if name == "over-amplitude":
            return OverAmplitude(float(arg))
        if name == "gaussian":
            br, bi, phi, r, theta = (float(v) for v in arg.split(","))
            return Gaussian(GaussianUnitaryParams(complex(br, bi), phi, r, theta))
    except ValueError as exc:
        raise ConfigError(f"bad strategy argument in {text!r}: {exc}") from None
    raise ConfigError(f"unknown Alice strategy {text!r}")


@dataclass(frozen=True)
class RunConfig:
    alpha_prime: float
    n_copies: int = 1
    trials: int = 1000
    seed: int = 0
    alice_strategy: AliceStrategy = field(default_factory=Honest)
    bob_strategy: str = "honest"
    monitor_vacuum: bool = False
    count_photons_at_unveil: bool = False
    dim_override: Optional[int] = None
    bit: Optional[int] = None  # None draws the committed bit per trial

    def __post_init__(self):
        if not (math.isfinite(self.alpha_prime) and self.alpha_prime > 0):
            raise ConfigError(f"alpha_prime must be positive, got {self.alpha_prime}")
        if self.n_copies < 1 or self.trials < 1:
            raise ConfigError("n_copies and trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.bob_strategy not in BOB_STRATEGIES:
            raise ConfigError(f"bob_strategy must be one of {BOB_STRATEGIES}, got {self.bob_strategy!r}")
        if self.bit not in (None, 0, 1):
            raise ConfigError(f"bit must be 0, 1 or None, got {self.bit!r}")
        if isinstance(self.alice_strategy, OverAmplitude) and not self.alice_strategy.alpha_committed > 0:
            raise ConfigError("alpha_committed must be positive")

    @property
    def cheating(self) -> bool:
        return not isinstance(self.alice_strategy, Honest)

    @property
    def committed_amplitude(self) -> float:
        if isinstance(self.alice_strategy, OverAmplitude):
            return self.alice_strategy.alpha_committed
        return self.alpha_prime

    @property
    def dim(self) -> int:
        needed = dim_for_cat(max(self.alpha_prime, self.committed_amplitude))
        if self.dim_override is None:
            return needed
        if isinstance(self.alice_strategy, NonGaussian) and self.dim_override < needed:
            raise ConfigError(
                f"non-Gaussian cheat needs dim >= {needed} at alpha'={self.alpha_prime}, got {self.dim_override}"
            )
        return self.dim_override

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["alice_strategy"] = self.alice_strategy.to_dict()
        return d


# -- messages and parties ---------------------------------------------------


@dataclass(frozen=True)
class Message:
    kind: str  # "commit" | "unveil" | "open"
    payload: dict


class Alice:
    """Prepares the cat, splits it, and hands over token then proof."""

    def __init__(self, config: RunConfig, bit: int):
        self.config = config
        self.bit = bit
        self.phase = "idle"
        self._state: Optional[TwoModeVector] = None

    @property
    def committed_parity(self) -> Parity:
        return Parity.from_bit(self.bit)

    @property
    def target_bit(self) -> int:
        return 1 - self.bit if self.config.cheating else self.bit

    def commit(self) -> Message:
        if self.phase != "idle":
            raise ProtocolError(f"commit in phase {self.phase}")
        dim = self.config.dim
        cat = cat_state(CatSpec(self.config.committed_amplitude, self.committed_parity), dim)
        self._state = beam_splitter_apply(product_state(cat, vacuum(dim)), inverse=True)
        self.phase = "committed"
        return Message("commit", {"mode": TOKEN, "state": self._state})

    def cheat_operator(self) -> Optional[Operator]:
        strat = self.config.alice_strategy
        dim = self.config.dim
        if isinstance(strat, Honest):
            return None
        if isinstance(strat, (DisplaceOptimal, OverAmplitude)):
            d = cheat.optimal_displacement(self.config.committed_amplitude, self.committed_parity)
            return displacement_operator(cheat.cheat_displacement_amplitude(d), dim)
        if isinstance(strat, Displace):
            return displacement_operator(cheat.cheat_displacement_amplitude(strat.d), dim)
        if isinstance(strat, Gaussian):
            return gaussian_unitary(strat.params, dim)
        if isinstance(strat, NonGaussian):
            return cheat.non_gaussian_cheat_unitary(self.config.alpha_prime / math.sqrt(2.0), dim)
        raise ConfigError(f"unsupported strategy {strat!r}")

    def hold(self) -> None:
        if self.phase != "committed":
            raise ProtocolError(f"hold in phase {self.phase}")
        op = self.cheat_operator()
        if op is not None:
            self._state = apply_on_mode(op, PROOF, self._state)
        self.phase = "held"

    def unveil(self) -> Message:
        if self.phase != "held":
            raise ProtocolError(f"unveil in phase {self.phase}")
        self.phase = "unveiled"
        return Message("unveil", {"mode": PROOF, "state": self._state, "claimed_bit": self.target_bit})


class Bob:
    """Recombines the modes and measures photon numbers."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.phase = "idle"
        self._state: Optional[TwoModeVector] = None
        self.claimed_bit: Optional[int] = None
        self._cdf: Optional[np.ndarray] = None

    def receive_commit(self, msg: Message) -> None:
        if self.phase != "idle" or msg.kind != "commit":
            raise ProtocolError(f"unexpected {msg.kind} in phase {self.phase}")
        self.phase = "holding"

    def receive_unveil(self, msg: Message) -> None:
        if self.phase != "holding" or msg.kind != "unveil":
            raise ProtocolError(f"unexpected {msg.kind} in phase {self.phase}")
        self._state = beam_splitter_apply(msg.payload["state"])
        self.claimed_bit = msg.payload["claimed_bit"]
        cdf = np.cumsum(self._state.joint_distribution().ravel())
        self._cdf = cdf / cdf[-1]
        self.phase = "open"

    @property
    def output_state(self) -> TwoModeVector:
        if self._state is None:
            raise ProtocolError("no unveiled state yet")
        return self._state

    def measure(self, u: float) -> Message:
        """Inverse-CDF sample of the joint photon numbers from uniform ``u``."""
        if self.phase != "open":
            raise ProtocolError(f"measure in phase {self.phase}")
        idx = int(np.searchsorted(self._cdf, u, side="right"))
        idx = min(idx, self._cdf.size - 1)
        n0, n1 = divmod(idx, self.config.dim)
        return Message("open", {"photons": n0, "vacuum_photons": n1, "bit": 0 if n0 % 2 else 1})


def play_session(config: RunConfig, bit: int) -> Tuple[Alice, Bob]:
    """Drive one commit / hold / unveil exchange up to Bob's measurement."""
    alice, bob = Alice(config, bit), Bob(config)
    bob.receive_commit(alice.commit())
    alice.hold()
    bob.receive_unveil(alice.unveil())
    return alice, bob


# -- outcomes ---------------------------------------------------------------


@dataclass(frozen=True)
class RunOutcome:
    trials: int
    n_copies: int
    unveil_success_rate: Optional[float]
    detection_rate: Optional[float]
    mean_parity: Optional[float]
    empirical_c: Optional[float]
    undetected_success_rate: Optional[float] = None
    success_rate_given_undetected: Optional[float] = None
    photon_mean: Optional[float] = None
    photon_mean_expected: Optional[float] = None
    photon_mean_stderr: Optional[float] = None
    photon_z: Optional[float] = None
    photon_check_flagged: Optional[bool] = None
    bob_guess_rate: Optional[float] = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class Transcript:
    config: dict
    records: List[dict]
    summary: dict

    def to_jsonl(self) -> str:
        buf = io.StringIO()
        for rec in self.records:
            buf.write(json.dumps(rec, sort_keys=True, separators=(",", ":")))
            buf.write("\n")
        final = {"summary": self.summary, "config": self.config}
        buf.write(json.dumps(final, sort_keys=True, separators=(",", ":")))
        buf.write("\n")
        return buf.getvalue()


def _stream(seed: int, trial: int, copy: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial, copy)))


def _announced_photon_stats(config: RunConfig, bit: int) -> Tuple[float, float]:
    """Mean and standard deviation of photon counts for the honest cat announced for ``bit``."""
    dim = config.dim
    p = photon_number_distribution(cat_state(CatSpec(config.alpha_prime, Parity.from_bit(bit)), dim))
    n = np.arange(dim)
    mean = float(n @ p)
    return mean, math.sqrt(float((n - mean) ** 2 @ p))


def _rate(num: int, den: int) -> Optional[float]:
    return num / den if den else None


def run(config: RunConfig) -> Tuple[RunOutcome, Transcript]:
    if config.bob_strategy == "helstrom-during-hold":
        return _run_helstrom(config)

    bits = (0, 1) if config.bit is None else (config.bit,)
    sessions = {b: play_session(config, b) for b in bits}
    stats = {b: _announced_photon_stats(config, sessions[b][0].target_bit) for b in bits}
    action = config.alice_strategy.name

    records: List[dict] = []
    successes = detections = undetected_successes = 0
    parity_sum = 0
    photon_total = 0
    photon_expected_total = 0.0
    photon_var_total = 0.0
    n_copies = config.n_copies
    for trial in range(config.trials):
        decoded = set()
        clicked = False
        counts = []
        bit = config.bit
        target = None
        for copy in range(n_copies):
            rng = _stream(config.seed, trial, copy)
            u_bit, u_meas = rng.random(2)
            if bit is None:
                bit = int(u_bit < 0.5)
            alice, bob = sessions[bit]
            target = alice.target_bit
            out = bob.measure(u_meas).payload
            n0, n1 = out["photons"], out["vacuum_photons"]
            parity = -1 if n0 % 2 else 1
            parity_sum += parity
            decoded.add(out["bit"])
            if config.monitor_vacuum and n1 > 0:
                clicked = True
            counts.append(n0)
            rec = {
                "trial": trial,
                "copy": copy,
                "committed_bit": bit,
                "target_bit": target,
                "cheat_action": action,
                "unveiled_parity": parity,
                "decoded_bit": out["bit"],
                "vacuum_clicks": n1 if config.monitor_vacuum else None,
            }
            if config.count_photons_at_unveil:
                rec["photons"] = n0
            records.append(rec)

        flagged = False
        if config.count_photons_at_unveil:
            mean, sd = stats[bit]
            photon_total += sum(counts)
            photon_expected_total += mean * n_copies
            photon_var_total += sd * sd * n_copies
            trial_z = (np.mean(counts) - mean) / (sd / math.sqrt(n_copies)) if sd > 0 else 0.0
            flagged = bool(trial_z > PHOTON_Z_THRESHOLD)
        detected = clicked or flagged
        success = len(decoded) == 1 and decoded.pop() == target
        successes += success
        detections += detected
        undetected_successes += success and not detected

    trials = config.trials
    undetected = trials - detections
    outcome_kwargs = dict(
        trials=trials,
        n_copies=n_copies,
        unveil_success_rate=successes / trials,
        detection_rate=detections / trials,
        mean_parity=parity_sum / (trials * n_copies),
        empirical_c=successes / trials if config.cheating else None,
        undetected_success_rate=undetected_successes / trials,
        success_rate_given_undetected=_rate(undetected_successes, undetected),
    )
    if config.count_photons_at_unveil:
        samples = trials * n_copies
        mean_obs = photon_total / samples
        mean_exp = photon_expected_total / samples
        stderr = math.sqrt(photon_var_total) / samples
        z = (mean_obs - mean_exp) / stderr if stderr > 0 else 0.0
        outcome_kwargs.update(
            photon_mean=mean_obs,
            photon_mean_expected=mean_exp,
            photon_mean_stderr=stderr,
            photon_z=z,
            photon_check_flagged=bool(z > PHOTON_Z_THRESHOLD),
        )
    outcome = RunOutcome(**outcome_kwargs)
    return outcome, Transcript(config.to_dict(), records, outcome.to_dict())


def _helstrom_acceptance(config: RunConfig) -> Dict[int, float]:
    """``tr(Pi_b rho_b)``: probability that Bob's hold-phase guess is right for bit b."""
    alpha = config.alpha_prime / math.sqrt(2.0)
    rho0, rho1 = distinguish.reduced_states(alpha, config.dim)
    pi0, pi1 = distinguish.helstrom_projectors(rho0, rho1)
    return {
        0: float(np.trace(pi0.matrix @ rho0.matrix).real),
        1: float(np.trace(pi1.matrix @ rho1.matrix).real),
    }


def _run_helstrom(config: RunConfig) -> Tuple[RunOutcome, Transcript]:
    accept = _helstrom_acceptance(config)
    records = []
    correct = 0
    for trial in range(config.trials):
        bit = config.bit
        for copy in range(config.n_copies):
            u_bit, u_guess = _stream(config.seed, trial, copy).random(2)
            if bit is None:
                bit = int(u_bit < 0.5)
            right = bool(u_guess < accept[bit])
            correct += right
            records.append(
                {
                    "trial": trial,
                    "copy": copy,
                    "committed_bit": bit,
                    "cheat_action": "helstrom-during-hold",
                    "guessed_bit": bit if right else 1 - bit,
                }
            )
    total = config.trials * config.n_copies
    outcome = RunOutcome(
        trials=config.trials,
        n_copies=config.n_copies,
        unveil_success_rate=None,
        detection_rate=None,
        mean_parity=None,
        empirical_c=None,
        bob_guess_rate=correct / total,
    )
    return outcome, Transcript(config.to_dict(), records, outcome.to_dict())


def bob_hold_attack(config: RunConfig) -> RunOutcome:
    """Bob applies the Helstrom measurement to the token during the hold."""
    if config.bob_strategy != "helstrom-during-hold":
        raise ConfigError("bob_hold_attack needs bob_strategy='helstrom-during-hold'")
    return _run_helstrom(config)[0]


# -- N-copy trade-off -------------------------------------------------------


@dataclass(frozen=True)
class TradeoffPoint:
    alpha_prime: float
    n: int
    c_max_n: float
    g_max_n: float


def tradeoff_curve(alpha_prime_list: Sequence[float], n_list: Sequence[int]) -> List[TradeoffPoint]:
    """Maximum control and information gain of the N-copy protocol (odd commitment)."""
    if not alpha_prime_list or not n_list:
        raise ValueError("alpha_prime_list and n_list must be non-empty")
    points = []
    for ap in alpha_prime_list:
        cm = cheat.c_max(ap, Parity.ODD).c_max
        g = distinguish.g_max_analytic(ap / math.sqrt(2.0))
        for n in n_list:
            points.append(TradeoffPoint(ap, int(n), cheat.n_copy_control(cm, n), distinguish.n_copy_gain(g, n)))
    return points
