import json
import math

import pytest

from catqbc.cheat import c_max
from catqbc.distinguish import g_max_analytic
from catqbc.fock import Parity
from catqbc.protocol import (
    Alice,
    Bob,
    ConfigError,
    Displace,
    DisplaceOptimal,
    Gaussian,
    Honest,
    NonGaussian,
    OverAmplitude,
    ProtocolError,
    RunConfig,
    bob_hold_attack,
    parse_alice_strategy,
    play_session,
    run,
    tradeoff_curve,
)

SHOWCASE = 3 / math.sqrt(2)


def test_honest_unveil_always_succeeds():
    out, _ = run(RunConfig(alpha_prime=2.0, trials=2000, seed=3))
    assert out.unveil_success_rate == 1.0
    assert out.empirical_c is None
    assert out.detection_rate == 0.0


def test_displace_optimal_hits_control():
    cfg = RunConfig(SHOWCASE, trials=20000, seed=1, alice_strategy=DisplaceOptimal(), bit=0)
    out, _ = run(cfg)
    target = 2 * c_max(SHOWCASE, Parity.ODD).c_max
    assert abs(out.empirical_c - target) < 3 * math.sqrt(target * (1 - target) / cfg.trials)


def test_non_gaussian_cheat_is_perfect_at_large_amplitude():
    out, _ = run(RunConfig(2 * math.sqrt(2), trials=500, alice_strategy=NonGaussian(), monitor_vacuum=True))
    assert out.unveil_success_rate == 1.0
    assert out.detection_rate == 0.0


def test_over_amplitude_is_flagged():
    cfg = RunConfig(2.0, n_copies=5, trials=400, alice_strategy=OverAmplitude(3.0), count_photons_at_unveil=True)
    out, _ = run(cfg)
    assert out.photon_check_flagged
    assert out.photon_z > 3


def test_honest_photon_check_passes():
    out, _ = run(RunConfig(2.0, n_copies=2, trials=1000, count_photons_at_unveil=True))
    assert not out.photon_check_flagged
    assert abs(out.photon_z) < 4


def test_helstrom_hold_attack():
    cfg = RunConfig(math.sqrt(2), trials=20000, bob_strategy="helstrom-during-hold")
    out = bob_hold_attack(cfg)
    p = 0.5 + g_max_analytic(1.0)
    assert abs(out.bob_guess_rate - p) < 3 * math.sqrt(p * (1 - p) / cfg.trials)


def test_hold_attack_needs_strategy():
    with pytest.raises(ConfigError):
        bob_hold_attack(RunConfig(1.0))


def test_transcript_is_deterministic_and_parseable():
    cfg = RunConfig(1.5, n_copies=2, trials=50, seed=9, alice_strategy=Displace(0.3), monitor_vacuum=True)
    a = run(cfg)[1].to_jsonl()
    b = run(cfg)[1].to_jsonl()
    assert a == b
    lines = [json.loads(ln) for ln in a.splitlines()]
    assert len(lines) == 101
    assert set(lines[0]) >= {"trial", "copy", "committed_bit", "target_bit", "unveiled_parity", "vacuum_clicks"}
    assert "summary" in lines[-1]


def test_seed_changes_transcript():
    cfg = RunConfig(1.5, trials=50, seed=1, alice_strategy=DisplaceOptimal())
    other = RunConfig(1.5, trials=50, seed=2, alice_strategy=DisplaceOptimal())
    assert run(cfg)[1].to_jsonl() != run(other)[1].to_jsonl()


def test_trial_prefix_is_stable():
    # per-(trial, copy) streams: adding trials never changes earlier ones
    short = run(RunConfig(1.5, trials=20, seed=4, alice_strategy=DisplaceOptimal()))[1].records
    long = run(RunConfig(1.5, trials=40, seed=4, alice_strategy=DisplaceOptimal()))[1].records
    assert long[:20] == short


def test_phase_order_enforced():
    cfg = RunConfig(1.0)
    alice, bob = Alice(cfg, 0), Bob(cfg)
    with pytest.raises(ProtocolError):
        alice.unveil()
    with pytest.raises(ProtocolError):
        bob.measure(0.5)
    alice, bob = play_session(cfg, 1)
    assert bob.phase == "open"


@pytest.mark.parametrize(
    "text, kind",
    [
        ("honest", Honest),
        ("displace-optimal", DisplaceOptimal),
        ("displace:0.4", Displace),
        ("non-gaussian", NonGaussian),
        ("over-amplitude:3", OverAmplitude),
        ("gaussian:0,0.5,0,0.1,0", Gaussian),
    ],
)
def test_strategy_parser(text, kind):
    assert isinstance(parse_alice_strategy(text), kind)


@pytest.mark.parametrize("text", ["bribe", "displace:x", "gaussian:1,2"])
def test_strategy_parser_rejects(text):
    with pytest.raises(ConfigError):
        parse_alice_strategy(text)


@pytest.mark.parametrize(
    "kwargs",
    [dict(alpha_prime=-1.0), dict(alpha_prime=1.0, trials=0), dict(alpha_prime=1.0, bit=2), dict(alpha_prime=1.0, bob_strategy="x")],
)
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        RunConfig(**kwargs)


def test_non_gaussian_needs_room():
    with pytest.raises(ConfigError):
        RunConfig(3.0, alice_strategy=NonGaussian(), dim_override=16).dim


def test_tradeoff_curve_formulas():
    pts = tradeoff_curve([2.0], [1, 10])
    c1 = c_max(2.0, Parity.ODD).c_max
    assert abs(pts[0].c_max_n - c1) < 1e-15
    assert abs(pts[1].c_max_n - (2 * c1) ** 10 / 2) < 1e-15
    assert pts[1].g_max_n > pts[0].g_max_n
