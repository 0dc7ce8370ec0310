import json
import math
import os
import subprocess

import pytest

pml = pytest.importorskip("pml")


def test_reference_mechanism_leakage():
    mech = [
        [0.325, 0.225, 0.225, 0.225],
        [0.45, 0.1, 0.225, 0.225],
        [0.45, 0.225, 0.1, 0.225],
        [0.45, 0.225, 0.225, 0.1],
    ]
    prior = [0.4, 0.2, 0.2, 0.2]
    assert pml.eps_min(mech, prior) == pytest.approx(math.log(9 / 8), abs=1e-12)
    profile = pml.leakage_profile(mech, prior)
    assert len(profile["per_outcome"]) == 4
    assert pml.privacy_region(profile["eps_min"], prior) == 1


def test_binary_design_reduces_to_randomized_response():
    rr = pml.optimal_binary_mechanism(0.5, 1.0, math.log(2))
    assert rr[0][0] == pytest.approx(2 / 3, abs=1e-12)
    assert rr[1][0] == pytest.approx(1 / 3, abs=1e-12)
    member, violation = pml.membership_check(rr, [0.5, 0.5], 0.1, math.log(2))
    assert member and violation <= 1e-9


def test_design_certifies_at_estimate():
    mech = pml.design_mechanism([0.5, 0.3, 0.2], 0.05, math.log(2))
    assert pml.eps_min(mech, [0.5, 0.3, 0.2]) <= math.log(2) + 1e-9


def test_estimation_radius():
    beta = pml.beta_star(1e-9, 1800, 2)
    assert beta == pytest.approx(math.sqrt((2 / 1800) * (math.log(2) + 9 * math.log(10))),
                                 rel=1e-12)


def test_laplace_round_trip():
    b = pml.laplace_scale_for_target(0.5, 1e-6, 5000, 0.4)
    assert pml.laplace_eps_with_uncertainty(b, 0.4, 1e-6, 5000) == pytest.approx(
        0.5, abs=1e-9)
    with pytest.raises(ValueError):
        pml.laplace_scale_for_target(5.0, 1e-6, 100000, 0.4)


def test_gaussian_guarantee_and_baseline():
    eps_star, delta_star = pml.gaussian_guarantee(0.3, 1.5, 1000, 1e-6)
    assert eps_star > 0.3 and 1e-6 <= delta_star <= 1.0
    assert pml.pldp_sigma(1.0, 0.5) == pytest.approx(2.2413134234661705, rel=1e-12)


def test_experiment_is_deterministic():
    values = pml.synth_binary_source(0.7, 2000, seed=5)
    run = lambda: pml.laplace_experiment(values, [500], [math.log(2)],
                                         delta=1e-9, iterations=5, seed=3)
    assert run() == run()


@pytest.mark.skipif("PML_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_matches_library():
    out = subprocess.run(
        [os.environ["PML_CLI"], "noise", "laplace", "--eps", "log2", "--delta", "0"],
        capture_output=True, text=True, check=True)
    report = json.loads(out.stdout)
    assert report["b"] == pytest.approx(2 / math.log(2), rel=1e-12)
