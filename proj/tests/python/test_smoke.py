import math
import os
import subprocess

import numpy as np
import pytest

import hjsafe

SMALL_2D = '{"scenario": "two_car", "grid": {"counts": [41, 41]}}'


@pytest.fixture(scope="module")
def solved():
    config = hjsafe.Config.parse(SMALL_2D)
    return config, hjsafe.solve(config)


def test_config_roundtrip():
    config = hjsafe.Config.parse(
        '{"scenario": "three_car", "disturbance_model": "reaction_time"}')
    assert config.dim == 4
    assert config.disturbance_model == "reaction_time"
    again = hjsafe.Config.parse(config.to_json())
    assert again.to_json() == config.to_json()
    assert again.scenario_hash() == config.scenario_hash()


def test_config_errors():
    with pytest.raises(hjsafe.ConfigError, match="unknown key"):
        hjsafe.Config.parse('{"colour": 1}')
    with pytest.raises(hjsafe.HjsafeError):
        hjsafe.Config.parse('{"solver": {"cfl": 3}}')
    with pytest.raises(hjsafe.IoError):
        hjsafe.Config.load("/nonexistent/config.json")


def test_pointwise_functions():
    assert hjsafe.flow([10, -2, 8, 1], 0.5, -1, 0.2) == pytest.approx(
        [-2, 1.5, 1, -1.2])
    config = hjsafe.Config.parse('{"scenario": "two_car"}')
    assert hjsafe.constraint_margin(config, [20, 0]) == 10
    assert hjsafe.hamiltonian(config, [4, -1.5], [0, 1]) == pytest.approx(0.5)
    inputs = hjsafe.optimal_inputs(config, [4, -1.5], [0, 1])
    assert inputs["u2"] == -2 and inputs["u1"] == -1.5
    four = hjsafe.Config.parse('{"scenario": "three_car"}')
    assert hjsafe.idm_accel(four, [0, 0, 1, 0], 1.0) == -1.5


def test_solve_and_query(solved):
    config, field = solved
    assert field.converged
    assert field.counts == [41, 41]
    values = field.values
    assert values.shape == (41, 41)
    assert np.all(values <= field.margin)
    # values[i, j] is the node at x_g1 index i and v_g1 index j.
    assert field.value_at([1.0 * 20, -10 + 0.5 * 22]) == values[20, 22]
    assert 0 < field.safe_fraction() < 1
    assert field.is_safe([20, 1])
    assert not field.is_safe([2, -2.5])
    assert len(field.gradient_at([20, 1])) == 2
    with pytest.raises(hjsafe.DomainError):
        field.value_at([-5, 0])


def test_progress_callback():
    config = hjsafe.Config.parse(
        '{"scenario": "two_car", "grid": {"counts": [21, 21]},'
        ' "solver": {"tau_max": 1}}')
    seen = []
    field = hjsafe.solve(config, lambda it, tau, rate: seen.append(it))
    assert seen == list(range(1, field.iterations + 1))


def test_slice(solved):
    _, field = solved
    s = field.slice()
    assert s["rows"] == "x_g1" and s["cols"] == "v_g1"
    assert s["values"].shape == (41, 41)
    np.testing.assert_allclose(s["values"], field.values, atol=1e-12)


def test_field_file_roundtrip(solved, tmp_path):
    config, field = solved
    path = str(tmp_path / "field.hjvf")
    hjsafe.write_field(path, config, field)
    header, again = hjsafe.read_field(path)
    assert header["scenario_hash"] == config.scenario_hash()
    assert np.array_equal(again.values, field.values)
    assert again.tau == field.tau


def test_simulate(solved):
    config, field = solved
    trace = hjsafe.simulate(config, field, initial_state=[20, 0], horizon=2.0)
    assert trace["state"].shape == (41, 2)
    assert not trace["violated"]
    assert math.isclose(trace["t"][-1], 2.0)
    free = hjsafe.simulate(config, initial_state=[1, -5], horizon=2.0)
    assert free["violated"]


def test_cli_exit_codes(tmp_path):
    cli = os.environ.get("HJSAFE_CLI")
    if not cli:
        pytest.skip("HJSAFE_CLI not set")
    bad = tmp_path / "bad.json"
    bad.write_text('{"scenario": "nine_car"}')
    run = subprocess.run([cli, "solve", "--config", str(bad), "--out",
                          str(tmp_path / "x.hjvf")], capture_output=True)
    assert run.returncode == 2
    run = subprocess.run([cli, "query", "--field", str(tmp_path / "none"),
                          "--state", "1,2"], capture_output=True)
    assert run.returncode == 5
