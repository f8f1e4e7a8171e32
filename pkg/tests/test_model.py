import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from anwsim.model import (
    ArrayConfig,
    ConfigError,
    DisorderSpec,
    PumpSpec,
    homogeneous_array,
    validate,
)
from anwsim.configfile import (
    array_config_from_document,
    dump_array_config,
    geometric_grid,
    load_document,
)

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib


def test_minimal_single_guide_array_is_valid():
    cfg = ArrayConfig(1, [0.0], [], PumpSpec.single(1, 1))
    assert validate(cfg) is cfg
    assert cfg.couplings.size == 0


def test_dimension_mismatch_rejected():
    with pytest.raises(ConfigError):
        ArrayConfig(3, [0.0, 0.0, 0.0], [1.0], PumpSpec.single(3, 1))


def test_reference_51_guide_array_valid():
    cfg = homogeneous_array(51, 26)
    assert validate(cfg) is cfg
    assert cfg.pump.pumped_guides().tolist() == [25]


def test_empty_array_rejected():
    with pytest.raises(ConfigError):
        ArrayConfig(0, [], [], PumpSpec(np.zeros(1, complex)))


def test_nonpositive_coupling_rejected():
    for bad in (0.0, -0.3):
        with pytest.raises(ConfigError):
            ArrayConfig(2, [0.0, 0.0], [bad], PumpSpec.single(2, 1))


def test_pump_amplitudes_must_be_normalized():
    with pytest.raises(ConfigError):
        PumpSpec(np.array([0.5, 0.5], complex))
    # all-zero (dark) pump is allowed at the model level
    dark = PumpSpec(np.zeros(3, complex))
    assert dark.pumped_guides().size == 0


def test_pump_guide_bounds_and_strength():
    with pytest.raises(ConfigError):
        PumpSpec.single(5, 6)
    with pytest.raises(ConfigError):
        PumpSpec.single(5, 0)
    with pytest.raises(ConfigError):
        PumpSpec.single(5, 3, strength=0.0)


def test_beta_tilde_resolution():
    beta = np.array([0.3, -0.2])
    pump = PumpSpec.single(2, 1)
    assert np.array_equal(pump.resolve_beta_tilde(beta), 2.0 * beta)
    pinned = PumpSpec(pump.amplitudes, beta_tilde=np.array([7.0, 7.0]))
    assert np.array_equal(pinned.resolve_beta_tilde(beta), [7.0, 7.0])
    with pytest.raises(ConfigError):
        PumpSpec(pump.amplitudes, beta_tilde=np.array([1.0]))


def test_model_arrays_are_frozen():
    cfg = homogeneous_array(4, 2)
    with pytest.raises(ValueError):
        cfg.beta_s[0] = 1.0
    with pytest.raises(ValueError):
        cfg.pump.amplitudes[0] = 1.0


def test_disorder_spec_defaults_and_bounds():
    spec = DisorderSpec()
    assert spec.delta_c == 0.9
    assert spec.delta_beta == 3.0
    assert spec.realizations == 200
    with pytest.raises(ConfigError):
        DisorderSpec(kappa_c=1.2)
    with pytest.raises(ConfigError):
        DisorderSpec(kappa_beta=-0.1)
    with pytest.raises(ConfigError):
        DisorderSpec(kappa_c=1.0, delta_c=1.0)  # couplings could reach zero
    with pytest.raises(ConfigError):
        DisorderSpec(realizations=0)


def test_geometric_grid_shape():
    z = geometric_grid(0.05, 30.0, 400)
    assert z[0] == 0.05 and z[-1] == 30.0
    assert np.all(np.diff(z) > 0)
    with pytest.raises(ConfigError):
        geometric_grid(1.0, 0.5, 100)


@st.composite
def array_configs(draw):
    n = draw(st.integers(min_value=1, max_value=9))
    beta = draw(
        st.lists(
            st.floats(min_value=-5, max_value=5, allow_nan=False),
            min_size=n,
            max_size=n,
        )
    )
    couplings = draw(
        st.lists(
            st.floats(min_value=0.05, max_value=3, allow_nan=False),
            min_size=max(n - 1, 0),
            max_size=max(n - 1, 0),
        )
    )
    guide = draw(st.integers(min_value=1, max_value=n))
    phase = draw(st.floats(min_value=0.0, max_value=6.28, allow_nan=False))
    strength = draw(st.floats(min_value=0.1, max_value=10.0, allow_nan=False))
    pump = PumpSpec.single(n, guide, strength=strength, phase=phase)
    if draw(st.booleans()):
        bt = draw(
            st.lists(
                st.floats(min_value=-10, max_value=10, allow_nan=False),
                min_size=n,
                max_size=n,
            )
        )
        pump = PumpSpec(pump.amplitudes, strength=strength, beta_tilde=bt)
    return ArrayConfig(n, beta, couplings, pump)


@settings(max_examples=60, deadline=None)
@given(array_configs())
def test_toml_round_trip_is_lossless(cfg):
    text = dump_array_config(cfg)
    parsed = array_config_from_document(tomllib.loads(text))
    assert parsed == cfg
    assert dump_array_config(parsed) == text


def test_config_file_round_trip(tmp_path):
    path = tmp_path / "experiment.toml"
    path.write_text(
        """
[array]
n_guides = 5
beta_s = 0.25
couplings = [1.0, 1.5, 1.0, 0.5]

[pump]
guide = 3
phase = 0.7
strength = 2.0

[grid]
z_min = 0.1
z_max = 10.0
points_per_decade = 50
""",
        encoding="utf-8",
    )
    doc = load_document(path)
    cfg = array_config_from_document(doc)
    assert cfg.n_guides == 5
    assert np.allclose(cfg.beta_s, 0.25)
    reparsed = array_config_from_document(tomllib.loads(dump_array_config(cfg)))
    assert reparsed == cfg


def test_pump_section_needs_exactly_one_form():
    doc = {"array": {"n_guides": 2}, "pump": {"guide": 1, "amplitudes": [[1.0, 0.0], [0.0, 0.0]]}}
    with pytest.raises(ConfigError):
        array_config_from_document(doc)
    with pytest.raises(ConfigError):
        array_config_from_document({"array": {"n_guides": 2}, "pump": {}})
