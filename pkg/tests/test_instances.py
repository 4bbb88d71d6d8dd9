"""Tests for seeded instance generation."""

import hashlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bess_bench.instances import DEFAULT_RANGES
from bess_bench.instances import DEMAND_SHAPE
from bess_bench.instances import DatasetError
from bess_bench.instances import EmptyPoolError
from bess_bench.instances import Profile
from bess_bench.instances import ProfileError
from bess_bench.instances import SamplingRanges
from bess_bench.instances import SptSettings
from bess_bench.instances import child_rng
from bess_bench.instances import load_profiles
from bess_bench.instances import load_tep_dataset
from bess_bench.instances import make_spt_instance
from bess_bench.instances import make_tep_instance
from bess_bench.instances import sample_bess
from bess_bench.instances import select_pool
from bess_bench.instances import spt_instance_for
from bess_bench.instances import synth_pool
from bess_bench.instances import synth_profile
from bess_bench.instances import tep_instance_for
from bess_bench.instances import write_profiles
from bess_bench.instances.profiles import WIND_MAX_STEP

HEADER = "day," + ",".join(f"h{h}" for h in range(1, 25))


def write_csv(path, rows):
    path.write_text("\n".join([HEADER, *rows]) + "\n")
    return path


def test_child_streams_are_independent_of_order():
    first = child_rng(1, 2, 3, tag="spt").uniform()
    child_rng(1, 9, 9, tag="spt").uniform(size=100)
    assert child_rng(1, 2, 3, tag="spt").uniform() == first
    assert child_rng(1, 2, 3, tag="tep").uniform() != first


def test_sample_ranges_hold():
    for i in range(200):
        params, init = sample_bess(child_rng(5, i, tag="bess"))
        assert params.e_min < 30.0 < 40.0 < params.e_max
        assert params.e_min < init.e0 < params.e_max
        assert 10.0 <= params.p_c_max <= 20.0
        assert 0.75 <= params.eta_d <= 1.0


def test_sample_bess_draw_order():
    rng = np.random.default_rng(42)
    draws = [sample_bess(rng) for _ in range(3)]
    reference = np.random.default_rng(42)
    order = ("e_min", "e_max", "p_c_max", "p_d_max", "eta_c", "eta_d")
    for params, init in draws:
        for name in order:
            low, high = getattr(DEFAULT_RANGES, name)
            assert getattr(params, name) == pytest.approx(low + (high - low) * reference.random(), abs=1e-12)
        assert init.e0 == pytest.approx(0.5 * (params.e_min + params.e_max))


def test_sampling_ranges_from_config():
    ranges = SamplingRanges.from_config({"E_MIN": [1, 2], "ETA_C": [0.9, 0.95]})
    assert ranges.e_min == (1.0, 2.0)
    assert ranges.eta_c == (0.9, 0.95)
    assert ranges.p_c_max == DEFAULT_RANGES.p_c_max


def test_load_all_zero_profile(tmp_path):
    path = write_csv(tmp_path / "p.csv", ["1," + ",".join(["0"] * 24)])
    profiles = load_profiles(path)
    assert len(profiles) == 1
    assert profiles[0].day == 1
    assert profiles[0].values == (0.0,) * 24


def test_out_of_range_value_names_row_and_column(tmp_path):
    values = ["0.5"] * 24
    values[6] = "1.2"
    path = write_csv(tmp_path / "p.csv", ["1," + ",".join(["0"] * 24), "2," + ",".join(values)])
    with pytest.raises(ProfileError, match="row 2 column h7"):
        load_profiles(path)


@pytest.mark.parametrize(
    "rows, message",
    [
        (["1," + ",".join(["0"] * 23)], "column"),
        (["1," + ",".join(["x"] + ["0"] * 23)], "malformed value in column h1"),
        (["1.5," + ",".join(["0"] * 24)], "non-integer day"),
    ],
)
def test_malformed_profile_files(tmp_path, rows, message):
    path = write_csv(tmp_path / "p.csv", rows)
    with pytest.raises(ProfileError, match=message):
        load_profiles(path)


def test_missing_profile_file(tmp_path):
    with pytest.raises(ProfileError):
        load_profiles(tmp_path / "absent.csv")


def test_large_pool_round_trip(tmp_path):
    pool = synth_pool(3, 725, 725)
    path = tmp_path / "pool.csv"
    write_profiles(path, pool)
    loaded = load_profiles(path)
    assert len(loaded) == 1450
    np.testing.assert_allclose(loaded[100].as_array(), pool[100].as_array())


@given(st.lists(st.floats(0.0, 1.0), min_size=24, max_size=24))
def test_profile_accepts_unit_interval(values):
    assert len(Profile(tuple(values)).values) == 24


@given(st.floats().filter(lambda v: not 0.0 <= v <= 1.0))
def test_profile_rejects_values_outside_unit_interval(bad):
    with pytest.raises(ProfileError):
        Profile((bad,) + (0.0,) * 23)


@pytest.mark.parametrize("seed", range(10))
def test_solar_is_zero_at_night(seed):
    profile = synth_profile(child_rng(seed, tag="solar"), "solar")
    values = profile.as_array()
    assert np.all(values[:5] == 0.0)
    assert np.all(values[21:] == 0.0)
    assert values.max() > 0.0


@pytest.mark.parametrize("seed", range(10))
def test_wind_steps_are_bounded(seed):
    values = synth_profile(child_rng(seed, tag="wind"), "wind").as_array()
    assert np.max(np.abs(np.diff(values))) <= WIND_MAX_STEP + 1e-12


def test_unknown_profile_kind():
    with pytest.raises(ProfileError):
        synth_profile(np.random.default_rng(0), "tidal")


def test_synthetic_profiles_are_reproducible():
    for kind in ("solar", "wind"):
        first = synth_profile(child_rng(7, 0, tag=kind), kind).values
        again = synth_profile(child_rng(7, 0, tag=kind), kind).values
        other = synth_profile(child_rng(7, 1, tag=kind), kind).values
        assert first == again
        assert first != other
        assert all(0.0 <= v <= 1.0 for v in first)
    pool = synth_pool(7, 1, 1)
    assert pool[0].values == synth_profile(child_rng(7, 0, tag="solar"), "solar").values
    assert pool[1].values == synth_profile(child_rng(7, 0, tag="wind"), "wind").values


def test_select_pool(small_pool):
    assert {p.kind for p in select_pool(small_pool, "solar")} == {"solar"}
    assert len(select_pool(small_pool, "all")) == 40
    unlabelled = [Profile((0.1,) * 24, 1)]
    assert select_pool(unlabelled, "wind") == unlabelled
    with pytest.raises(EmptyPoolError):
        select_pool([], "solar")


def test_spt_without_renewables_follows_demand(small_pool):
    settings = SptSettings(res_factor=0.0)
    inst = make_spt_instance(np.random.default_rng(1), 2, small_pool, settings)
    scale = 1.2 * np.mean([p.p_d_max for p, _ in inst.fleet])
    np.testing.assert_allclose(inst.signal, np.asarray(DEMAND_SHAPE) * scale)
    assert min(inst.signal) >= 0.0


def test_spt_signal_changes_sign(small_pool):
    for index in range(100):
        signal = np.asarray(spt_instance_for(11, 1, index, small_pool).signal)
        assert signal.max() > 0.0 > signal.min(), index


def test_spt_fleet_size_and_determinism(small_pool):
    a = spt_instance_for(5, 3, 0, small_pool)
    b = spt_instance_for(5, 3, 0, small_pool)
    assert a.n_bess == 3
    assert a.digest() == b.digest()
    assert spt_instance_for(5, 3, 1, small_pool).digest() != a.digest()


def test_default_dataset():
    ds = load_tep_dataset()
    assert ds.nodes == 3
    assert ds.bess_node == 3
    assert ds.total_candidate_capacity == pytest.approx(270.0)
    assert sum(c.candidate_count for c in ds.corridors) == 9


def test_dataset_errors(tmp_path):
    path = tmp_path / "bad.yml"
    path.write_text("nodes: 3\ncorridors: []\n")
    with pytest.raises(DatasetError):
        load_tep_dataset(path)


def test_tep_instance_shape(small_pool):
    inst = make_tep_instance(np.random.default_rng(2), 2, 50, small_pool)
    assert inst.n_bess == 2
    assert sorted(inst.res_profiles) == [1, 2, 3]
    assert all(len(daily) == 50 for daily in inst.res_profiles.values())
    assert all(p.kind == "wind" for daily in inst.res_profiles.values() for p in daily)
    assert inst.demand(3, 19) == pytest.approx(80.0)
    assert inst.demand(1, 19) == 0.0


def test_single_day_instance(small_pool):
    inst = make_tep_instance(np.random.default_rng(2), 1, 1, small_pool)
    assert inst.days == 1
    with pytest.raises(DatasetError):
        make_tep_instance(np.random.default_rng(2), 1, 0, small_pool)


def test_tep_instance_draw_order(small_pool):
    inst = tep_instance_for(20220101, 2, 0, 3, small_pool)
    reference = child_rng(20220101, 2, 0, tag="tep")
    fleet = [sample_bess(reference) for _ in range(2)]
    assert [p for p, _ in inst.fleet] == [p for p, _ in fleet]
    wind = select_pool(small_pool, "wind")
    for node in inst.dataset.node_ids:
        picks = reference.integers(len(wind), size=3)
        assert inst.res_profiles[node] == tuple(wind[int(i)] for i in picks)


def test_tep_digest_tracks_content(small_pool):
    inst = tep_instance_for(20220101, 2, 0, 3, small_pool)
    assert inst.digest() == tep_instance_for(20220101, 2, 0, 3, small_pool).digest()
    assert inst.digest() == hashlib.sha256(inst.to_canonical_json().encode()).hexdigest()
    assert inst.digest() != tep_instance_for(20220102, 2, 0, 3, small_pool).digest()
