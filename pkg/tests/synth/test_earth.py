import numpy as np
import pytest

from src.core.trace import TraceKind
from src.synth.earth import (
    SAND_IMPEDANCE,
    SHALE_IMPEDANCE,
    THICKNESS_MS,
    EarthModel,
    FaciesKind,
    gen_earth_model,
    reflectivity_series,
)
from src.util.errors import ModelError


@pytest.mark.parametrize("facies", list(FaciesKind))
def test_generated_models_cover_the_duration(facies):
    """Test thickness ranges and total span for every facies"""
    model = gen_earth_model(facies, seed=7)
    low, high = THICKNESS_MS[facies]
    assert model.facies == facies
    assert model.total_thickness_ms >= 1024.0
    assert np.all((model.thicknesses >= low) & (model.thicknesses <= high))
    # the last layer is the one that crossed the duration
    assert model.total_thickness_ms - model.thicknesses[-1] < 1024.0


def test_blocky_sand_layer_count():
    model = gen_earth_model(FaciesKind.BLOCKY_SAND, seed=7)
    assert 1024.0 / 150.0 < len(model.layers) <= 1024.0 / 40.0 + 1


def test_sand_and_shale_alternate():
    model = gen_earth_model(FaciesKind.THIN_BEDS, seed=3)
    is_sand = [SAND_IMPEDANCE[0] <= z <= SAND_IMPEDANCE[1] for z in model.impedances]
    is_shale = [SHALE_IMPEDANCE[0] <= z <= SHALE_IMPEDANCE[1] for z in model.impedances]
    assert all(a != b for a, b in zip(is_sand, is_shale))
    assert all(a != b for a, b in zip(is_sand, is_sand[1:]))


def test_shale_facies_has_low_contrast():
    model = gen_earth_model(FaciesKind.SHALE, seed=11)
    r = reflectivity_series(model, 2.0, 512).samples
    assert np.max(np.abs(r)) <= 0.05 + 1e-12


def test_models_are_seeded():
    a = gen_earth_model(FaciesKind.BLOCKY_SAND, seed=1)
    assert a == gen_earth_model(FaciesKind.BLOCKY_SAND, seed=1)
    assert a != gen_earth_model(FaciesKind.BLOCKY_SAND, seed=2)
    assert gen_earth_model("shale", seed=1).facies == FaciesKind.SHALE


def test_reflectivity_of_a_hand_built_model():
    """Test coefficient value and placement at the nearest sample"""
    model = EarthModel(layers=((10.0, 1000.0), (10.0, 3000.0), (20.0, 3000.0)), facies=FaciesKind.SHALE)
    np.testing.assert_array_equal(model.interface_times_ms(), [10.0, 20.0])

    r = reflectivity_series(model, 2.0, 15, trace_id="hand")
    assert r.kind == TraceKind.LOG
    assert r.id == "hand"
    expected = np.zeros(15)
    expected[5] = 0.5
    np.testing.assert_allclose(r.samples, expected, atol=1e-15)


def test_interfaces_beyond_the_trace_are_dropped():
    model = EarthModel(layers=((10.0, 1000.0), (40.0, 3000.0), (10.0, 1000.0)), facies=FaciesKind.SHALE)
    r = reflectivity_series(model, 2.0, 20)
    assert np.count_nonzero(r.samples) == 1


def test_model_validation():
    with pytest.raises(ModelError):
        EarthModel(layers=((10.0, 1000.0),), facies=FaciesKind.SHALE)
    with pytest.raises(ModelError):
        EarthModel(layers=((10.0, 1000.0), (-1.0, 2000.0)), facies=FaciesKind.SHALE)
    with pytest.raises(ModelError):
        EarthModel(layers=((10.0, 1000.0), (5.0, 0.0)), facies=FaciesKind.SHALE)


def test_reflectivity_needs_a_long_enough_model():
    model = EarthModel(layers=((10.0, 1000.0), (10.0, 3000.0)), facies=FaciesKind.SHALE)
    with pytest.raises(ModelError):
        reflectivity_series(model, 2.0, 11)


def test_interfaces_in_one_sample_are_merged():
    """Test that a sub-sample layer gives one coefficient from the outer impedances"""
    # 1 -> 9 -> 81 would sum to 0.8 + 0.8 if the two coefficients were added
    model = EarthModel(layers=((10.0, 1.0), (0.4, 9.0), (100.0, 81.0)), facies=FaciesKind.SHALE)
    r = reflectivity_series(model, 2.0, 50).samples
    assert r[5] == pytest.approx(80.0 / 82.0)
    assert np.count_nonzero(r) == 1
    assert np.max(np.abs(r)) < 1.0


def test_merged_interfaces_that_cancel_leave_no_spike():
    model = EarthModel(layers=((10.0, 1000.0), (0.6, 3000.0), (100.0, 1000.0)), facies=FaciesKind.SHALE)
    r = reflectivity_series(model, 2.0, 50).samples
    np.testing.assert_array_equal(r, np.zeros(50))
