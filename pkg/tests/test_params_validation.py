import pytest

from contourseg.click_sim import PairSamplingParams, SimulationParams
from contourseg.evaluation import EvalConfig
from contourseg.geometry import CropParams
from contourseg.predictor import EncodingParams


@pytest.mark.parametrize("kwargs", [
    {"expansion_ratio": 0.9},
    {"min_diameter": 0.0},
    {"target_size": 16},
])
def test_crop_params_invariants(kwargs):
    with pytest.raises(ValueError):
        CropParams(**kwargs)


@pytest.mark.parametrize("kwargs", [
    {"ratio_clamp": (0.0, 1.0)},
    {"ratio_clamp": (0.9, 0.8)},
    {"ratio_clamp": (0.9, 1.2)},
    {"ratio_std": -0.1},
])
def test_pair_params_invariants(kwargs):
    with pytest.raises(ValueError):
        PairSamplingParams(**kwargs)


@pytest.mark.parametrize("kwargs", [
    {"n_add_range": (-1, 4)},
    {"n_add_range": (5, 2)},
    {"n_add_range": (0, 64)},
    {"noise_std": -1},
    {"corrective_batch": 0},
])
def test_sim_params_invariants(kwargs):
    with pytest.raises(ValueError):
        SimulationParams(**kwargs)


@pytest.mark.parametrize("kwargs", [
    {"sigma": 0.0},
    {"binarize_threshold": 0.0},
    {"binarize_threshold": 1.0},
])
def test_encoding_params_invariants(kwargs):
    with pytest.raises(ValueError):
        EncodingParams(**kwargs)


@pytest.mark.parametrize("kwargs", [
    {"iou_threshold": 0.0},
    {"iou_threshold": 1.0},
    {"max_clicks": 1},
])
def test_eval_config_invariants(kwargs):
    with pytest.raises(ValueError):
        EvalConfig(**kwargs)


def test_defaults_are_valid():
    CropParams()
    PairSamplingParams()
    SimulationParams()
    EncodingParams()
    EvalConfig()
