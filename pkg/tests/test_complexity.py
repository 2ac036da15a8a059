import pytest

from app.configs.network_profiles import casia_b_profile, desk_profile
from app.network.skeleton_graph import build_skeleton
from app.services.complexity import ComplexityService, estimate_flops, flop_terms
from app.services.model_factory import ModelFactoryService
from app.utils.model_variant_enum import FilterMode, ModelVariant

# published reference figures: parameters in millions, GFLOPs at 60 frames
REFERENCE = {
    ModelVariant.BASELINE: (2.05, 0.68),
    ModelVariant.JSFL_ONLY: (1.07, 0.30),
    ModelVariant.CAG_JOINT: (1.17, 0.38),
    ModelVariant.CAG_TWO_STREAM: (2.34, 0.75),
}

PARAMETERS = {
    ModelVariant.BASELINE: 2_320_324,
    ModelVariant.JSFL_ONLY: 1_195_384,
    ModelVariant.VATL_ONLY: 2_339_828,
    ModelVariant.CAG_JOINT: 1_214_888,
    ModelVariant.CAG_TWO_STREAM: 2_410_272,
}

MACS = {
    ModelVariant.BASELINE: 773_738_856,
    ModelVariant.JSFL_ONLY: 297_461_416,
    ModelVariant.CAG_JOINT: 307_171_505,
    ModelVariant.CAG_TWO_STREAM: 604_632_921,
}

VATL_PARAMETERS = 19_504
VATL_MACS = 9_710_089

@pytest.fixture(scope="module")
def casia_b():
    return casia_b_profile()

@pytest.fixture(scope="module")
def service(casia_b):
    return ComplexityService(casia_b)

@pytest.mark.parametrize("variant", list(PARAMETERS))
def test_parameter_counts(service, variant):
    assert service.count_params(variant) == PARAMETERS[variant]

@pytest.mark.parametrize("variant", list(MACS))
def test_multiply_accumulates(casia_b, variant):
    assert estimate_flops(casia_b, 17, 60, variant) == MACS[variant]

@pytest.mark.parametrize("variant", list(REFERENCE))
def test_within_reference_bands(service, casia_b, variant):
    millions, gflops = REFERENCE[variant]
    assert abs(service.count_params(variant) / 1e6 - millions) <= 0.20 * millions
    assert abs(estimate_flops(casia_b, 17, 60, variant) / 1e9 - gflops) <= 0.25 * gflops

def test_two_stream_shares_one_view_module(service, casia_b):
    joint_stream = service.count_params(ModelVariant.JSFL_ONLY)
    assert service.count_params(ModelVariant.CAG_TWO_STREAM) == 2 * joint_stream + VATL_PARAMETERS
    assert service.count_params(ModelVariant.VATL_ONLY) - service.count_params(ModelVariant.BASELINE) == VATL_PARAMETERS
    assert estimate_flops(casia_b, 17, 60, ModelVariant.CAG_TWO_STREAM) == 2 * MACS[ModelVariant.JSFL_ONLY] + VATL_MACS

def test_doubling_frames_doubles_temporal_terms(casia_b):
    short = flop_terms(casia_b, 17, 60, ModelVariant.CAG_TWO_STREAM)
    long = flop_terms(casia_b, 17, 120, ModelVariant.CAG_TWO_STREAM)
    assert [(t.module, t.operation) for t in short] == [(t.module, t.operation) for t in long]
    for a, b in zip(short, long):
        assert b.macs == (2 * a.macs if a.temporal_linear else a.macs), (a.module, a.operation)

def test_global_filters_cost_less_than_adaptive(casia_b):
    adaptive = estimate_flops(casia_b, 17, 60, ModelVariant.CAG_JOINT)
    shared = casia_b.model_copy(update={"jsfl": casia_b.jsfl.model_copy(update={"filter_mode": FilterMode.GLOBAL})})
    static = casia_b.model_copy(update={"jsfl": casia_b.jsfl.model_copy(update={"filter_mode": FilterMode.STATIC})})
    assert estimate_flops(static, 17, 60, ModelVariant.CAG_JOINT) < estimate_flops(shared, 17, 60, ModelVariant.CAG_JOINT) < adaptive

def test_complexity_table(casia_b):
    response = ComplexityService(casia_b).complexity_table([ModelVariant.BASELINE, "cag-joint"], frames=60, flops_per_mac=2)
    assert response.status
    rows = response.data["rows"]
    assert [row.variant for row in rows] == ["baseline", "cag-joint"]
    assert rows[0].macs == MACS[ModelVariant.BASELINE]
    assert rows[0].gflops == pytest.approx(2 * MACS[ModelVariant.BASELINE] / 1e9)

def test_parameter_count_matches_built_model():
    config = desk_profile()
    model = ModelFactoryService().build_model(config)
    assert ComplexityService(config).count_params() == model.num_parameters()
    assert model.num_parameters() == sum(p.size for p in model.parameters())

def test_skeleton_size_enters_the_estimate(casia_b):
    assert build_skeleton("body18").joint_count == 18
    assert estimate_flops(casia_b, 18, 60, ModelVariant.BASELINE) > estimate_flops(casia_b, 17, 60, ModelVariant.BASELINE)
