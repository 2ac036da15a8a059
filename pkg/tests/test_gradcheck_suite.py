from app.services.gradcheck_suite import GradcheckService, network_case

def test_operator_suite_passes():
    response = GradcheckService(seed=0).run(include_network=False)
    assert response.status, response.message
    names = {report.name for report in response.data["reports"]}
    assert {"matmul", "batch_norm", "depthwise_temporal_conv_stride2", "cag_block", "circle_loss"} <= names
    assert all(report.checked_coordinates > 0 for report in response.data["reports"])

def test_network_case_is_listed_only_on_request():
    service = GradcheckService(seed=0)
    assert "tiny_cag_network" not in {case.name for case in service.cases(include_network=False)}
    assert service.cases(include_network=True)[-1].name == "tiny_cag_network"

def test_network_loss_passes():
    report = GradcheckService(seed=1).check(network_case(seed=1))
    assert report.passed, report.max_relative_error
    assert report.checked_coordinates > 0
