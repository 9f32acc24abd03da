import numpy as np
import pytest

from src.core.trace import TieClass
from src.qc.study import STUDY_COLUMNS, STUDY_REPORT_NAME, StudyReport, mean_score, plan_study, training_combination_study
from src.util.errors import StudyError
from src.welltie.selection import SelectionPolicy


@pytest.fixture
def pairs(dataset):
    _, _, pairs = dataset
    return pairs


@pytest.fixture
def held_out(pairs):
    return sorted(p.well_id for p in pairs if p.tie_class == TieClass.GOOD)[0]


def test_plan_resolves_every_policy(pairs, held_out):
    policies = [SelectionPolicy(exclude_wells=(held_out,), seed=s) for s in range(3)]
    selections = plan_study(pairs, policies, held_out)
    assert len(selections) == 3
    assert all(held_out not in s.train_ids and len(s.train) == 4 for s in selections)


def test_plan_rejects_bad_studies(pairs, held_out):
    with pytest.raises(StudyError):
        plan_study(pairs, [], held_out)
    with pytest.raises(StudyError, match="not in the dataset"):
        plan_study(pairs, [SelectionPolicy()], "W99")
    every_good = sum(p.tie_class == TieClass.GOOD for p in pairs)
    with pytest.raises(StudyError, match="held-out"):
        plan_study(pairs, [SelectionPolicy(n_good=every_good, n_fair=0)], held_out)


def test_study_trains_one_model_per_policy(tmp_path, pairs, held_out, tiny_train_config):
    """Test outputs, scores and the written report of a two-policy study"""
    policies = [SelectionPolicy(exclude_wells=(held_out,), seed=0), SelectionPolicy(exclude_wells=(held_out,), seed=1)]
    report = training_combination_study(pairs, policies, tiny_train_config, held_out, tmp_path / "study", realizations=2)

    assert report.held_out_well == held_out
    assert len(report.outputs) == len(report.blind_scores) == 2
    assert all(len(ids) == 4 for ids in report.train_ids)
    assert all(len(trace) == 512 for trace in report.outputs)
    assert list(report.pairwise_rms) == [(0, 1)]
    assert report.pairwise_rms[(0, 1)] >= 0.0
    assert (tmp_path / "study" / "policy00").is_dir()
    assert (tmp_path / "study" / "policy01").is_dir()

    lines = (tmp_path / "study" / STUDY_REPORT_NAME).read_text().splitlines()
    assert lines[0] == ",".join(STUDY_COLUMNS)
    assert len(lines) == 1 + 2 + 1
    assert lines[-1].startswith("pairwise_rms,0,1,")


def _report(scores):
    return StudyReport(
        held_out_well="W01",
        policies=[SelectionPolicy()] * len(scores),
        train_ids=[[] for _ in scores],
        outputs=[],
        blind_scores=scores,
        pairwise_rms={},
    )


def test_mean_score_over_seeds():
    reports = [_report([0.2, None]), _report([0.4, None]), _report([None, None])]
    assert mean_score(reports, 0) == pytest.approx(0.3)
    with pytest.raises(StudyError):
        mean_score(reports, 1)


def test_report_frame_types():
    report = _report([0.5, 0.25])
    report.pairwise_rms = {(0, 1): 0.125}
    frame = report.frame()
    assert list(frame["kind"]) == ["blind_validation", "blind_validation", "pairwise_rms"]
    assert frame["policy_b"].isna().sum() == 2
    assert frame["policy_b"].iloc[-1] == 1
    np.testing.assert_allclose(frame["value"], [0.5, 0.25, 0.125])
