"""
Unit tests for the counterfactual slack analysis and its report files.
"""

import json

import pytest

from core.exceptions import EmptyResultException, InvariantViolationException, ProfileException, ReportException
from models.game import TypeProfile
from services.counterfactual_service import (
    merge_reports,
    run_slack_analysis,
    split_windows,
    types_from_observations,
    verify_green_realizability,
)
from services.equilibrium import slack_aggregate, slack_vector
from services.report.exporter import ReportExporter, load_slack_report


@pytest.fixture
def worked_voyages(make_voyage):
    return [make_voyage("C", 3.0), make_voyage("A", 0.0), make_voyage("B", 0.5)]


class TestTypesFromObservations:
    """Test suite for building type profiles from voyages"""

    def test_sorted_by_entry(self, make_voyage):
        window = types_from_observations([make_voyage(v, t) for v, t in [("x", 5), ("y", 3), ("z", 9)]], 1.0)
        assert window.types == [3.0, 5.0, 9.0]
        assert window.vessel_ids == ["y", "x", "z"]
        assert window.t0 == 3.0

    def test_equal_entries_break_by_vessel_id(self, make_voyage):
        window = types_from_observations([make_voyage("B", 1.0), make_voyage("A", 1.0)], 1.0)
        assert window.vessel_ids == ["A", "B"]

    def test_explicit_boundary(self, worked_voyages):
        assert types_from_observations(worked_voyages, 1.0, t0=-2.0).type_profile().t0 == -2.0

    def test_empty(self):
        with pytest.raises(EmptyResultException):
            types_from_observations([], 1.0)

    def test_bad_gamma(self, worked_voyages):
        with pytest.raises(ProfileException):
            types_from_observations(worked_voyages, 0.0)


class TestSlackAnalysis:
    """Test suite for CounterfactualService slack analysis"""

    def test_worked_example(self, worked_voyages):
        report = run_slack_analysis(types_from_observations(worked_voyages, 1.0))
        assert report.slacks == pytest.approx([0.0, 0.5, 0.0])
        assert [e.label for e in report.entries] == ["A", "B", "C"]
        assert all(e.window == "all" for e in report.entries)
        assert report.total == pytest.approx(0.5)

    def test_matches_bare_slack_vector(self, worked_voyages):
        window = types_from_observations(worked_voyages, 1.0)
        bare = slack_vector(TypeProfile.from_types([0.0, 0.5, 3.0], 1.0))
        assert run_slack_analysis(window).slacks == bare.slacks

    def test_sparse_entries_have_no_slack(self, make_voyage):
        voyages = [make_voyage(str(k), 10.0 * k) for k in range(5)]
        assert run_slack_analysis(types_from_observations(voyages, 4.0)).slacks == [0.0] * 5

    def test_queue_builds_slack(self, make_voyage):
        voyages = [make_voyage(str(k), float(k)) for k in range(4)]
        assert run_slack_analysis(types_from_observations(voyages, 4.0)).slacks == pytest.approx([0, 1, 1, 9])

    def test_single_voyage(self, make_voyage):
        report = run_slack_analysis(types_from_observations([make_voyage("A", 7.0)], 4.0))
        assert report.slacks == [0.0]
        assert report.mean == 0.0 and report.median == 0.0


class TestWindows:
    """Test suite for window splitting"""

    def test_no_split(self, worked_voyages):
        windows = split_windows(worked_voyages, 1.0)
        assert len(windows) == 1 and windows[0].label == "all"

    def test_daily_split_resets_backlog(self, make_voyage):
        voyages = [make_voyage("A", 1.0), make_voyage("B", 2.0), make_voyage("C", 25.0), make_voyage("D", 26.0)]
        windows = split_windows(voyages, 4.0, "day")
        assert [w.label for w in windows] == ["day-0", "day-1"]
        assert [w.t0 for w in windows] == [1.0, 25.0]

        merged = merge_reports([run_slack_analysis(w) for w in windows])
        assert merged.count == 4
        assert [e.window for e in merged.entries] == ["day-0", "day-0", "day-1", "day-1"]
        assert merged.total == pytest.approx(sum(merged.slacks))

    def test_weekly_split(self, make_voyage):
        voyages = [make_voyage("A", 1.0), make_voyage("B", 200.0)]
        assert [w.label for w in split_windows(voyages, 4.0, "week")] == ["week-0", "week-1"]

    def test_unknown_mode(self, worked_voyages):
        with pytest.raises(ProfileException):
            split_windows(worked_voyages, 1.0, "month")

    def test_merge_nothing(self):
        assert merge_reports([]).count == 0


class TestGreenRealizability:
    """Test suite for green-profile realizability checks"""

    def test_holds_on_worked_window(self, worked_voyages):
        verify_green_realizability(types_from_observations(worked_voyages, 1.0))

    def test_violation_reported(self, worked_voyages, mocker):
        mocker.patch("services.counterfactual_service.completion_times", side_effect=[[1.0, 2.0], [1.0, 2.5]])
        with pytest.raises(InvariantViolationException) as exc_info:
            verify_green_realizability(types_from_observations(worked_voyages, 1.0))
        assert exc_info.value.details["position"] == 2


class TestReportExport:
    """Test suite for report export"""

    def test_files_and_round_trip(self, tmp_path, worked_voyages):
        report = run_slack_analysis(types_from_observations(worked_voyages, 1.0))
        summary = slack_aggregate(report)
        written = ReportExporter(tmp_path).export_report(report, summary, extras={"gamma": 1.0})

        assert {p.name for p in written} == {"slack.csv", "summary.json"}
        assert (tmp_path / "histograms" / "slack.csv").exists()
        assert load_slack_report(tmp_path / "slack.csv") == report

        payload = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
        assert payload["slack"]["total"] == pytest.approx(0.5)
        assert payload["count_positive"] == 1
        assert payload["gamma"] == 1.0

    def test_three_rows(self, tmp_path, worked_voyages):
        report = run_slack_analysis(types_from_observations(worked_voyages, 1.0))
        ReportExporter(tmp_path).export_report(report, slack_aggregate(report))
        lines = (tmp_path / "slack.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "vessel_id,window,position,t_entry,slack,predecessor_completion"
        assert len(lines) == 4

    def test_empty_report(self, tmp_path):
        from models.equilibrium import SlackReport

        report = SlackReport()
        ReportExporter(tmp_path).export_report(report, slack_aggregate(report))
        payload = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
        assert payload["slack"]["count"] == 0
        histogram = (tmp_path / "histograms" / "slack.csv").read_text(encoding="utf-8").splitlines()
        assert histogram == ["bin_left,count"]

    def test_unwritable_destination(self, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        with pytest.raises(ReportException):
            ReportExporter(blocker / "out").write_json({}, "summary.json")
