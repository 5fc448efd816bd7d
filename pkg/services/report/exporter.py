"""
ReportExporter - writes plot-ready CSV and JSON reports.
All files are UTF-8, comma-separated, with headers.
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd

from core import constants
from core.exceptions import InputFileException, ReportException
from core.logger import get_logger
from models.equilibrium import DistributionSummary, EquilibriumInterval, SlackEntry, SlackReport
from models.game import StrategyProfile
from models.simulation import BestResponseScan, DeviationCell
from services.equilibrium.slack import build_slack_report

logger = get_logger(__name__)

SLACK_COLUMNS = ["vessel_id", "window", "position", "t_entry", "slack", "predecessor_completion"]
HISTOGRAM_COLUMNS = ["bin_left", "count"]


def summary_payload(summary: DistributionSummary) -> Dict[str, Any]:
    """Aggregates of a distribution without its histogram rows."""
    return summary.model_dump(exclude={"histogram"})


class ReportExporter:
    """
    Writes report files below one output directory.

    Usage:
        exporter = ReportExporter("output")
        exporter.export_report(report, slack_summary, waiting_summary, extras)
    """

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = Path(out_dir)

    def _write_frame(self, frame: pd.DataFrame, name: Union[str, Path]) -> Path:
        target = self.out_dir / name
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(target, index=False, lineterminator="\n")
        except OSError as e:
            raise ReportException("Cannot write report file", {"path": str(target), "error": str(e)}) from e
        return target

    def write_json(self, payload: Dict[str, Any], name: str) -> Path:
        target = self.out_dir / name
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        except OSError as e:
            raise ReportException("Cannot write report file", {"path": str(target), "error": str(e)}) from e
        return target

    def write_histogram(self, summary: DistributionSummary, name: str) -> Path:
        rows = [{"bin_left": b.left, "count": b.count} for b in summary.histogram]
        return self._write_frame(pd.DataFrame(rows, columns=HISTOGRAM_COLUMNS), Path(constants.HISTOGRAM_DIR) / name)

    def export_report(
        self,
        report: SlackReport,
        slack_summary: DistributionSummary,
        waiting_summary: Optional[DistributionSummary] = None,
        extras: Optional[Dict[str, Any]] = None,
    ) -> List[Path]:
        """
        Write slack.csv, summary.json and the slack/waiting histograms.

        Raises:
            ReportException: destination not writable
        """
        rows = [
            {
                "vessel_id": e.label,
                "window": e.window,
                "position": e.player + 1,
                "t_entry": e.type_time,
                "slack": e.slack,
                "predecessor_completion": e.predecessor_completion,
            }
            for e in report.entries
        ]
        written = [self._write_frame(pd.DataFrame(rows, columns=SLACK_COLUMNS), constants.SLACK_FILE)]

        payload: Dict[str, Any] = {
            "slack": summary_payload(slack_summary),
            "count_positive": report.count_positive,
        }
        if waiting_summary is not None:
            payload["waiting"] = summary_payload(waiting_summary)
        payload.update(extras or {})
        written.append(self.write_json(payload, constants.SUMMARY_FILE))

        written.append(self.write_histogram(slack_summary, "slack.csv"))
        if waiting_summary is not None:
            written.append(self.write_histogram(waiting_summary, "waiting.csv"))

        logger.info("[REPORT] Slack report written", context={"dir": str(self.out_dir), "rows": len(rows)})
        return written

    def export_equilibrium(
        self,
        intervals: Sequence[EquilibriumInterval],
        sftw: StrategyProfile,
        green: StrategyProfile,
        sftw_starts: Sequence[float],
        green_starts: Sequence[float],
        payload: Dict[str, Any],
    ) -> List[Path]:
        """Write equilibrium.json plus intervals.csv and schedule.csv for plotting."""
        interval_rows = [
            {
                "player": iv.player + 1,
                "type": sftw.arrivals[iv.player],
                "lower": iv.lower,
                "upper": iv.upper,
                "upper_closed": iv.upper_closed,
                "is_singleton": iv.is_singleton,
                "theta": iv.theta,
                "green_arrival": green.arrivals[iv.player],
            }
            for iv in intervals
        ]
        schedule_rows = []
        for label, profile, starts in (("sftw", sftw, sftw_starts), ("green", green, green_starts)):
            for i, start in enumerate(starts):
                schedule_rows.append(
                    {
                        "profile": label,
                        "player": i + 1,
                        "arrival": profile.arrivals[i],
                        "service_start": start,
                        "completion": start + profile.gamma,
                    }
                )
        return [
            self.write_json(payload, constants.EQUILIBRIUM_FILE),
            self._write_frame(pd.DataFrame(interval_rows), constants.INTERVALS_FILE),
            self._write_frame(pd.DataFrame(schedule_rows), constants.SCHEDULE_FILE),
        ]

    def export_deviation_table(self, cells: Sequence[DeviationCell]) -> Path:
        rows = [
            {
                "n": c.n,
                "gamma": c.gamma,
                "shift": c.shift,
                "window_low": c.window[0],
                "window_high": c.window[1],
                "gain": c.gain.mean,
                "half_width_95": c.gain.half_width_95,
                "upper_95": c.gain.upper,
                "non_positive_at_95": c.non_positive_at_95,
                "samples": c.gain.samples,
                "seed": c.gain.seed,
            }
            for c in cells
        ]
        return self._write_frame(pd.DataFrame(rows), constants.DEVIATION_FILE)

    def export_scan(self, scan: BestResponseScan) -> Path:
        rows = [
            {
                "player": scan.player + 1,
                "own_type": scan.own_type,
                "arrival": row.arrival,
                "estimate": row.estimate.mean,
                "half_width_95": row.estimate.half_width_95,
            }
            for row in scan.rows
        ]
        return self._write_frame(pd.DataFrame(rows), constants.SCAN_FILE)


def load_slack_report(path: Union[str, Path]) -> SlackReport:
    """
    Rebuild a SlackReport from slack.csv.

    Raises:
        InputFileException: unreadable file or missing columns
    """
    try:
        frame = pd.read_csv(
            path, dtype={"vessel_id": str, "window": str}, keep_default_na=False, float_precision="round_trip"
        )
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InputFileException("Cannot read slack report", {"path": str(path), "error": str(e)}) from e

    missing = [c for c in SLACK_COLUMNS if c not in frame.columns]
    if missing:
        raise InputFileException("Slack report has missing columns", {"path": str(path), "missing": ",".join(missing)})

    entries = [
        SlackEntry(
            player=int(row["position"]) - 1,
            label=row["vessel_id"],
            window=row["window"],
            type_time=float(row["t_entry"]),
            predecessor_completion=float(row["predecessor_completion"]),
            slack=float(row["slack"]),
        )
        for row in frame.to_dict(orient="records")
    ]
    return build_slack_report(entries)
