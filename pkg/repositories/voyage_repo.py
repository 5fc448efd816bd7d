import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd
from pydantic import ValidationError

from core import constants
from core.exceptions import InputFileException, ReportException
from core.logger import get_logger
from core.utils import format_instant, instant_from_hours
from models.voyage import PipelineResult, Voyage

logger = get_logger(__name__)

HOUR_COLUMNS = [
    "tau",
    "t_entry",
    "berth_start",
    "berth_end",
    "service_hours",
    "waiting_hours",
    "sailing_hours",
    "sailing_km",
]
INSTANT_COLUMNS = ["tau", "t_entry", "berth_start", "berth_end"]
VOYAGE_COLUMNS = ["vessel_id"] + HOUR_COLUMNS + [f"{c}_utc" for c in INSTANT_COLUMNS]
REQUIRED_COLUMNS = ["vessel_id"] + HOUR_COLUMNS[:6]


class VoyageRepository:
    """
    File-backed storage for detected voyages and calibration results.

    Usage:
        repo = VoyageRepository("output")
        repo.save_voyages(result.voyages, result.epoch)
        voyages = repo.load_voyages()
    """

    def __init__(self, base_dir: Union[str, Path] = "output"):
        self.base_dir = Path(base_dir)

    def _path(self, path: Optional[Union[str, Path]], default: str) -> Path:
        return Path(path) if path else self.base_dir / default

    def save_voyages(
        self,
        voyages: List[Voyage],
        epoch: datetime,
        path: Optional[Union[str, Path]] = None,
    ) -> Path:
        """Write voyages.csv: hours relative to epoch plus absolute UTC instants."""
        target = self._path(path, constants.VOYAGES_FILE)
        rows = []
        for voyage in voyages:
            row: Dict[str, Any] = {"vessel_id": voyage.vessel_id}
            row.update({c: getattr(voyage, c) for c in HOUR_COLUMNS})
            row.update(
                {f"{c}_utc": format_instant(instant_from_hours(epoch, getattr(voyage, c))) for c in INSTANT_COLUMNS}
            )
            rows.append(row)

        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            pd.DataFrame(rows, columns=VOYAGE_COLUMNS).to_csv(target, index=False, lineterminator="\n")
        except OSError as e:
            raise ReportException("Cannot write voyages", {"path": str(target), "error": str(e)}) from e

        logger.info("[REPORT] Voyages saved", context={"path": str(target), "count": len(voyages)})
        return target

    def load_voyages(self, path: Optional[Union[str, Path]] = None) -> List[Voyage]:
        """
        Read voyages.csv back into Voyage models.

        Raises:
            InputFileException: unreadable file, missing columns or invalid rows
        """
        source = self._path(path, constants.VOYAGES_FILE)
        try:
            frame = pd.read_csv(source, dtype={"vessel_id": str}, float_precision="round_trip")
        except pd.errors.EmptyDataError:
            return []
        except (OSError, pd.errors.ParserError, UnicodeDecodeError) as e:
            raise InputFileException("Cannot read voyages file", {"path": str(source), "error": str(e)}) from e

        missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
        if missing:
            raise InputFileException(
                "Voyages file does not match the expected schema",
                {"path": str(source), "missing": ",".join(missing)},
            )

        voyages = []
        fields = [c for c in ["vessel_id"] + HOUR_COLUMNS if c in frame.columns]
        for index, record in enumerate(frame[fields].to_dict(orient="records")):
            try:
                voyages.append(Voyage(**record))
            except ValidationError as e:
                raise InputFileException(
                    "Invalid voyage row",
                    {"path": str(source), "line": index + 2, "reason": e.errors()[0]["msg"]},
                ) from e
        return voyages

    def save_calibration(
        self,
        result: PipelineResult,
        extras: Optional[Dict[str, Any]] = None,
        path: Optional[Union[str, Path]] = None,
    ) -> Path:
        """Write calibration.json: gamma, event counts, filter tallies and derived ratios."""
        target = self._path(path, constants.CALIBRATION_FILE)
        payload: Dict[str, Any] = {
            "epoch": format_instant(result.epoch),
            "gamma": result.gamma,
            "gamma_source": "override" if result.calibration is None else "calibrated",
            "calibration": result.calibration.model_dump() if result.calibration else None,
            "berth_starts": len(result.berth_starts),
            "voyages": len(result.voyages),
            "tallies": result.report.model_dump(),
        }
        payload.update(extras or {})

        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        except OSError as e:
            raise ReportException("Cannot write calibration", {"path": str(target), "error": str(e)}) from e
        return target

    def load_calibration(self, path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
        source = self._path(path, constants.CALIBRATION_FILE)
        try:
            return json.loads(source.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise InputFileException("Cannot read calibration file", {"path": str(source), "error": str(e)}) from e
