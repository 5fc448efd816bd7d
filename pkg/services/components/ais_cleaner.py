"""
AisCleaner component for reading and cleaning AIS records.
Extracted from AisPipelineService for Single Responsibility Principle.
"""
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple, Union

import pandas as pd

from core import constants
from core.utils import dataset_epoch
from models.voyage import CleaningReport, GeofenceParams
from services.ais.parser import (
    annotate,
    filter_ship_types,
    parse_and_clean,
    read_ais_csv,
    read_metadata_csv,
    split_by_vessel,
)


class AisCleaner:
    """
    Turns raw AIS rows into per-vessel series ready for detection.

    Cleaning and the ship-type filter share one CleaningReport; annotation
    adds hours since the dataset epoch and distances to the port centre.
    """

    def __init__(self, allowed_ship_types: Optional[Iterable[str]] = None):
        if allowed_ship_types is None:
            allowed_ship_types = constants.DEFAULT_ALLOWED_SHIP_TYPES
        self.allowed_ship_types = list(allowed_ship_types)

    def read(
        self,
        input_path: Union[str, Path],
        metadata_path: Optional[Union[str, Path]] = None,
    ) -> Tuple[pd.DataFrame, Optional[pd.DataFrame]]:
        """
        Raises:
            InputFileException: unreadable file or missing columns
        """
        raw = read_ais_csv(input_path)
        metadata = read_metadata_csv(metadata_path) if metadata_path else None
        return raw, metadata

    def clean(
        self,
        raw: pd.DataFrame,
        metadata: Optional[pd.DataFrame] = None,
    ) -> Tuple[pd.DataFrame, CleaningReport]:
        """Coerce and order the records, then drop vessels of other ship types."""
        frame, report = parse_and_clean(raw)
        frame, removed = filter_ship_types(frame, metadata, self.allowed_ship_types)
        report.type_filtered_vessels = removed
        return frame, report

    def split(self, frame: pd.DataFrame, params: GeofenceParams) -> Tuple[Dict[str, pd.DataFrame], datetime]:
        """Annotated per-vessel series and the epoch their hours count from."""
        epoch = dataset_epoch(frame["timestamp"])
        return split_by_vessel(annotate(frame, params, epoch)), epoch
