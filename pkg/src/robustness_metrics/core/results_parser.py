"""Results file parser for cross-domain evaluation scores."""

from __future__ import annotations

import csv
import json
import logging
import math
from collections.abc import Iterator
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import ValidationError

from robustness_metrics.config.analysis_config import ScoreScale
from robustness_metrics.core.errors import (
    DuplicateKeyError,
    EmptyInputError,
    SchemaError,
    ScoreOutOfRangeError,
)
from robustness_metrics.models.performance import RunRecord

logger = logging.getLogger(__name__)

COLUMNS = ("task", "model", "source", "target", "score")
SCORE_LOW = 0.0
SCORE_HIGH = 100.0


class ResultsFormat(str, Enum):
    """Layout of a results file."""

    CSV = "csv"
    JSONL = "jsonl"


class ResultsParser:
    """Parser for run results, one (task, model, source, target, score) per row.

    CSV files must start with the header ``task,model,source,target,score``.
    JSONL files hold one object with those five fields per line. Fields are
    trimmed, blank lines are skipped, and parsing is all-or-nothing: any bad
    row raises before a record list is returned.
    """

    def __init__(
        self,
        score_scale: ScoreScale = ScoreScale.PERCENT,
        allow_out_of_range: bool = False,
    ):
        """Initialize the results parser.

        Args:
            score_scale: PERCENT keeps scores, UNIT multiplies them by 100
            allow_out_of_range: Accept scores outside [0, 100]
        """
        self.score_scale = ScoreScale(score_scale)
        self.allow_out_of_range = allow_out_of_range

    def parse(
        self,
        path: Union[str, Path],
        results_format: Optional[ResultsFormat] = None,  # noqa: UP045
    ) -> list[RunRecord]:
        """Parse run records from a results file.

        Args:
            path: Results file
            results_format: CSV or JSONL (inferred from the suffix if None)

        Returns:
            Records in file order

        Raises:
            FileNotFoundError: File does not exist
            SchemaError: Malformed header, row or score
            ScoreOutOfRangeError: Score outside [0, 100]
            DuplicateKeyError: A key appears twice
            EmptyInputError: No records
        """
        file_path = Path(path)
        if not file_path.exists():
            raise FileNotFoundError(f"Results file not found: {file_path}")
        if not file_path.is_file():
            raise SchemaError(0, f"Path is not a file: {file_path}")

        if results_format is None:
            results_format = (
                ResultsFormat.JSONL
                if file_path.suffix.lower() in (".jsonl", ".ndjson")
                else ResultsFormat.CSV
            )

        try:
            with file_path.open(newline="", encoding="utf-8") as f:
                if ResultsFormat(results_format) is ResultsFormat.JSONL:
                    rows = list(self._jsonl_rows(f))
                else:
                    rows = list(self._csv_rows(f))
        except UnicodeDecodeError as e:
            raise SchemaError(0, f"file is not valid UTF-8: {e.reason}") from e

        records = self._build_records(rows)
        if not records:
            raise EmptyInputError(f"no records in {file_path}")
        logger.info(f"Parsed {len(records)} records from {file_path}")
        return records

    def _csv_rows(self, f: Any) -> Iterator[tuple[int, dict[str, str]]]:
        reader = csv.reader(f)
        header = None
        for row in reader:
            if not any(cell.strip() for cell in row):
                continue
            cells = [cell.strip() for cell in row]
            if header is None:
                header = tuple(cells)
                if header != COLUMNS:
                    raise SchemaError(
                        reader.line_num, f"header must be exactly {','.join(COLUMNS)}"
                    )
                continue
            if len(cells) != len(COLUMNS):
                raise SchemaError(
                    reader.line_num, f"expected {len(COLUMNS)} fields, got {len(cells)}"
                )
            yield reader.line_num, dict(zip(COLUMNS, cells))
        if header is None:
            raise SchemaError(1, f"missing header {','.join(COLUMNS)}")

    def _jsonl_rows(self, f: Any) -> Iterator[tuple[int, dict[str, str]]]:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaError(line_number, f"invalid JSON: {e.msg}") from e
            if not isinstance(obj, dict):
                raise SchemaError(line_number, "expected a JSON object")
            missing = [column for column in COLUMNS if column not in obj]
            if missing:
                raise SchemaError(line_number, f"missing field(s): {', '.join(missing)}")
            row = {}
            for column in COLUMNS:
                value = obj[column]
                if isinstance(value, bool) or value is None:
                    raise SchemaError(line_number, f"invalid {column}: {value!r}")
                row[column] = str(value).strip()
            yield line_number, row

    def _parse_score(self, line: int, raw: str) -> float:
        try:
            score = float(raw)
        except ValueError as e:
            raise SchemaError(line, f"score {raw!r} is not a number") from e
        if not math.isfinite(score):
            raise SchemaError(line, f"score {raw!r} is not finite")
        if self.score_scale is ScoreScale.UNIT:
            score *= 100.0
        if not self.allow_out_of_range and not SCORE_LOW <= score <= SCORE_HIGH:
            raise ScoreOutOfRangeError(line, score, SCORE_LOW, SCORE_HIGH)
        return score

    def _build_records(self, rows: list[tuple[int, dict[str, str]]]) -> list[RunRecord]:
        records = []
        first_seen: dict[tuple[str, str, str, str], int] = {}
        for line, row in rows:
            for column in COLUMNS[:4]:
                if not row[column]:
                    raise SchemaError(line, f"empty {column}")
            score = self._parse_score(line, row["score"])
            try:
                record = RunRecord(
                    task=row["task"],
                    model=row["model"],
                    source=row["source"],
                    target=row["target"],
                    score=score,
                )
            except ValidationError as e:
                raise SchemaError(line, str(e.errors()[0]["msg"])) from e
            if record.key in first_seen:
                raise DuplicateKeyError(record.key, (first_seen[record.key], line))
            first_seen[record.key] = line
            records.append(record)
        return records


def parse_results(
    path: Union[str, Path],
    results_format: Optional[ResultsFormat] = None,  # noqa: UP045
    score_scale: ScoreScale = ScoreScale.PERCENT,
    allow_out_of_range: bool = False,
) -> list[RunRecord]:
    """Parse a results file with a one-off ResultsParser."""
    parser = ResultsParser(score_scale=score_scale, allow_out_of_range=allow_out_of_range)
    return parser.parse(path, results_format)
