"""Batch manifest: one CSV row per (frame, target) output or failure."""

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import List

from ..errors import ParseError
from .schemas import ManifestRow

MANIFEST_COLUMNS = list(ManifestRow.model_fields)
MANIFEST_NAME = "manifest.csv"


@dataclass
class FrameManifest:
    rows: List[ManifestRow] = field(default_factory=list)

    def add(self, row: ManifestRow) -> None:
        self.rows.append(row)

    def sorted_rows(self) -> List[ManifestRow]:
        return sorted(self.rows, key=lambda r: r.sort_key)

    @property
    def failed(self) -> List[ManifestRow]:
        return [r for r in self.rows if r.status == "failed"]

    @property
    def succeeded(self) -> List[ManifestRow]:
        return [r for r in self.rows if r.status == "ok"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def __len__(self) -> int:
        return len(self.rows)


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def write_manifest(manifest: FrameManifest, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(MANIFEST_COLUMNS)
        for row in manifest.sorted_rows():
            values = row.model_dump()
            writer.writerow([_format(values[c]) for c in MANIFEST_COLUMNS])
    return path


def read_manifest(path) -> FrameManifest:
    path = Path(path)
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != MANIFEST_COLUMNS:
            raise ParseError(f"unexpected manifest header {reader.fieldnames}", line=1, path=str(path))
        rows = []
        for line_no, record in enumerate(reader, start=2):
            try:
                rows.append(ManifestRow(**{k: (v if v != "" else None) if k.startswith("ground_") else v
                                           for k, v in record.items()}))
            except ValueError as e:
                raise ParseError(str(e), line=line_no, path=str(path)) from None
    return FrameManifest(rows)
