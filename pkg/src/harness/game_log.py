"""
Game logs: JSON lines, one record per line.

Every record carries the schema version `v`, its `type` (header, step, event
or final) and `crc`, the CRC-32 of the record's canonical text without the crc
field. Paths ending in .gz are gzip-compressed transparently. Logs contain no
wall-clock values, so two runs of the same game produce identical files.
"""
import gzip
import json
import logging
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, IO, Iterator, List, Optional, Union

from src.models.errors import LogCorruptedError

logger = logging.getLogger(__name__)

LOG_VERSION = 1
RECORD_TYPES = ("header", "step", "event", "final")


def canonical(record: Dict[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def record_checksum(record: Dict[str, Any]) -> int:
    body = {k: v for k, v in record.items() if k != "crc"}
    return zlib.crc32(canonical(body).encode("utf-8")) & 0xFFFFFFFF


def seal(record_type: str, payload: Dict[str, Any]) -> str:
    """The canonical line for one record, checksum included"""
    record = {"v": LOG_VERSION, "type": record_type, **payload}
    record["crc"] = record_checksum(record)
    return canonical(record)


def _open(path: Path, mode: str) -> IO[str]:
    if path.suffix == ".gz":
        return gzip.open(path, mode + "t", encoding="utf-8")
    return open(path, mode, encoding="utf-8")


@dataclass
class GameLog:
    """An in-memory game log; `lines` is exactly what gets written"""
    lines: List[str] = field(default_factory=list)

    def append(self, record_type: str, payload: Dict[str, Any]) -> None:
        if record_type not in RECORD_TYPES:
            raise ValueError(f"unknown record type {record_type}")
        self.lines.append(seal(record_type, payload))

    def records(self) -> Iterator[Dict[str, Any]]:
        for line in self.lines:
            yield json.loads(line)

    def of_type(self, record_type: str) -> List[Dict[str, Any]]:
        return [r for r in self.records() if r["type"] == record_type]

    @property
    def header(self) -> Dict[str, Any]:
        return json.loads(self.lines[0])

    @property
    def final(self) -> Optional[Dict[str, Any]]:
        last = json.loads(self.lines[-1]) if self.lines else None
        return last if last and last["type"] == "final" else None

    @property
    def events(self) -> List[Dict[str, Any]]:
        return self.of_type("event")

    @property
    def steps(self) -> List[Dict[str, Any]]:
        return self.of_type("step")

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.suffix == ".gz":
            # fixed mtime keeps compressed logs byte-identical too
            with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as f:
                f.write(self.text().encode("utf-8"))
        else:
            with open(path, "w", encoding="utf-8") as f:
                f.write(self.text())
        logger.debug(f"wrote {len(self.lines)} log records to {path}")
        return path


def verify_line(line: str, line_number: int) -> Dict[str, Any]:
    try:
        record = json.loads(line)
    except json.JSONDecodeError:
        raise LogCorruptedError(f"line {line_number} is not a complete record", line_number)
    if not isinstance(record, dict) or "crc" not in record:
        raise LogCorruptedError(f"line {line_number} has no checksum", line_number)
    if record_checksum(record) != record["crc"]:
        raise LogCorruptedError(f"checksum mismatch on line {line_number}", line_number)
    if record.get("v") != LOG_VERSION:
        raise LogCorruptedError(f"line {line_number}: unsupported log version {record.get('v')}", line_number)
    return record


def read_log(path: Union[str, Path]) -> GameLog:
    """Load and verify a log; LogCorruptedError names the first bad line"""
    path = Path(path)
    log = GameLog()
    try:
        with _open(path, "r") as f:
            for number, raw in enumerate(f, start=1):
                line = raw.rstrip("\n")
                if not raw.endswith("\n") and line:
                    verify_line(line, number)
                    raise LogCorruptedError(f"line {number} is truncated", number)
                record = verify_line(line, number)
                if number == 1 and record["type"] != "header":
                    raise LogCorruptedError("log does not start with a header", 1)
                log.lines.append(line)
    except (OSError, EOFError, zlib.error) as e:
        raise LogCorruptedError(f"{path}: unreadable log ({e})", len(log.lines) + 1)
    if not log.lines:
        raise LogCorruptedError(f"{path} is empty", 1)
    if log.final is None:
        raise LogCorruptedError(f"{path} ends without a final record", len(log.lines) + 1)
    return log
