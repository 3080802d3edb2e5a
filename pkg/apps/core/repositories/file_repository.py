"""
Filesystem implementation of IArtifactRepository.

This module is infrastructure: it knows about CSV, WAV and JSON and maps
them to domain entities.
"""

# Import future annotations for forward references.
from __future__ import annotations

# Standard library imports
import csv
import hashlib
import io
import json
import logging
import os
import tempfile
import wave
from collections.abc import Iterable, Sequence
from pathlib import Path

# Third-party imports
import numpy as np
from scipy.io import wavfile

# Domain entities, errors and the repository interface.
from apps.core.entities.signal import SampleStream
from apps.core.exceptions import ConfigurationError, InputFormatError
from apps.core.repositories.interfaces import IArtifactRepository

logger = logging.getLogger(__name__)

WAV_FULL_SCALE = {2: 2.0**15, 3: 2.0**31}  # 24-bit PCM arrives left-justified in int32


def format_value(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


# ---------- FileArtifactRepository implementation ----------
#  Persists artifacts under one output directory.
# ---------- FileArtifactRepository implementation ----------
class FileArtifactRepository(IArtifactRepository):

    def __init__(self, output_dir: str) -> None:
        self.output_dir = Path(output_dir)
        self._checksums: dict[str, str] = {}

    # ---------- input ----------

    def read_stream(self, path: str, rate: float) -> SampleStream:
        source = Path(path)
        if not source.is_file():
            raise InputFormatError(f"input file {path!r} does not exist")
        if source.suffix.lower() == ".wav":
            return self._read_wav(source, rate)
        return self._read_csv(source, rate)

    def _read_csv(self, source: Path, rate: float) -> SampleStream:
        values: list[float] = []
        with source.open(newline="") as handle:
            for number, row in enumerate(csv.reader(handle), start=1):
                if not row or not "".join(row).strip():
                    continue
                if number == 1 and not _is_number(row[-1]):
                    continue  # header
                if len(row) not in (1, 2):
                    raise InputFormatError(f"expected 'value' or 'index,value', got {len(row)} fields",
                                           line=number)
                try:
                    value = float(row[-1])
                except ValueError:
                    raise InputFormatError(f"not a number: {row[-1]!r}", line=number) from None
                if not np.isfinite(value):
                    raise InputFormatError(f"non-finite value {row[-1]!r}", line=number)
                if abs(value) >= 1.0:
                    raise InputFormatError(f"value {value!r} violates |x| < 1", line=number)
                values.append(value)
        logger.info("read %d samples from %s", len(values), source)
        return SampleStream(rate=rate, samples=np.array(values))

    def _read_wav(self, source: Path, rate: float) -> SampleStream:
        try:
            with wave.open(str(source), "rb") as handle:
                width, channels = handle.getsampwidth(), handle.getnchannels()
        except (wave.Error, EOFError) as exc:
            raise InputFormatError(f"unreadable WAV file: {exc}") from exc
        if channels != 1:
            raise InputFormatError(f"WAV input must be mono, got {channels} channels")
        if width not in WAV_FULL_SCALE:
            raise InputFormatError(f"WAV input must be 16- or 24-bit PCM, got {8 * width}-bit")
        file_rate, data = wavfile.read(source)
        if file_rate != rate:
            raise ConfigurationError(f"WAV rate {file_rate} Hz differs from f1 = {rate:g} Hz")
        samples = np.asarray(data, dtype=np.float64) / WAV_FULL_SCALE[width]
        bad = np.flatnonzero(np.abs(samples) >= 1.0)
        if bad.size:
            raise InputFormatError("sample at negative full scale violates |x| < 1",
                                   line=int(bad[0]) + 1)
        logger.info("read %d samples from %s", samples.size, source)
        return SampleStream(rate=rate, samples=samples)

    # ---------- output ----------

    def _commit(self, name: str, payload: bytes, *, record: bool = True) -> str:
        """Write bytes to a temporary sibling, then rename over the target."""
        self.output_dir.mkdir(parents=True, exist_ok=True)
        target = self.output_dir / name
        fd, temp_path = tempfile.mkstemp(dir=self.output_dir, prefix=f".{name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(payload)
            os.replace(temp_path, target)
        except BaseException:
            if os.path.exists(temp_path):
                os.unlink(temp_path)
            raise
        if record:
            self._checksums[name] = hashlib.sha256(payload).hexdigest()
        logger.info("wrote %s (%d bytes)", target, len(payload))
        return str(target)

    def write_rows(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
        return self._commit(name, buffer.getvalue().encode())

    def write_text(self, name: str, text: str) -> str:
        return self._commit(name, text.encode())

    def write_json(self, name: str, payload: dict, *, record: bool = True) -> str:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        return self._commit(name, text.encode(), record=record)

    def write_signal(self, name: str, stream: SampleStream) -> str:
        times = np.arange(len(stream)) / stream.rate
        return self.write_rows(name, ("time", "value"), zip(times.tolist(), stream.samples.tolist()))

    def write_wav(self, name: str, stream: SampleStream) -> str:
        """16-bit PCM at the stream's rate; values are requantised, so lossy."""
        pcm = np.round(np.clip(stream.samples, -1.0, 1.0) * 32767.0).astype(np.int16)
        buffer = io.BytesIO()
        wavfile.write(buffer, int(round(stream.rate)), pcm)
        return self._commit(name, buffer.getvalue())

    def checksums(self) -> dict[str, str]:
        return dict(self._checksums)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True
