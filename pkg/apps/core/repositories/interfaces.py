"""
Repository interfaces for the core domain.

These abstractions decouple the experiment service from file formats.
"""

# Import future annotations for forward references.
from __future__ import annotations

# Import ABC and abstractmethod for defining interfaces.
from abc import ABC, abstractmethod
from collections.abc import Iterable, Sequence

from apps.core.entities.signal import SampleStream


# ---------- IArtifactRepository interface ----------
#  Reads input streams and persists run artifacts.
# ---------- IArtifactRepository interface ----------
class IArtifactRepository(ABC):
    """
    One repository per output directory. Every write is atomic and its
    checksum is remembered for the run manifest.
    """

    # -- input ------------------------------------------------------------------

    @abstractmethod
    def read_stream(self, path: str, rate: float) -> SampleStream:
        """
        Load a CSV (`value` or `index,value`) or 16/24-bit mono WAV file.

        Raises InputFormatError with the offending line or sample number.
        """
        raise NotImplementedError

    # -- output -----------------------------------------------------------------

    @abstractmethod
    def write_rows(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
        raise NotImplementedError

    @abstractmethod
    def write_text(self, name: str, text: str) -> str:
        raise NotImplementedError

    @abstractmethod
    def write_json(self, name: str, payload: dict, *, record: bool = True) -> str:
        raise NotImplementedError

    @abstractmethod
    def write_signal(self, name: str, stream: SampleStream) -> str:
        """`time,value` rows, sample n at t = n / rate."""
        raise NotImplementedError

    @abstractmethod
    def write_wav(self, name: str, stream: SampleStream) -> str:
        raise NotImplementedError

    @abstractmethod
    def checksums(self) -> dict[str, str]:
        """sha256 of every artifact written so far, keyed by file name."""
        raise NotImplementedError
