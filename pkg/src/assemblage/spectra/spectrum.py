"""Peak lists, MSP text records and fixed-length intensity vectors."""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import AllPeaksOutOfRange, EmptyPeakList, MalformedRecord

DEFAULT_MAX_MZ = 1000


@dataclass(frozen=True)
class Peak:
    mz: float
    intensity: float


@dataclass(frozen=True)
class Spectrum:
    """A peak list sorted by m/z with acquisition metadata.

    Peaks sharing an m/z value are merged by keeping the larger intensity.

    Attributes:
        peaks: Peaks with ``mz > 0`` and ``intensity >= 0``.
        ionization: ``"EI"`` or ``"ESI"``, empty when unknown.
        energy_ev: Collision or ionization energy, ``None`` when unknown.
        stage: MS stage (1 for single-stage spectra).
        source_name: Record name or origin.
        extra: Unrecognized metadata kept verbatim, in input order.
    """

    peaks: tuple[Peak, ...]
    ionization: str = ""
    energy_ev: float | None = None
    stage: int = 1
    source_name: str = ""
    extra: tuple[tuple[str, str], ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.peaks:
            raise EmptyPeakList(f"spectrum {self.source_name!r} has no peaks")
        merged: dict[float, float] = {}
        for p in self.peaks:
            mz, inten = float(p.mz), float(p.intensity)
            if not mz > 0:
                raise MalformedRecord(f"non-positive m/z {mz}")
            if not inten >= 0:
                raise MalformedRecord(f"negative intensity {inten}")
            merged[mz] = max(merged.get(mz, 0.0), inten)
        peaks = tuple(Peak(mz, merged[mz]) for mz in sorted(merged))
        object.__setattr__(self, "peaks", peaks)

    @classmethod
    def from_pairs(cls, pairs, **meta) -> Spectrum:
        return cls(tuple(Peak(float(m), float(i)) for m, i in pairs), **meta)

    @property
    def mz(self) -> np.ndarray:
        return np.array([p.mz for p in self.peaks])

    @property
    def intensity(self) -> np.ndarray:
        return np.array([p.intensity for p in self.peaks])


# metadata keys understood by the reader, matched case-insensitively
_IONIZATION_KEYS = {"ionization", "ion_mode", "ionization_mode"}
_ENERGY_KEYS = {"energy", "energy_ev", "collision_energy"}
_STAGE_KEYS = {"stage", "spectrum_type", "ms_level"}
_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def _parse_energy(text: str) -> float | None:
    m = _NUMBER.search(text)
    return float(m.group()) if m else None


def _parse_stage(text: str) -> int:
    m = re.search(r"\d+", text)
    return int(m.group()) if m else 1


def _finish(name: str, meta: list[tuple[str, str]], declared: int | None,
            peaks: list[tuple[float, float]], lineno: int) -> tuple[str, Spectrum]:
    if declared is None:
        raise MalformedRecord(f"record {name!r} (line {lineno}) lacks 'Num Peaks'")
    if len(peaks) != declared:
        raise MalformedRecord(
            f"record {name!r} declares {declared} peaks but lists {len(peaks)}"
        )
    if declared == 0:
        raise EmptyPeakList(f"record {name!r} has no peaks")
    kw: dict = {"source_name": name}
    extra = []
    for key, value in meta:
        low = key.lower()
        if low in _IONIZATION_KEYS:
            kw["ionization"] = value
        elif low in _ENERGY_KEYS:
            kw["energy_ev"] = _parse_energy(value)
        elif low in _STAGE_KEYS:
            kw["stage"] = _parse_stage(value)
        else:
            extra.append((key, value))
    kw["extra"] = tuple(extra)
    return name, Spectrum.from_pairs(peaks, **kw)


def parse_msp(text: str) -> list[tuple[str, Spectrum]]:
    """Read MSP records: ``Name:``, metadata lines, ``Num Peaks: k``, k pairs.

    Peak pairs may be separated by whitespace, commas, semicolons or
    newlines.

    Raises:
        MalformedRecord: peak count mismatch or garbage inside a record.
        EmptyPeakList: a record declaring zero peaks.
    """
    records = []
    name = None
    meta: list[tuple[str, str]] = []
    declared: int | None = None
    peaks: list[tuple[float, float]] = []
    start = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if sep and key.strip().lower() == "name":
            if name is not None:
                records.append(_finish(name, meta, declared, peaks, start))
            name, meta, declared, peaks, start = value.strip(), [], None, [], lineno
            continue
        if name is None:
            raise MalformedRecord(f"line {lineno}: data before the first 'Name:'")
        if declared is None:
            if not sep:
                raise MalformedRecord(f"line {lineno}: expected 'key: value'")
            if key.strip().lower() == "num peaks":
                try:
                    declared = int(value.strip())
                except ValueError:
                    raise MalformedRecord(f"line {lineno}: bad peak count {value!r}") from None
            else:
                meta.append((key.strip(), value.strip()))
            continue
        tokens = [t for t in re.split(r"[\s,;]+", line) if t]
        if len(tokens) % 2:
            raise MalformedRecord(f"line {lineno}: unpaired m/z or intensity")
        try:
            values = [float(t) for t in tokens]
        except ValueError:
            raise MalformedRecord(f"line {lineno}: non-numeric peak data") from None
        peaks.extend(zip(values[::2], values[1::2]))
        if len(peaks) > declared:
            raise MalformedRecord(
                f"record {name!r} declares {declared} peaks but lists more"
            )
    if name is not None:
        records.append(_finish(name, meta, declared, peaks, start))
    return records


def _num(x: float) -> str:
    return f"{x:.6g}"


def serialize_msp(records: list[tuple[str, Spectrum]]) -> str:
    """Write records in MSP form with six significant digits per number."""
    out = []
    for name, s in records:
        out.append(f"Name: {name}")
        if s.ionization:
            out.append(f"Ionization: {s.ionization}")
        if s.energy_ev is not None:
            out.append(f"Energy: {_num(s.energy_ev)}")
        out.append(f"Stage: {s.stage}")
        for key, value in s.extra:
            out.append(f"{key}: {value}")
        out.append(f"Num Peaks: {len(s.peaks)}")
        for p in s.peaks:
            out.append(f"{_num(p.mz)} {_num(p.intensity)}")
        out.append("")
    return "\n".join(out)


@dataclass(frozen=True)
class SpectrumVector:
    """Intensities on integer m/z bins ``0..max_mz``, scaled to a maximum of 1.

    Attributes:
        values: Array of length ``max_mz + 1``.
        dropped: Number of peaks above ``max_mz`` that were discarded.
    """

    values: np.ndarray
    dropped: int = 0

    @property
    def max_mz(self) -> int:
        return len(self.values) - 1


def vectorize(s: Spectrum, max_mz: int = DEFAULT_MAX_MZ) -> SpectrumVector:
    """Bin peaks at ``mz`` rounded half-up, keep the larger of colliding intensities, normalize.

    Raises:
        AllPeaksOutOfRange: when no peak falls in ``[0, max_mz]`` or all in-range
            intensities are zero.
    """
    values = np.zeros(max_mz + 1)
    mz = np.floor(s.mz + 0.5).astype(np.int64)  # half-up, so 50.5 goes to 51
    inten = s.intensity
    keep = mz <= max_mz
    dropped = int((~keep).sum())
    if not keep.any():
        raise AllPeaksOutOfRange(f"all {len(mz)} peaks lie above m/z {max_mz}")
    np.maximum.at(values, mz[keep], inten[keep])
    top = values.max()
    if top <= 0:
        raise AllPeaksOutOfRange("no positive intensity within range")
    if dropped:
        warnings.warn(f"{dropped} peak(s) above m/z {max_mz} dropped", stacklevel=2)
    return SpectrumVector(values / top, dropped)
