"""Score a molecule and its progressively substituted variants."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

from ..complexity.assembly import DEFAULT_BUDGET_S, AssemblyResult, assembly_index
from ..complexity.bertz import bertz
from ..complexity.bottcher import bottcher
from ..errors import ConfigError
from ..molgraph.graph import MolecularGraph
from ..molgraph.smiles import parse_smiles, to_smiles


@dataclass(frozen=True)
class SeriesRow:
    """One variant: ``defects`` substitutions applied at ``positions``."""

    defects: int
    positions: tuple[int, ...]
    smiles: str
    assembly: AssemblyResult
    bertz: float
    bottcher: float


def symmetry_series(base: MolecularGraph, element: str, positions,
                    budget_s: float = DEFAULT_BUDGET_S) -> list[SeriesRow]:
    """Scores for the base molecule and each cumulative substitution.

    Row ``k`` has the element placed at the first ``k`` positions.

    Raises:
        InvalidSubstitution: when an atom cannot take the new element.
    """
    positions = tuple(int(p) for p in positions)
    rows = []
    g = base
    for k in range(len(positions) + 1):
        if k:
            g = g.substituted(positions[k - 1], element)
        rows.append(SeriesRow(k, positions[:k], to_smiles(g),
                              assembly_index(g, budget_s=budget_s), bertz(g), bottcher(g)))
    return rows


def series_csv(name: str, rows: list[SeriesRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "defects", "positions", "smiles", "MA_lower", "MA_upper",
                "MA_exact", "bertz", "bottcher", "elapsed_ms"])
    for r in rows:
        a = r.assembly
        w.writerow([name, r.defects, " ".join(map(str, r.positions)), r.smiles, a.lower,
                    a.upper, int(a.exact), f"{r.bertz:.6f}", f"{r.bottcher:.6f}",
                    f"{a.elapsed * 1000:.1f}"])
    return buf.getvalue()


@dataclass(frozen=True)
class SeriesConfig:
    name: str
    smiles: str
    element: str
    positions: tuple[int, ...]

    def graph(self) -> MolecularGraph:
        return parse_smiles(self.smiles, name=self.name)


def parse_series_config(text: str) -> list[SeriesConfig]:
    """Read ``[name]`` sections with ``smiles``, ``element`` and ``positions`` keys."""
    out: list[SeriesConfig] = []
    current: dict[str, str] | None = None
    name = ""

    def flush() -> None:
        if current is None:
            return
        missing = {"smiles", "element", "positions"} - set(current)
        if missing:
            raise ConfigError(f"series {name!r} lacks {sorted(missing)}")
        pos = tuple(int(p) for p in current["positions"].replace(",", " ").split())
        out.append(SeriesConfig(name, current["smiles"], current["element"], pos))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        # full-line comments only, since '#' is a SMILES triple bond
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            flush()
            name, current = line[1:-1].strip(), {}
            continue
        key, sep, value = line.partition("=")
        if not sep or current is None:
            raise ConfigError(f"line {lineno}: expected 'key = value' inside a section")
        current[key.strip()] = value.strip()
    flush()
    return out


def default_series() -> list[SeriesConfig]:
    """Shipped series with substitution positions found by scanning."""
    text = resources.files(__package__).joinpath("data/symmetry_series.conf").read_text()
    return parse_series_config(text)
