"""Reading SMILES files and writing parse reports."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from ..errors import AssemblageError
from .canon import canonical_key
from .graph import MolecularGraph
from .smiles import parse_smiles


@dataclass(frozen=True)
class SmilesRecord:
    """One non-blank input line.

    Attributes:
        line: 1-based line number in the source text.
        name: Name from the second tab field, else ``mol<line>``.
        smiles: The SMILES text as written.
        graph: Parsed molecule, or ``None`` when parsing failed.
        error: ``"<ErrorClass>: message"`` when parsing failed.
    """

    line: int
    name: str
    smiles: str
    graph: MolecularGraph | None
    error: str | None


def read_smiles_lines(text: str) -> list[SmilesRecord]:
    """Parse one SMILES per line with an optional tab-separated name.

    Blank lines and lines starting with ``#`` are skipped.  A line that fails
    to parse yields a record carrying the error instead of raising.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        smiles, _, name = line.partition("\t")
        smiles = smiles.strip()
        name = name.strip() or f"mol{lineno}"
        try:
            g = parse_smiles(smiles, name=name)
            out.append(SmilesRecord(lineno, name, smiles, g, None))
        except AssemblageError as exc:
            out.append(SmilesRecord(lineno, name, smiles, None, f"{type(exc).__name__}: {exc}"))
    return out


def parse_report_csv(records: list[SmilesRecord]) -> str:
    """CSV with name, smiles, ok, n_atoms, n_bonds, canonical_key, error."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "smiles", "ok", "n_atoms", "n_bonds", "canonical_key", "error"])
    for r in records:
        if r.graph is None:
            w.writerow([r.name, r.smiles, 0, "", "", "", r.error])
        else:
            w.writerow([r.name, r.smiles, 1, r.graph.n_atoms, r.graph.n_bonds,
                        canonical_key(r.graph), ""])
    return buf.getvalue()
