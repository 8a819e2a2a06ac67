"""``assemblage`` command-line entry point.

Exit codes: 0 on success (possibly with per-row warnings), 1 on usage or
configuration errors, 2 on input/output errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from ..complexity.assembly import assembly_index
from ..complexity.bertz import bertz
from ..complexity.bottcher import bottcher
from ..errors import AssemblageError, ConfigError
from ..ml.dataset import Dataset
from ..ml.gbdt import GbdtModel, fit_gbdt, predict_many
from ..ml.metrics import error_profile, relative_mse
from ..molgraph.graph import molecular_weight
from ..molgraph.io import read_smiles_lines
from ..spectra.recursive import recursive_ma, tree_from_json
from ..spectra.simulate import simulate_spectrum
from ..spectra.spectrum import parse_msp, serialize_msp, vectorize
from .config import RunConfig
from .workflows import (
    atomic_write,
    build_corpus,
    run_mismatch,
    run_pipeline,
    spectrum_seed,
    write_pipeline,
)

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="input file")
    p.add_argument("--output", help="output file or directory")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--budget-ms", type=float, help="assembly-index budget per molecule")
    p.add_argument("--max-mz", type=int, help="highest m/z bin of spectrum vectors")
    p.add_argument("--energy", type=float, action="append",
                   help="energy in eV; repeat for several")
    p.add_argument("--threads", type=int, help="worker threads (else ASSEMBLAGE_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="assemblage", description="Molecular complexity toolkit.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)
    for name, help_text in [
        ("score", "assembly index, Bertz and Böttcher scores for a SMILES file"),
        ("spectra-parse", "summarize an MSP file"),
        ("simulate", "simulate spectra for a SMILES file, written as MSP"),
        ("train", "fit a model on simulated spectra with fixed hyperparameters"),
        ("predict", "predict assembly indices for an MSP file"),
        ("eval", "evaluate a model on a SMILES file"),
        ("pipeline", "split, grid search, train, evaluate and profile"),
        ("mismatch", "cross-energy train/test error matrix"),
        ("scaling", "power-law fits of scores against bond count"),
        ("threshold", "surrogate threshold for an assembly-index threshold"),
        ("symmetry", "scores across substitution series"),
        ("recursive-ma", "assembly estimate from a fragmentation tree"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _common(p)
        if name in ("predict", "eval"):
            p.add_argument("--model", required=True, help="model JSON")
        if name == "threshold":
            p.add_argument("--ma-threshold", type=int, required=True)
            p.add_argument("--score", choices=("bertz", "bottcher"), default="bertz")
        if name == "recursive-ma":
            p.add_argument("--block-mass", type=float, required=True)
            p.add_argument("--tau", type=float, default=0.01)
    return parser


def _config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        cfg = RunConfig.from_json(Path(args.config).read_text())
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.budget_ms is not None:
        changes["budget_s"] = args.budget_ms / 1000.0
    if args.max_mz is not None:
        changes["max_mz"] = args.max_mz
    if args.energy:
        changes["energies"] = tuple(args.energy)
    if args.input is not None:
        changes["input"] = args.input
    if args.output is not None:
        changes["output"] = args.output
    return replace(cfg, **changes) if changes else cfg


def _threads(args) -> None:
    n = args.threads
    if n is None and os.environ.get("ASSEMBLAGE_THREADS"):
        try:
            n = int(os.environ["ASSEMBLAGE_THREADS"])
        except ValueError:
            raise ConfigError("ASSEMBLAGE_THREADS must be an integer") from None
    if n is None:
        return
    if n < 1:
        raise ConfigError(f"threads must be >= 1, got {n}")
    import numba

    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def _emit(cfg_output: str | None, text: str) -> None:
    if cfg_output:
        atomic_write(cfg_output, text)
    else:
        sys.stdout.write(text)


def _need_input(args) -> str:
    if not args.input:
        raise UsageError("--input is required")
    return Path(args.input).read_text()


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


SCORE_HEADER = ["name", "smiles", "N_B", "MW", "MA_lower", "MA_upper", "MA_exact",
                "bertz", "bottcher", "elapsed_ms", "error"]


def score_rows(text: str, budget_s: float) -> list[list]:
    """One score row per input line; failures become rows with an error message."""
    rows = []
    for rec in read_smiles_lines(text):
        if rec.graph is None:
            rows.append([rec.name, rec.smiles] + [""] * 8 + [rec.error])
            continue
        g = rec.graph
        try:
            t0 = time.monotonic()
            r = assembly_index(g, budget_s=budget_s)
            ms = (time.monotonic() - t0) * 1000
            rows.append([rec.name, rec.smiles, g.n_bonds, f"{molecular_weight(g):.4f}",
                         r.lower, r.upper, int(r.exact), f"{bertz(g):.6f}",
                         f"{bottcher(g):.6f}", f"{ms:.1f}", ""])
        except AssemblageError as exc:
            rows.append([rec.name, rec.smiles] + [""] * 8 + [f"{type(exc).__name__}: {exc}"])
    return rows


def cmd_score(args) -> int:
    cfg = _config(args)
    text = _need_input(args)
    rows = score_rows(text, cfg.budget_s)
    if not rows:
        print("warning: no molecules in input", file=sys.stderr)
    bad = sum(1 for r in rows if r[-1])
    if bad:
        print(f"warning: {bad} molecule(s) could not be scored", file=sys.stderr)
    _emit(args.output, _rows_csv(SCORE_HEADER, rows))
    return EXIT_OK


def cmd_spectra_parse(args) -> int:
    records = parse_msp(_need_input(args))
    rows = []
    for name, s in records:
        inten = s.intensity
        rows.append([name, s.ionization, "" if s.energy_ev is None else f"{s.energy_ev:g}",
                     s.stage, len(s.peaks), f"{s.mz[int(np.argmax(inten))]:g}",
                     f"{s.mz.max():g}"])
    _emit(args.output, _rows_csv(["name", "ionization", "energy_eV", "stage", "n_peaks",
                                  "base_peak_mz", "max_mz"], rows))
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _config(args)
    out = []
    for i, rec in enumerate(read_smiles_lines(_need_input(args))):
        if rec.graph is None:
            print(f"warning: line {rec.line}: {rec.error}", file=sys.stderr)
            continue
        for e in cfg.energies:
            s = simulate_spectrum(rec.graph, e, spectrum_seed(cfg.seed, i, e))
            out.append((f"{rec.name} {e:g}eV", s))
    _emit(args.output, serialize_msp(out))
    return EXIT_OK


def _train_config(args) -> RunConfig:
    cfg = _config(args)
    if len(cfg.energies) != 1:
        raise ConfigError("train/eval use exactly one energy")
    return cfg


def cmd_train(args) -> int:
    cfg = _train_config(args)
    c = build_corpus(cfg)
    if len(c.targets) < 20:
        raise ConfigError(f"only {len(c.targets)} usable molecules")
    model = fit_gbdt(Dataset(c.vectors(0, cfg.max_mz), c.targets, c.ids()), cfg.hp(), cfg.seed)
    _emit(args.output or str(Path(cfg.output) / "model.json"), model.to_json())
    return EXIT_OK


def _load_model(path: str) -> GbdtModel:
    return GbdtModel.from_json(Path(path).read_text())


def cmd_predict(args) -> int:
    model = _load_model(args.model)
    max_mz = model.n_features - 1
    rows = []
    for name, s in parse_msp(_need_input(args)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            v = vectorize(s, max_mz).values
        rows.append([name, repr(float(predict_many(model, v[None, :])[0]))])
    _emit(args.output, _rows_csv(["name", "predicted"], rows))
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _train_config(args)
    model = _load_model(args.model)
    cfg = replace(cfg, max_mz=model.n_features - 1)
    c = build_corpus(cfg)
    y_hat = predict_many(model, c.vectors(0, cfg.max_mz))
    prof = error_profile(c.targets, y_hat)
    rows = [["all", len(c.targets), "", "", repr(relative_mse(c.targets, y_hat))]]
    rows += [[k, b.count, repr(b.mean_abs), repr(b.mean_signed), ""] for k, b in prof.items()]
    _emit(args.output, _rows_csv(["ma_bin", "count", "mean_abs_rel_error",
                                  "mean_signed_rel_error", "rel_mse"], rows))
    return EXIT_OK


def cmd_pipeline(args) -> int:
    cfg = _config(args)
    t0 = time.monotonic()
    res = run_pipeline(cfg)
    write_pipeline(cfg, res, time.monotonic() - t0)
    print(f"test relative MSE {res.test_rel_mse:.5f}; best baseline {res.best_baseline:.5f}")
    return EXIT_OK


def cmd_mismatch(args) -> int:
    cfg = _config(args)
    res = run_mismatch(cfg)
    out = Path(cfg.output)
    atomic_write(out / "mismatch.csv", res.to_csv())
    atomic_write(out / "config.json", cfg.to_json())
    return EXIT_OK


def _read_score_csv(text: str) -> list[dict]:
    return [r for r in csv.DictReader(io.StringIO(text)) if not r.get("error")]


def cmd_scaling(args) -> int:
    from ..analysis.scaling import fit_scaling

    rows = _read_score_csv(_need_input(args))
    out = []
    for score, column in (("MA", "MA_upper"), ("bertz", "bertz"), ("bottcher", "bottcher")):
        pairs = [(float(r["N_B"]), float(r[column])) for r in rows
                 if r.get(column) and float(r[column]) > 0
                 and (column != "MA_upper" or r.get("MA_exact") == "1")]
        try:
            f = fit_scaling(pairs)
            out.append([score, repr(f.exponent), repr(f.amplitude), repr(f.r_squared), f.n])
        except AssemblageError as exc:
            print(f"warning: {score}: {exc}", file=sys.stderr)
    _emit(args.output, _rows_csv(["score", "beta", "amplitude", "r_squared", "n"], out))
    return EXIT_OK


def cmd_threshold(args) -> int:
    from ..analysis.threshold import threshold_translate

    rows = [r for r in _read_score_csv(_need_input(args)) if r.get("MA_exact") == "1"]
    ma = [float(r["MA_upper"]) for r in rows]
    sur = [float(r[args.score]) for r in rows]
    rep = threshold_translate(ma, sur, args.ma_threshold, args.score)
    lines = [["summary", rep.ma_threshold, rep.surrogate_score, repr(rep.surrogate_threshold),
              repr(rep.fpr), repr(rep.tpr)]]
    lines += [["curve", rep.ma_threshold, rep.surrogate_score, repr(t), repr(f), repr(p)]
              for t, f, p in rep.curve]
    _emit(args.output, _rows_csv(["kind", "ma_threshold", "score", "surrogate_threshold",
                                  "fpr", "tpr"], lines))
    return EXIT_OK


def cmd_symmetry(args) -> int:
    from ..analysis.symmetry import (
        default_series,
        parse_series_config,
        series_csv,
        symmetry_series,
    )

    cfg = _config(args)
    series = parse_series_config(_need_input(args)) if args.input else default_series()
    parts = []
    for s in series:
        rows = symmetry_series(s.graph(), s.element, s.positions, cfg.budget_s)
        text = series_csv(s.name, rows)
        parts.append(text if not parts else text.split("\n", 1)[1])
    _emit(args.output, "".join(parts))
    return EXIT_OK


def cmd_recursive_ma(args) -> int:
    root = tree_from_json(_need_input(args))
    est = recursive_ma(root, args.block_mass, args.tau)
    _emit(args.output, json.dumps({"estimate": est, "root_mass": root.mass}) + "\n")
    return EXIT_OK


COMMANDS = {
    "score": cmd_score, "spectra-parse": cmd_spectra_parse, "simulate": cmd_simulate,
    "train": cmd_train, "predict": cmd_predict, "eval": cmd_eval, "pipeline": cmd_pipeline,
    "mismatch": cmd_mismatch, "scaling": cmd_scaling, "threshold": cmd_threshold,
    "symmetry": cmd_symmetry, "recursive-ma": cmd_recursive_ma,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _threads(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssemblageError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
