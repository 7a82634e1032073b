"""Command-line interface: ``ptframe <command> [options]``.

Commands
  info     semantic information of truth functions against a prior
  learn    fit truth functions to a labeled sample (CSV ``x_id,label``)
  confirm  confirmation measures from 2x2 counts
  raven    sensitivity of each measure to one more a or one more d
  rate     rate-distortion curve
  thermo   entropy / information relation of a toy system
  reason   one row of the reasoning table from a JSON spec
  fuzzy    truth function of a compound label

Global options (``--log-base``, ``--tolerance``, ``--format``, ``--seed``)
can also come from a JSON config file given by ``--config`` or the
``PTFRAME_CONFIG`` environment variable; command-line values win.
Numbers are printed with 12 significant digits.

Exit codes: 0 success, 2 input error, 3 numerical failure.

Compound-label grammar for ``fuzzy --expr``: atoms are names; NOT binds
tighter than AND, which binds tighter than OR; parentheses group; AND and OR
take an optional mode suffix ``:pos`` (Zadeh, the default), ``:ind`` or
``:neg``. Example: ``"a AND:neg NOT (u OR e)"``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .confirmation import (
    ConfusionCounts,
    confirmation_report,
    raven_sensitivity,
    symmetry_check,
)
from .errors import ConvergenceError, PTError, UndefinedMeasureError
from .fixtures import run_fixture_checks
from .fuzzy import COMPOUND_LABELS, compound_label_truth
from .learning import (
    LabeledSample,
    ParametricFamily,
    empirical_distributions,
    fit_parametric_truth,
    truth_from_sampling,
)
from .prob import Distribution, ShannonChannel, Universe
from .ratedist import DistortionMatrix, r_theta_from_rd, rd_curve
from .reasoning import HYPOTHESES, reason
from .semantic import (
    SemanticChannel,
    TruthFunction,
    logical_probability,
    truth_from_json,
)
from .seminfo import (
    avg_semantic_info,
    falsifying_points,
    semantic_info_point,
    semantic_mutual_info,
)
from .thermo import ThermoSystem, entropy_info_relation

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
CONFIG_ENV = "PTFRAME_CONFIG"


class InputError(Exception):
    """Bad command-line input (unreadable file, malformed JSON, missing field)."""


@dataclass
class RunConfig:
    log_base: str = "bits"
    tolerance: float = 1e-9
    output_format: str = "table"
    seed: int = 0

    def __post_init__(self):
        if self.log_base not in ("bits", "nats"):
            raise InputError(f"log_base must be 'bits' or 'nats', got {self.log_base!r}")
        if not (isinstance(self.tolerance, (int, float)) and self.tolerance > 0):
            raise InputError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.output_format not in ("json", "tsv", "table"):
            raise InputError(f"output_format must be json, tsv or table, got {self.output_format!r}")
        if not isinstance(self.seed, int):
            raise InputError(f"seed must be an integer, got {self.seed!r}")


def load_config(args) -> RunConfig:
    values: dict = {}
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        data = _read_json(path)
        if not isinstance(data, dict):
            raise InputError(f"{path}: config must be a JSON object")
        unknown = set(data) - set(RunConfig.__dataclass_fields__)
        if unknown:
            raise InputError(f"{path}: unknown config field(s) {sorted(unknown)}")
        values.update(data)
    for key, attr in (("log_base", "log_base"), ("tolerance", "tolerance"), ("output_format", "format"), ("seed", "seed")):
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = v
    return RunConfig(**values)


# --- input helpers ------------------------------------------------------------------------------


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _read_json(path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _field(data, key, where):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"{where}: missing field {key!r}")
    return data[key]


def load_distribution(path) -> Distribution:
    return Distribution.from_json(_read_json(path))


def load_semantic_channel(path, universe: Universe) -> SemanticChannel:
    """A SemanticChannel object, or a single TruthFunction object (label from ``label``)."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    own = Universe.from_json(data["universe"]) if "universe" in data else universe
    if "truths" in data:
        return SemanticChannel.from_json(data, own)
    t = truth_from_json(data, own)
    return SemanticChannel((str(data.get("label", "theta")),), (t,))


# --- output -------------------------------------------------------------------------------------


def fmt(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating, Fraction)):
        v = float(v)
        if math.isnan(v):
            return "NA"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".12g")
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating, Fraction)):
        v = float(v)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return float(format(v, ".12g"))
    return v


@dataclass
class Table:
    header: list[str]
    rows: list[list]
    title: str = ""


@dataclass
class Output:
    payload: dict
    tables: list[Table]
    ok: bool = True


def render(out: Output, config: RunConfig) -> str:
    if config.output_format == "json":
        return json.dumps(_jsonable(out.payload), indent=2) + "\n"
    chunks = []
    for t in out.tables:
        cells = [[fmt(v) for v in row] for row in t.rows]
        if config.output_format == "tsv":
            lines = ([f"# {t.title}"] if t.title and len(out.tables) > 1 else []) + ["\t".join(t.header)]
            lines += ["\t".join(r) for r in cells]
        else:
            widths = [max(len(h), *(len(r[k]) for r in cells)) if cells else len(h) for k, h in enumerate(t.header)]
            lines = [t.title] if t.title else []
            lines.append("  ".join(h.ljust(w) for h, w in zip(t.header, widths)).rstrip())
            lines.append("  ".join("-" * w for w in widths))
            lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
        chunks.append("\n".join(lines))
    return ("\n\n" if config.output_format == "table" else "\n").join(chunks) + "\n"


# --- commands -----------------------------------------------------------------------------------


def cmd_info(args, config: RunConfig) -> Output:
    prior = load_distribution(args.prior)
    sc = load_semantic_channel(args.truths, prior.universe)
    units = config.log_base
    if args.channel:
        channel = ShannonChannel.from_json(_read_json(args.channel), prior.universe)
        report = semantic_mutual_info(sc, prior, channel, units)
        payload = report.to_json()
        summary = [
            [y, report.logical_probs[j], report.label_probs[j], report.avg_info[j], report.falsified[j]]
            for j, y in enumerate(sc.labels)
        ]
        tables = [
            Table(["label", "T(theta)", "P(y)", f"avg_info_{units}", "falsifying"], summary, "labels"),
            Table(
                ["point", *sc.labels],
                [[pid, *report.point_info[:, i]] for i, pid in enumerate(prior.universe.ids)],
                f"point information ({units})",
            ),
            Table(
                ["quantity", units],
                [["semantic_mutual_info", report.mutual_info], ["shannon_mutual_info", report.shannon_mutual_info]],
                "mutual information",
            ),
        ]
        return Output(payload, tables)
    sampling = load_distribution(args.sampling) if args.sampling else None
    tls = [logical_probability(t, prior) for t in sc.truths]
    point = [[semantic_info_point(t, prior, i, units) for i in range(len(prior))] for t in sc.truths]
    payload = {
        "units": units,
        "labels": list(sc.labels),
        "points": list(prior.universe.ids),
        "logical_probability": tls,
        "point_info": point,
    }
    summary = [[y, tls[j]] for j, y in enumerate(sc.labels)]
    header = ["label", "T(theta)"]
    if sampling is not None:
        avg = [avg_semantic_info(t, sampling, prior, units) for t in sc.truths]
        fals = [falsifying_points(t, sampling) for t in sc.truths]
        payload["avg_info"] = avg
        payload["falsifying_points"] = fals
        header += [f"avg_info_{units}", "falsifying"]
        summary = [row + [avg[j], fals[j]] for j, row in enumerate(summary)]
    tables = [
        Table(header, summary, "labels"),
        Table(
            ["point", *sc.labels],
            [[pid, *(point[j][i] for j in range(len(sc)))] for i, pid in enumerate(prior.universe.ids)],
            f"point information ({units})",
        ),
    ]
    return Output(payload, tables)


def cmd_learn(args, config: RunConfig) -> Output:
    universe = None
    prior_file = load_distribution(args.prior) if args.prior else None
    if prior_file is not None:
        universe = prior_file.universe
    sample = LabeledSample.read_csv(args.sample, universe)
    tables_ = empirical_distributions(sample)
    prior = prior_file or tables_.prior
    labels = list(sample.labels)
    if args.labels:
        wanted = [s.strip() for s in args.labels.split(",") if s.strip()]
        missing = [y for y in wanted if y not in tables_.posteriors]
        if missing:
            raise InputError(f"label(s) {missing} have no examples in {args.sample}")
        labels = wanted
    fits, truths = [], []
    for y in labels:
        if y not in tables_.posteriors:
            raise InputError(f"label {y!r} has no examples in {args.sample}")
        sampling = tables_.posteriors[y]
        if args.family == "tabulated":
            t = truth_from_sampling(sampling, Distribution.uniform(sample.universe) if args.uniform_prior else prior)
            truths.append(t)
            fits.append({"label": y, "family": "tabulated", "params": {"values": t.values.tolist()}})
            continue
        if args.bounds:
            b = args.bounds
            family = ParametricFamily(args.family, ((b[0], b[1]), (b[2], b[3])), args.grid)
        else:
            family = ParametricFamily.default(args.family, sample.universe, args.grid)
        res = fit_parametric_truth(sampling, prior, family, uniform_prior=args.uniform_prior, method=args.method)
        truths.append(res.truth)
        fits.append({"label": y, **res.to_json()})
    payload = {"fits": fits, "universe": list(sample.universe.ids)}
    param_rows = []
    for f in fits:
        if f["family"] == "tabulated":
            param_rows.append([f["label"], "tabulated", "", "", "", ""])
        else:
            (n1, v1), (n2, v2) = f["params"].items()
            param_rows.append([f["label"], f["family"], f"{n1}={fmt(v1)}", f"{n2}={fmt(v2)}", f["objective_bits"], f["iterations"]])
    truth_table = Table(
        ["x_id", *labels],
        [[pid, *(t.values[i] for t in truths)] for i, pid in enumerate(sample.universe.ids)],
        "truth values",
    )
    tables = [Table(["label", "family", "param1", "param2", "objective_bits", "iterations"], param_rows, "fits"), truth_table]
    if args.table:
        Path(args.table).write_text(render(Output({}, [truth_table]), RunConfig(output_format="tsv")))
    if args.figure:
        from .plotting import plot_truths

        plot_truths(labels, truths, args.figure, "fitted truth functions")
    return Output(payload, tables)


def _counts(args) -> ConfusionCounts:
    if args.counts:
        return ConfusionCounts.read_csv(args.counts)
    missing = [k for k in "abcd" if getattr(args, k) is None]
    if missing:
        raise InputError(f"missing count(s) {', '.join('--' + k for k in missing)} (or give --counts CSV)")
    return ConfusionCounts(args.a, args.b, args.c, args.d)


def cmd_confirm(args, config: RunConfig) -> Output:
    k = _counts(args)
    report = confirmation_report(k, strict=args.strict)
    payload = report.to_json()
    rows = [[name, getattr(report, name)] for name in report.MEASURES]
    try:
        sym = symmetry_check(k)
        payload["symmetry"] = {
            "b_star": sym.b_star,
            "b_star_swapped": sym.b_star_swapped,
            "b_residual": sym.b_residual,
            "c_star": sym.c_star,
            "c_star_swapped": sym.c_star_swapped,
            "c_residual": sym.c_residual,
        }
        rows += [["b_star_swapped", sym.b_star_swapped], ["c_star_swapped", sym.c_star_swapped],
                 ["b_symmetry_residual", sym.b_residual], ["c_symmetry_residual", sym.c_residual]]
    except (UndefinedMeasureError, PTError):
        if args.strict:
            raise
        payload["symmetry"] = None
    tables = [Table(["measure", "value"], rows, "confirmation")]
    if report.undefined:
        tables.append(Table(["undefined"], [[u] for u in report.undefined], "undefined measures"))
    return Output(payload, tables)


def cmd_raven(args, config: RunConfig) -> Output:
    k = _counts(args)
    rows, entries = [], []
    for s in raven_sensitivity(k):
        d_zero = s.delta_d == 0
        rows.append([s.measure, s.delta_a, s.delta_d, d_zero, s.a_dominates])
        entries.append({"measure": s.measure, "delta_a": s.delta_a, "delta_d": s.delta_d,
                        "delta_d_is_zero": d_zero, "delta_a_gt_delta_d": s.a_dominates})
    payload = {"counts": dict(zip("abcd", k.astuple())), "sensitivity": entries}
    return Output(payload, [Table(["measure", "delta_a", "delta_d", "delta_d_zero", "delta_a_gt_delta_d"], rows)])


def _s_grid(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"--s must be comma-separated numbers, got {text!r}") from None


def cmd_rate(args, config: RunConfig) -> Output:
    prior = load_distribution(args.prior)
    if str(args.distortion).lower().endswith(".csv"):
        d = DistortionMatrix.read_csv(args.distortion)
    else:
        d = DistortionMatrix.from_json(_read_json(args.distortion))
    points = rd_curve(prior, d, _s_grid(args.s))
    scale = 1.0 if config.log_base == "bits" else math.log(2.0)
    rows, entries = [], []
    for p in points:
        r_theta = r_theta_from_rd(p, prior, d)
        rows.append([p.s, p.D, p.R * scale, r_theta * scale])
        entry = p.to_json()
        entry.update(R=p.R * scale, R_theta=r_theta * scale)
        entries.append(entry)
    if args.figure:
        from .plotting import plot_rd_curve

        plot_rd_curve(points, args.figure, config.log_base)
    return Output({"units": config.log_base, "curve": entries}, [Table(["s", "D", "R", "R_theta"], rows)])


def cmd_thermo(args, config: RunConfig) -> Output:
    system = ThermoSystem.from_json(_read_json(args.system))
    rel = entropy_info_relation(system)
    ok = rel.residual < config.tolerance
    payload = {**rel.to_json(), "within_tolerance": ok, "tolerance": config.tolerance}
    rows = [[k, v] for k, v in payload.items()]
    return Output(payload, [Table(["quantity", "value"], rows)], ok=ok)


def _reason_inputs(spec: dict) -> dict:
    row = spec["row"]
    inputs = {k: v for k, v in spec.items() if k != "row"}
    universe = None
    for key in ("prior", "likelihood"):
        v = inputs.get(key)
        if isinstance(v, dict):
            inputs[key] = Distribution.from_json(v, universe)
            universe = inputs[key].universe
    if row == "channel_confirmation" and not isinstance(inputs.get("prior"), Distribution):
        p = _field(inputs, "prior", "reasoning spec")
        mass = [p, 1 - p] if isinstance(p, (int, float)) else p
        inputs["prior"] = Distribution(HYPOTHESES, mass)
    if isinstance(inputs.get("truth"), dict):
        data = inputs["truth"]
        own = Universe.from_json(data["universe"]) if "universe" in data else universe
        inputs["truth"] = truth_from_json(data, own)
    if isinstance(inputs.get("channel"), dict):
        inputs["channel"] = ShannonChannel.from_json(inputs["channel"], universe)
    return inputs


def _describe(value):
    if isinstance(value, Distribution):
        return {"universe": list(value.universe.ids), "mass": value.mass.tolist()}, [
            [pid, m] for pid, m in zip(value.universe.ids, value.mass)
        ], ["point", "probability"]
    if isinstance(value, TruthFunction):
        return {"form": "tabulated", "points": list(value.universe.ids), "values": value.values.tolist()}, [
            [pid, m] for pid, m in zip(value.universe.ids, value.values)
        ], ["point", "truth"]
    if isinstance(value, SemanticChannel):
        return value.to_json(), [
            [pid, *value.values[:, i]] for i, pid in enumerate(value.universe.ids)
        ], ["point", *value.labels]
    return {"value": value}, [["value", value]], ["quantity", "value"]


def cmd_reason(args, config: RunConfig) -> Output:
    spec = _read_json(args.spec)
    if not isinstance(spec, dict) or "row" not in spec:
        raise InputError(f"{args.spec}: reasoning spec needs a 'row' field")
    result = reason(spec["row"], **_reason_inputs(spec))
    payload, rows, header = _describe(result)
    return Output({"row": spec["row"], "consequence": payload}, [Table(header, rows, spec["row"])])


def cmd_fuzzy(args, config: RunConfig) -> Output:
    data = _read_json(args.atomics)
    prior = load_distribution(args.prior) if args.prior else None
    universe = prior.universe if prior is not None else None
    if not isinstance(data, dict):
        raise InputError(f"{args.atomics}: expected a semantic channel JSON object")
    if "universe" not in data and universe is None:
        raise InputError(f"{args.atomics}: missing field 'universe' (or pass --prior)")
    sc = SemanticChannel.from_json(data, Universe.from_json(data["universe"]) if "universe" in data else universe)
    atomics = dict(zip(sc.labels, sc.truths))
    t = compound_label_truth(atomics, args.expr, args.mode)
    expression = COMPOUND_LABELS.get(args.expr, args.expr)
    payload = {"expression": expression, "points": list(sc.universe.ids), "values": t.values.tolist()}
    if prior is not None:
        payload["logical_probability"] = logical_probability(t, prior)
    rows = [[pid, *(a.values[i] for a in sc.truths), t.values[i]] for i, pid in enumerate(sc.universe.ids)]
    if args.figure:
        from .plotting import plot_truths

        plot_truths([*sc.labels, args.expr], [*sc.truths, t], args.figure, expression)
    return Output(payload, [Table(["x_id", *sc.labels, "compound"], rows, expression)])


def cmd_fixtures(config: RunConfig) -> Output:
    checks = run_fixture_checks(config.tolerance)
    rows = [[c.name, c.expected, c.actual, "pass" if c.passed else "FAIL"] for c in checks]
    payload = {"checks": [{"name": c.name, "expected": c.expected, "actual": c.actual, "passed": c.passed} for c in checks]}
    return Output(payload, [Table(["fixture", "expected", "actual", "result"], rows)], ok=all(c.passed for c in checks))


# --- parser -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ptframe", description="P-T probability framework toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--paper-fixtures", action="store_true", help="run the bundled worked examples and report pass/fail")
    p.add_argument("--log-base", choices=["bits", "nats"], default=None)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--format", choices=["json", "tsv", "table"], default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", default=None, help=f"JSON config file (default: ${CONFIG_ENV})")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("info", help="semantic information of truth functions")
    s.add_argument("--prior", required=True, help="Distribution JSON")
    s.add_argument("--truths", required=True, help="SemanticChannel or TruthFunction JSON")
    s.add_argument("--channel", help="ShannonChannel JSON; adds mutual information")
    s.add_argument("--sampling", help="Distribution JSON; adds average information")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("learn", help="fit truth functions to a labeled sample")
    s.add_argument("--sample", required=True, help="CSV with header x_id,label")
    s.add_argument("--family", choices=["logistic", "gaussian", "tabulated"], default="logistic")
    s.add_argument("--labels", help="comma-separated labels to fit (default: all)")
    s.add_argument("--prior", help="Distribution JSON; default is the sample's own P(x)")
    s.add_argument("--uniform-prior", action="store_true", help="assume a flat P(x)")
    s.add_argument("--bounds", type=float, nargs=4, metavar=("LO1", "HI1", "LO2", "HI2"))
    s.add_argument("--grid", type=int, default=32)
    s.add_argument("--method", choices=["golden", "gradient"], default="golden")
    s.add_argument("--table", help="also write the truth-value table as TSV to this path")
    s.add_argument("--figure", help="write a PNG of the fitted truth functions")
    s.set_defaults(func=cmd_learn)

    for name, func, text in (("confirm", cmd_confirm, "confirmation measures"), ("raven", cmd_raven, "raven sensitivity table")):
        s = sub.add_parser(name, help=text)
        for k in "abcd":
            s.add_argument(f"--{k}", type=int)
        s.add_argument("--counts", help="2x2 CSV: rows e1, e0; columns h1, h0")
        if name == "confirm":
            s.add_argument("--strict", action="store_true", help="fail on any undefined measure")
        s.set_defaults(func=func)

    s = sub.add_parser("rate", help="rate-distortion curve")
    s.add_argument("--prior", required=True, help="Distribution JSON")
    s.add_argument("--distortion", required=True, help="distortion matrix JSON or CSV")
    s.add_argument("--s", default="0,-0.5,-1,-2,-4", help="comma-separated slopes, descending from 0")
    s.add_argument("--figure", help="write a PNG of the curve")
    s.set_defaults(func=cmd_rate)

    s = sub.add_parser("thermo", help="entropy/information relation")
    s.add_argument("--system", required=True, help="ThermoSystem JSON")
    s.set_defaults(func=cmd_thermo)

    s = sub.add_parser("reason", help="one reasoning-table row")
    s.add_argument("--spec", required=True, help='JSON object with a "row" field and its inputs')
    s.set_defaults(func=cmd_reason)

    s = sub.add_parser("fuzzy", help="compound-label truth function")
    s.add_argument("--atomics", required=True, help="SemanticChannel JSON naming the atoms")
    s.add_argument("--expr", required=True, help="expression or preset (child, youth-not-adult, middle-age)")
    s.add_argument("--mode", default="positive", help="default mode for connectives without a suffix")
    s.add_argument("--prior", help="Distribution JSON; adds the logical probability")
    s.add_argument("--figure", help="write a PNG of atoms and compound")
    s.set_defaults(func=cmd_fuzzy)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args)
        if args.paper_fixtures:
            out = cmd_fixtures(config)
        elif args.command is None:
            parser.print_usage(sys.stderr)
            print("ptframe: error: a command or --paper-fixtures is required", file=sys.stderr)
            return EXIT_INPUT
        else:
            out = args.func(args, config)
        text = render(out, config)
    except ConvergenceError as exc:
        print(f"ptframe: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, PTError, KeyError, TypeError) as exc:
        msg = f"missing field {exc.args[0]!r}" if isinstance(exc, KeyError) else str(exc)
        print(f"ptframe: input error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    return EXIT_OK if out.ok else EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
