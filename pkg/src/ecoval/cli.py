"""Command-line front end.

Exit codes: 0 ok, 1 I/O or parse failure, 2 validation failure, 3 stage
failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__, pipeline, textio
from .errors import ScenarioParseError, SchemaError, StageError
from .scenario import load_scenario, validate_scenario

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_STAGE = 0, 1, 2, 3


def _color(text, code, stream):
    if os.environ.get("ECOVAL_NO_COLOR") or not stream.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _err(msg):
    print(_color(msg, "31", sys.stderr), file=sys.stderr)


def _fmt(v):
    return "-" if v is None else f"{v:.6g}"


def _load(path):
    """Scenario or an exit code."""
    try:
        s = load_scenario(path)
    except ScenarioParseError as exc:
        _err(f"error: {exc}")
        return EXIT_IO
    except SchemaError as exc:
        for v in exc.violations:
            _err(f"invalid: {v}")
        return EXIT_INVALID
    problems = validate_scenario(s)
    if problems:
        for v in problems:
            _err(f"invalid: {v}")
        return EXIT_INVALID
    return s


def _out_path(args):
    if args.out:
        return Path(args.out)
    p = Path(args.scenario)
    return p.with_name(p.stem + ".results.json")


def _sibling(out, suffix):
    return out.with_name(out.stem + suffix)


def _print_services(section):
    print(_color("service                 $/m2.a", "1", sys.stdout))
    for kind, v in section["services"].items():
        print(f"{kind:<22} {v:>10.6g}")
    print(f"{'composite':<22} {section['composite']:>10.6g}")
    print(f"theta {section['theta']:.6g}  rho {section['rho']:.6g}")


def _print_cba(section):
    print(_color(f"{'case':<28} {'benefit':>10} {'cost':>10} {'ratio':>8}", "1", sys.stdout))
    for row in section["table"]:
        print(f"{row['case']:<28} {row['benefit']:>10.6g} {row['cost']:>10.6g} "
              f"{row['ratio']:>8.4f}")


def _sensitivity_table(section):
    lines = ["input\tdelta_plus\tdelta_minus\tS_i\tST_i\tS_i_stderr\tST_i_stderr"]
    for r in section["inputs"]:
        cells = [r["delta_plus"], r["delta_minus"], r["first_order"], r["total"],
                 r["first_order_se"], r["total_se"]]
        lines.append("\t".join([r["input"]] + ["" if c is None else textio.format_float(c)
                                               for c in cells]))
    return "\n".join(lines) + "\n"


def _series_table(section):
    lines = ["year\tvalue"] + [f"{y}\t{textio.format_float(v)}" for y, v in section["series"]]
    return "\n".join(lines) + "\n"


def cmd_validate(args):
    s = _load(args.scenario)
    if isinstance(s, int):
        return s
    print(f"{args.scenario}: valid")
    return EXIT_OK


def _run_stage(args, name):
    s = _load(args.scenario)
    if isinstance(s, int):
        return s
    out = _out_path(args)
    extra = {}
    try:
        if name == "value":
            section = pipeline.value_section(s)
        elif name == "cba":
            section = pipeline.cba_section(s)
        elif name == "forecast":
            section, model = pipeline.forecast_section(s, args.horizon, args.seed)
            extra[".forecast.tsv"] = _series_table(section)
            extra[".lstm.json"] = textio.dumps(model)
        else:
            section = pipeline.sensitivity_section(s, args.samples, args.fraction, args.seed)
            extra[".sensitivity.tsv"] = _sensitivity_table(section)
    except StageError as exc:
        _err(f"stage failure: {exc}")
        return EXIT_STAGE
    try:
        doc = pipeline.merge_section(pipeline.load_document(out, s, args.seed), name, section)
        for suffix, text in extra.items():
            textio.atomic_write(_sibling(out, suffix), text)
        pipeline.write_document(out, doc)
    except OSError as exc:
        _err(f"error: cannot write results: {exc}")
        return EXIT_IO
    if name == "value":
        _print_services(section)
    elif name == "cba":
        _print_cba(section)
    elif name == "forecast":
        for y, v in section["series"]:
            print(f"{y}  {v:.6g}")
        print(f"trend: {section['trend']}")
    else:
        print(f"verdict: {section['verdict']['verdict']}")
        for r in section["inputs"]:
            print(f"{r['input']:<28} {_fmt(r['delta_plus']):>12} {_fmt(r['delta_minus']):>12} "
                  f"S={_fmt(r['first_order'])} ST={_fmt(r['total'])}")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_run(args):
    s = _load(args.scenario)
    if isinstance(s, int):
        return s
    out = _out_path(args)
    try:
        doc, model = pipeline.run_all(s, args.horizon, args.samples, args.fraction, args.seed)
    except StageError as exc:
        _err(f"stage failure: {exc}")
        return EXIT_STAGE
    try:
        textio.atomic_write(_sibling(out, ".forecast.tsv"), _series_table(doc["forecast"]))
        textio.atomic_write(_sibling(out, ".lstm.json"), textio.dumps(model))
        textio.atomic_write(_sibling(out, ".sensitivity.tsv"),
                            _sensitivity_table(doc["sensitivity"]))
        pipeline.write_document(out, doc)
    except OSError as exc:
        _err(f"error: cannot write results: {exc}")
        return EXIT_IO
    _print_services(doc["value"])
    _print_cba(doc["cba"])
    print(f"forecast trend: {doc['forecast']['trend']}")
    print(f"stability: {doc['sensitivity']['verdict']['verdict']}")
    print(f"wrote {out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="ecoval", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ecoval {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, helptext, fn, *options):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("scenario")
        p.set_defaults(fn=fn, stage=name)
        if name != "validate":
            p.add_argument("--out", help="results document (default: <scenario>.results.json)")
            p.add_argument("--seed", type=int, help="override the scenario seed")
        if "horizon" in options:
            p.add_argument("--horizon", type=int, default=5)
        if "samples" in options:
            p.add_argument("--samples", type=int, default=1024)
            p.add_argument("--fraction", type=float, default=0.10)
        return p

    add("validate", "check a scenario file", cmd_validate)
    for name, helptext, opts in (("value", "marine, fuzzy and urban values", ()),
                                 ("cba", "cost-benefit comparison", ()),
                                 ("forecast", "LSTM forecast of the history", ("horizon",)),
                                 ("sensitivity", "perturbation and Sobol analysis",
                                  ("samples",))):
        add(name, helptext, lambda a: _run_stage(a, a.stage), *opts)
    add("run", "every stage in order", cmd_run, "horizon", "samples")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "horizon", 1) < 1:
        _err("error: --horizon must be >= 1")
        return EXIT_STAGE
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
