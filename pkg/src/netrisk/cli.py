"""Command-line interface.

Thin client over the engine: every analysis input comes from files or
flags so runs are reproducible. Exit codes: 0 on success, 1 when
validation fails, 2 on usage errors (argparse's default).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import curves, engine, model_io
from .errors import ValidationError
from .model import AnalysisSettings, ModelDocument


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netrisk",
        description="Probable-cost-of-failure analysis of infrastructure networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a model file")
    p_validate.add_argument("model", type=Path)
    p_validate.set_defaults(handler=cmd_validate)

    p_analyze = sub.add_parser("analyze", help="evaluate a model into a report")
    p_analyze.add_argument("model", type=Path)
    p_analyze.add_argument("--back-period", type=float, default=None, metavar="YEARS")
    p_analyze.add_argument(
        "--format", choices=("structured", "tabular"), default="structured"
    )
    p_analyze.add_argument("--out", type=Path, default=None)
    p_analyze.set_defaults(handler=cmd_analyze)

    p_importance = sub.add_parser(
        "importance", help="rank components, events or lines by importance"
    )
    p_importance.add_argument("model", type=Path)
    p_importance.add_argument(
        "--by", choices=("component", "event", "line"), required=True
    )
    p_importance.set_defaults(handler=cmd_importance)

    p_whatif = sub.add_parser("what-if", help="evaluate a scenario against a model")
    p_whatif.add_argument("model", type=Path)
    p_whatif.add_argument("--scenario", type=Path, required=True)
    p_whatif.set_defaults(handler=cmd_what_if)

    p_plot = sub.add_parser("plot-data", help="emit curve samples for plotting")
    p_plot.add_argument("model", type=Path)
    p_plot.add_argument(
        "--curve", choices=("fragility", "hazard", "failure"), required=True
    )
    p_plot.add_argument(
        "--id",
        dest="target",
        required=True,
        help="fragility/failure: component/event; hazard: event/area",
    )
    p_plot.set_defaults(handler=cmd_plot_data)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--addr", default="127.0.0.1:8000", metavar="HOST:PORT")
    p_serve.add_argument("--model-dir", type=Path, default=None)
    p_serve.add_argument("--ui-dir", type=Path, default=None)
    p_serve.set_defaults(handler=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as err:
        print(f"error: {err.code}: {err.message}", file=sys.stderr)
        return 1


def _load_model(path: Path) -> ModelDocument | None:
    try:
        data = path.read_bytes()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None
    result = model_io.load_model(data)
    for diag in result.diagnostics:
        stream = sys.stderr if diag.severity == model_io.ERROR else sys.stdout
        print(diag.render(), file=stream)
    return result.model


def cmd_validate(args) -> int:
    try:
        data = args.model.read_bytes()
    except OSError as exc:
        print(f"error: cannot read {args.model}: {exc}", file=sys.stderr)
        return 1
    result = model_io.load_model(data)
    for diag in result.diagnostics:
        print(diag.render())
    if not result.ok:
        print(f"invalid: {len(result.errors())} error(s)")
        return 1
    print(f"valid: {len(result.diagnostics)} warning(s)")
    return 0


def _with_back_period(model: ModelDocument, years: float | None) -> ModelDocument:
    if years is None:
        return model
    if years <= 0:
        raise ValidationError(
            "back_period_invalid", f"back period must be > 0 years, got {years}"
        )
    return replace(
        model,
        analysis=AnalysisSettings(
            back_period_years=years,
            connection_queries=model.analysis.connection_queries,
        ),
    )


def cmd_analyze(args) -> int:
    model = _load_model(args.model)
    if model is None:
        return 1
    report = engine.evaluate(_with_back_period(model, args.back_period))
    payload = model_io.emit_report(report, args.format)
    if args.out is not None:
        args.out.write_bytes(payload)
    else:
        sys.stdout.write(payload.decode("utf-8"))
    return 0


def cmd_importance(args) -> int:
    model = _load_model(args.model)
    if model is None:
        return 1
    report = engine.evaluate(model)
    family = {
        "component": report.component_importance,
        "event": report.event_importance,
        "line": report.line_importance,
    }[args.by]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow((args.by, "importance", "importance_2dp"))
    if family is None:
        print("total probable cost is zero; importance factors are undefined")
        return 0
    for name, value in sorted(family.items(), key=lambda kv: (-kv[1], kv[0])):
        writer.writerow((name, repr(value), f"{value:.2f}"))
    return 0


def cmd_what_if(args) -> int:
    model = _load_model(args.model)
    if model is None:
        return 1
    try:
        scenario_data = args.scenario.read_bytes()
    except OSError as exc:
        print(f"error: cannot read {args.scenario}: {exc}", file=sys.stderr)
        return 1
    scenario_result = model_io.load_scenario(scenario_data)
    for diag in scenario_result.diagnostics:
        print(diag.render(), file=sys.stderr)
    if not scenario_result.ok:
        return 1
    base_report = engine.evaluate(model)
    variant = engine.apply_scenario(model, scenario_result.scenario)
    variant_report = engine.evaluate(variant)
    delta = engine.what_if_delta(base_report, variant_report)
    document = {
        "scenario": scenario_result.scenario.name,
        "delta": model_io.delta_to_dict(delta),
        "variant_report": model_io.report_to_dict(variant_report),
    }
    json.dump(document, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_plot_data(args) -> int:
    model = _load_model(args.model)
    if model is None:
        return 1
    first, _, second = args.target.partition("/")
    if not second:
        print(
            "error: --id must be component/event (fragility, failure) or "
            "event/area (hazard)",
            file=sys.stderr,
        )
        return 1
    if args.curve == "fragility":
        unit, points = curves.fragility_curve_points(model, first, second)
        columns = ("intensity", "failure_probability")
    elif args.curve == "hazard":
        unit, points = curves.hazard_curve_points(model, first, second)
        columns = ("intensity", "annual_exceedance_probability")
    else:
        unit, points = curves.failure_curve_points(model, first, second)
        columns = ("intensity", "annual_failure_contribution")
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow((f"{columns[0]}_{unit}", columns[1]))
    for x, y in points:
        writer.writerow((repr(x), repr(y)))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port_text = args.addr.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: --addr must be HOST:PORT, got {args.addr!r}", file=sys.stderr)
        return 1
    app = create_app(model_dir=args.model_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=host, port=int(port_text))
    return 0


if __name__ == "__main__":
    sys.exit(main())
