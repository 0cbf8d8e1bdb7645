"""Command-line interface: exact chart fits, cocycle assembly, verification.

Exit codes: 0 success; 1 unreadable or malformed inputs; 2 a singular
(degenerate) cell; 3 an obstructed triple in `cocycle`; 4 a failed exact check
in `verify`.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .assembly import (
    ObstructionReport,
    assemble_cochain,
    cochain_from_json,
    fit_all_cells,
    fits_to_json,
    report_to_json,
    verify_cocycle,
)
from .data import (
    Cover,
    cover_from_json,
    dataset_from_csv,
    dataset_from_json,
    validate_cover,
)
from .errors import LsglueError, Singular
from .koszul import koszul_to_json
from .model import affine_features, model_from_json

_EXIT_OK = 0
_EXIT_PARSE = 1
_EXIT_SINGULAR = 2
_EXIT_OBSTRUCTED = 3
_EXIT_VERIFY = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsglue",
        description=(
            "Exact weighted least-squares fits on overlapping charts of a data"
            " set, assembled into a cochain of fits, pairwise homotopy"
            " witnesses, and triple-overlap obstructions, with every gluing"
            " equation checked in exact rational arithmetic."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(cmd: argparse.ArgumentParser, cover_required: bool) -> None:
        cmd.add_argument("--dataset", required=True, help="dataset JSON or CSV file")
        cmd.add_argument(
            "--cover",
            required=cover_required,
            help="cover JSON file (omitted: one chart over the whole set)",
        )
        cmd.add_argument("--model", help="model JSON file (default: affine features)")
        cmd.add_argument(
            "--max-degree",
            type=int,
            default=2,
            metavar="K",
            help="deepest overlap to enumerate (default 2)",
        )
        cmd.add_argument("--format", choices=("json", "text"), default="json")
        cmd.add_argument("--allow-negative-weights", action="store_true")
        cmd.add_argument("--output", metavar="PATH", help="write report here instead of stdout")

    fit = sub.add_parser("fit", help="least-squares solution on every cell of the cover")
    add_common(fit, cover_required=False)

    cocycle = sub.add_parser(
        "cocycle", help="assemble fits, pair witnesses, and triple obstructions"
    )
    add_common(cocycle, cover_required=True)

    verify = sub.add_parser("verify", help="recheck a previously emitted cocycle report")
    add_common(verify, cover_required=True)
    verify.add_argument("--cochain", required=True, help="cocycle report JSON to recheck")

    return parser


def _read_json(path: str) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise LsglueError(
            f"{path}: invalid JSON at line {err.lineno} column {err.colno}: {err.msg}"
        ) from None


def _load_inputs(args):
    if args.dataset.endswith(".csv"):
        data = dataset_from_csv(
            Path(args.dataset).read_text(encoding="utf-8"),
            allow_negative_weights=args.allow_negative_weights,
        )
    else:
        data = dataset_from_json(
            _read_json(args.dataset),
            allow_negative_weights=args.allow_negative_weights,
        )
    if args.cover:
        cover = cover_from_json(_read_json(args.cover), data)
    else:
        cover = Cover.of(data, [("all", sorted(data.indices()))])
        validate_cover(cover)
    if args.model:
        features = model_from_json(_read_json(args.model), data.ambient_dim)
    else:
        features = affine_features(data.ambient_dim)
    return data, cover, features


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _fmt_float(value: float) -> str:
    return f"{value:.6g}"


def _fmt_pair(exact: list[str], floats: list[float]) -> str:
    exact_s = ", ".join(exact)
    float_s = ", ".join(_fmt_float(v) for v in floats)
    return f"({exact_s}) ~ ({float_s})"


def _render_fit_text(doc: dict) -> str:
    lines = ["cells:"]
    for label, record in sorted(doc["cells"].items(), key=lambda kv: (kv[1]["degree"], kv[0])):
        lines.append(
            f"  {label}: indices={record['indices']}"
            f" a_hat={_fmt_pair(record['a_hat'], record['a_hat_float'])}"
        )
    return "\n".join(lines) + "\n"


def _render_report_text(doc: dict) -> str:
    lines = ["charts:"]
    for label, record in sorted(doc["charts"].items()):
        lines.append(
            f"  {label}: indices={record['indices']}"
            f" a_hat={_fmt_pair(record['a_hat'], record['a_hat_float'])}"
        )
    if doc["pairs"]:
        lines.append("pairs:")
        for label, record in sorted(doc["pairs"].items()):
            beta = {key: coeff["c0"] for key, coeff in sorted(record["beta"].items())}
            lines.append(
                f"  {label}: a_hat={_fmt_pair(record['a_hat'], record['a_hat_float'])}"
                f" delta={_fmt_pair(record['delta'], record['delta_float'])}"
                f" beta={beta} residual_zero={record['residual_zero']}"
            )
    if doc["triples"]:
        lines.append("triples:")
        for label, record in sorted(doc["triples"].items()):
            lines.append(
                f"  {label}: defect_constant="
                f"{_fmt_pair(record['defect_constant'], record['defect_constant_float'])}"
                f" obstructed={record['obstructed']}"
                f" residual_zero={record['residual_zero']}"
            )
    metrics = doc.get("metrics")
    if metrics:
        lines.append("metrics:")
        for key in sorted(metrics):
            value = metrics[key]
            lines.append(f"  {key} = {'n/a' if value is None else _fmt_float(value)}")
    return "\n".join(lines) + "\n"


def _dump_failures(report: ObstructionReport) -> None:
    for cell, check in report.pairs.items():
        if not check.residual_zero:
            print(
                f"pair {cell.label}: residual {json.dumps(koszul_to_json(check.residual))}",
                file=sys.stderr,
            )
    for cell, check in report.triples.items():
        if not check.residual_zero:
            print(
                f"triple {cell.label}: residual {json.dumps(koszul_to_json(check.residual))}"
                f" (defect constant {check.defect_constant.to_strings()})",
                file=sys.stderr,
            )


def _cmd_fit(args) -> int:
    _, cover, features = _load_inputs(args)
    fits = fit_all_cells(cover, features, args.max_degree)
    doc = fits_to_json(fits)
    _emit(args, _json_text(doc) if args.format == "json" else _render_fit_text(doc))
    return _EXIT_OK


def _cmd_cocycle(args) -> int:
    _, cover, features = _load_inputs(args)
    fits = fit_all_cells(cover, features, args.max_degree)
    cochain, report = assemble_cochain(fits)
    doc = report_to_json(cochain, fits, report)
    _emit(args, _json_text(doc) if args.format == "json" else _render_report_text(doc))
    if report.any_obstructed() or not report.all_verified():
        return _EXIT_OBSTRUCTED
    return _EXIT_OK


def _cmd_verify(args) -> int:
    _, cover, features = _load_inputs(args)
    fits = fit_all_cells(cover, features, args.max_degree)
    cochain = cochain_from_json(_read_json(args.cochain), fits)
    report = verify_cocycle(cochain, fits)
    doc = report_to_json(cochain, fits, report)
    _emit(args, _json_text(doc) if args.format == "json" else _render_report_text(doc))
    if not report.all_verified():
        _dump_failures(report)
        return _EXIT_VERIFY
    return _EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"fit": _cmd_fit, "cocycle": _cmd_cocycle, "verify": _cmd_verify}
    try:
        return handlers[args.command](args)
    except Singular as err:
        print(f"error: singular cell: {err}", file=sys.stderr)
        return _EXIT_SINGULAR
    except LsglueError as err:
        print(f"error: {err}", file=sys.stderr)
        return _EXIT_PARSE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return _EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
