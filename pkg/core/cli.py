"""
Command line: run construction scripts, audit the stated claims, scan the
geography lattice, list the catalog and work with presentation files.

Exit codes: 0 success, 1 engine or script failure (including a failed
assert), 2 usage error, 3 internal error. `audit` exits 0 whatever it finds.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from core.domain import AuditRow, AuditStatus
from core.errors import CalculusError
from core.geography import CSV_HEADER, Window
from core.presentations import render_presentation
from core.repository import JsonStateRepository, dumps_state
from core.services import CalculusService, get_calculus_service
from core.settings import DEFAULT_SETTINGS_PATH, load_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


# === COMMANDS ===

def _run_command(args: argparse.Namespace, service: CalculusService) -> int:
    with open(args.file, "r", encoding="utf-8") as f:
        text = f.read()
    result = service.run_script(text)
    sys.stdout.write(result.text)
    if args.json:
        target = CalculusService(JsonStateRepository(Path(args.json)), service.scan_driver, service.tietze_budget)
        saved = target.save_bindings(result)
        logger.info("saved %d states to %s", len(saved), args.json)
    return result.exit_code


def _audit_rows_json(rows: Sequence[AuditRow]) -> str:
    return json.dumps(
        [
            {
                "claim_id": r.claim_id,
                "citation": r.citation,
                "stated": r.stated,
                "computed": r.computed,
                "status": r.status.value,
            }
            for r in rows
        ],
        indent=2,
    )


def format_audit_table(rows: Sequence[AuditRow]) -> str:
    """Aligned text table followed by the mismatch count."""
    header = ("claim", "stated", "computed", "status", "citation")
    body = [(r.claim_id, str(r.stated), str(r.computed), r.status.value, r.citation) for r in rows]
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(4)]
    lines = []
    for line in [header, *body]:
        cells = [cell.ljust(widths[i]) for i, cell in enumerate(line[:4])]
        lines.append("  ".join(cells + [line[4]]).rstrip())
    mismatches = sum(r.status is AuditStatus.MISMATCH for r in rows)
    lines.append(f"{len(rows)} claims, {mismatches} mismatches")
    return "\n".join(lines) + "\n"


def _audit_command(args: argparse.Namespace, service: CalculusService) -> int:
    rows = service.audit(args.only)
    if args.json:
        sys.stdout.write(_audit_rows_json(rows) + "\n")
    else:
        sys.stdout.write(format_audit_table(rows))
    return EXIT_OK


def _scan_command(args: argparse.Namespace, service: CalculusService) -> int:
    window = Window(args.chi_min, args.chi_max, args.c_min, args.c_max)
    if window.is_empty:
        text = ",".join(CSV_HEADER) + "\n"
    else:
        text = service.scan(window, args.base).to_csv()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info("wrote %s", out)
    return EXIT_OK


def _catalog_command(args: argparse.Namespace, service: CalculusService) -> int:
    listing = service.catalog_listing()
    for section in ("blocks", "pipelines", "covers"):
        entries = listing[section]
        sys.stdout.write(f"{section}:\n")
        width = max((len(name) for name, _ in entries), default=0)
        for name, summary in entries:
            sys.stdout.write(f"  {name.ljust(width)}  {summary}".rstrip() + "\n")
    return EXIT_OK


def _pi1_command(args: argparse.Namespace, service: CalculusService) -> int:
    if args.simplify:
        simplified, steps = service.simplify_file(args.file, args.budget)
        for step in steps:
            sys.stdout.write(f"{step.move}: {step.detail}\n")
        sys.stdout.write(render_presentation(simplified))
    else:
        sys.stdout.write(f"{service.abelianize_file(args.file)}\n")
    return EXIT_OK


def _show_command(args: argparse.Namespace, service: CalculusService) -> int:
    state = service.pipeline(args.name).state
    sys.stdout.write(dumps_state(state) + "\n")
    return EXIT_OK


# === PARSER ===

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fourfold", description="Symbolic calculus of closed 4-manifolds.")
    parser.add_argument("--settings", default=str(DEFAULT_SETTINGS_PATH), help="settings JSON file")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_p = subparsers.add_parser("run", help="Run a construction script.")
    run_p.add_argument("file")
    run_p.add_argument("--json", metavar="OUT", help="save bound states to this JSON file")
    run_p.set_defaults(func=_run_command)

    audit_p = subparsers.add_parser("audit", help="Check every stated numeric claim.")
    audit_p.add_argument("--json", action="store_true", help="emit rows as JSON")
    audit_p.add_argument("--only", metavar="PREFIX", help="keep claim ids starting with PREFIX")
    audit_p.set_defaults(func=_audit_command)

    scan_p = subparsers.add_parser("scan", help="Scan a window of the (chi_h, c1^2) lattice.")
    for flag in ("--chi-min", "--chi-max", "--c-min", "--c-max"):
        scan_p.add_argument(flag, type=int, required=True)
    scan_p.add_argument("--base", action="append", required=True, help="pipeline or block name (repeatable)")
    scan_p.add_argument("--out", required=True, help="CSV output file")
    scan_p.set_defaults(func=_scan_command)

    catalog_p = subparsers.add_parser("catalog", help="List blocks, pipelines and cover specs.")
    catalog_p.set_defaults(func=_catalog_command)

    pi1_p = subparsers.add_parser("pi1", help="Abelianize or simplify a presentation file.")
    pi1_p.add_argument("file")
    mode = pi1_p.add_mutually_exclusive_group()
    mode.add_argument("--abelianize", action="store_true", help="print H1 (the default)")
    mode.add_argument("--simplify", action="store_true", help="run Tietze simplification")
    pi1_p.add_argument("--budget", type=int, help="Tietze node budget (defaults to the settings value)")
    pi1_p.set_defaults(func=_pi1_command)

    show_p = subparsers.add_parser("show", help="Print the JSON state of a named pipeline.")
    show_p.add_argument("name")
    show_p.set_defaults(func=_show_command)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    if args.command == "pi1" and args.budget is not None and not args.simplify:
        parser.print_usage(sys.stderr)
        sys.stderr.write("fourfold pi1: error: --budget requires --simplify\n")
        return EXIT_USAGE

    settings = load_settings(Path(args.settings))
    level = logging.DEBUG if args.verbose else getattr(logging, str(settings["log_level"]).upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        service = get_calculus_service(settings)
        return int(args.func(args, service))
    except CalculusError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAILURE
    except Exception as e:
        logger.exception("internal error")
        sys.stderr.write(f"internal error: {type(e).__name__}: {e}\n")
        return EXIT_INTERNAL
