"""Command-line interface.

``flowcheck analyze file.go`` prints a report (text or JSON) and exits 0
when every case is deadlock-free, 1 on any deadlock, 2 when the file uses
unsupported features, and 3 on internal errors or an inconclusive
reduction.  ``flowcheck corpus dir`` runs the bundled expectation corpus
laid out as ``dir/<expected>/<name>.go``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import engine
from .gofront import analyze_file
from .notation import render

EXIT_OK = 0
EXIT_DEADLOCK = 1
EXIT_UNSUPPORTED = 2
EXIT_ERROR = 3

_EXPECTED_DIRS = {
    "nodeadlock": "NoDeadlock",
    "deadlock": "Deadlock",
    "unsupported": "Unsupported",
}


def exit_code_for(worst: str) -> int:
    return {
        "NoDeadlock": EXIT_OK,
        "Deadlock": EXIT_DEADLOCK,
        "Unsupported": EXIT_UNSUPPORTED,
        "Inconclusive": EXIT_ERROR,
    }[worst]


def report_dict(path, analysis, elapsed_ms) -> dict:
    verdicts = []
    for case in analysis.cases:
        verdict = case.verdict
        residual = "" if verdict.residual is None else render(verdict.residual)
        externals = [render(e) for e in verdict.externals]
        verdicts.append(
            {
                "case": case.label,
                "verdict": verdict.kind,
                "residual": residual,
                "externals": externals,
                "reason": verdict.reason,
            }
        )
    return {
        "file": str(path),
        "verdicts": verdicts,
        "warnings": list(analysis.warnings),
        "steps": analysis.steps,
        "elapsed_ms": elapsed_ms,
    }


def print_text_report(report, analysis, show_trace, out):
    print("%s: %s" % (report["file"], analysis.worst()), file=out)
    for case, result in zip(report["verdicts"], analysis.cases):
        label = case["case"] or "-"
        line = "  case %s: %s" % (label, case["verdict"])
        if case["verdict"] == "Deadlock":
            line += "  residual %s" % case["residual"]
        if case["reason"]:
            line += "  (%s)" % case["reason"]
        print(line, file=out)
        if show_trace:
            for entry in result.trace:
                print("    " + entry.line(), file=out)
    for warning in report["warnings"]:
        print("  warning: %s" % warning, file=out)


def run_analyze(path, fmt="text", show_trace=False,
                max_steps=engine.DEFAULT_MAX_STEPS, out=None) -> int:
    out = out if out is not None else sys.stdout
    started = time.monotonic()
    try:
        analysis = analyze_file(path, max_steps=max_steps)
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_ERROR
    elapsed_ms = int((time.monotonic() - started) * 1000)
    report = report_dict(path, analysis, elapsed_ms)
    if fmt == "json":
        if show_trace:
            report["trace"] = [
                entry.line() for case in analysis.cases for entry in case.trace
            ]
        json.dump(report, out, sort_keys=True, ensure_ascii=False)
        out.write("\n")
    else:
        print_text_report(report, analysis, show_trace, out)
    return exit_code_for(analysis.worst())


def run_corpus(directory, max_steps=engine.DEFAULT_MAX_STEPS, out=None) -> int:
    out = out if out is not None else sys.stdout
    root = Path(directory)
    if not root.is_dir():
        print("error: corpus directory %s not found" % root, file=sys.stderr)
        return EXIT_ERROR
    entries = []
    for sub, expected in sorted(_EXPECTED_DIRS.items()):
        folder = root / sub
        if folder.is_dir():
            for path in sorted(folder.glob("*.go")):
                entries.append((path, expected))
    if not entries:
        print("0/0 corpus entries; nothing to check", file=out)
        return EXIT_ERROR
    matched = 0
    for path, expected in entries:
        analysis = analyze_file(path, max_steps=max_steps)
        actual = analysis.worst()
        ok = actual == expected
        matched += ok
        marker = "ok  " if ok else "FAIL"
        print(
            "%s %-34s expected %-11s got %s"
            % (marker, path.name, expected, actual),
            file=out,
        )
    print("%d/%d corpus entries match" % (matched, len(entries)), file=out)
    return EXIT_OK if matched == len(entries) else EXIT_DEADLOCK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="flowcheck",
        description="Static deadlock analyzer for a Go subset, based on "
        "coroutine flow types.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze one Go file")
    p_analyze.add_argument("file")
    p_analyze.add_argument("--format", choices=("text", "json"), default="text")
    p_analyze.add_argument("--trace", action="store_true",
                           help="print the reduction trace")
    p_analyze.add_argument("--max-steps", type=int,
                           default=engine.DEFAULT_MAX_STEPS)

    p_corpus = sub.add_parser("corpus", help="run an expectation corpus")
    p_corpus.add_argument("directory")
    p_corpus.add_argument("--max-steps", type=int,
                          default=engine.DEFAULT_MAX_STEPS)

    args = parser.parse_args(argv)
    if args.command == "analyze":
        return run_analyze(args.file, args.format, args.trace, args.max_steps)
    return run_corpus(args.directory, args.max_steps)


if __name__ == "__main__":
    sys.exit(main())
