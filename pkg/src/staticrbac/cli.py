"""Command-line driver.

``staticrbac verify --policy FILE --src DIR`` checks every ``.java`` file
below ``DIR`` against the policy. Diagnostics are printed one per line as
``<file>:<line>: <kind>: <message>``; warnings carry a ``warning:`` prefix
inside the message. ``--format json`` prints a single object instead.

``staticrbac tables --policy FILE`` prints the flattened Resources and
Roles tables.

Exit codes: 0 accepted, 1 rejected, 2 policy error, 3 source parse error,
4 I/O or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, TextIO

from staticrbac.checker import Diagnostic, Verdict, verify_program
from staticrbac.errors import PolicyError, SourceError
from staticrbac.frontend import find_sources, parse_program
from staticrbac.jpol import Policy, load_policy
from staticrbac.oracle import simulate_sessions, unauthorized

EXIT_ACCEPTED = 0
EXIT_REJECTED = 1
EXIT_POLICY_ERROR = 2
EXIT_SOURCE_ERROR = 3
EXIT_IO_ERROR = 4

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    policy_path: str
    source_root: Optional[str] = None
    format: str = "text"
    strict_packages: bool = False
    explain: bool = False


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def _read_policy(path: str) -> Policy:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _Exit(EXIT_IO_ERROR,
                    f"cannot read policy {path}: {exc.strerror or exc}")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise _Exit(EXIT_POLICY_ERROR,
                    f"{path}: policy is not valid UTF-8 ({exc.reason})")
    try:
        return load_policy(text)
    except PolicyError as exc:
        raise _Exit(EXIT_POLICY_ERROR, f"{path}:{exc}")


def _format_line(d: Diagnostic, policy_path: str) -> str:
    message = d.message if d.is_error else "warning: " + d.message
    return f"{d.path or policy_path}:{d.line}: {d.kind}: {message}"


def _emit(config: RunConfig, verdict: Verdict, explained, out: TextIO):
    if config.format == "json":
        diags = []
        for d in verdict.diagnostics:
            item = d.to_dict()
            if item["path"] is None:
                item["path"] = config.policy_path
            diags.append(item)
        doc = {"schemaVersion": SCHEMA_VERSION,
               "accepted": verdict.accepted,
               "diagnostics": diags}
        if explained is not None:
            doc["unauthorizedAccesses"] = [
                {"role": a.role, "resource": a.resource, "action": a.action,
                 "path": [{"class": c, "method": m} for c, m in a.path]}
                for a in explained]
        out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
        return
    for d in verdict.diagnostics:
        out.write(_format_line(d, config.policy_path) + "\n")
    for access in explained or ():
        out.write("explain: " + access.describe() + "\n")


def run(config: RunConfig, out: Optional[TextIO] = None,
        err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        if config.format not in ("text", "json"):
            raise _Exit(EXIT_IO_ERROR, f"unknown format {config.format!r}")
        if not os.path.isfile(config.policy_path):
            raise _Exit(EXIT_IO_ERROR,
                        f"policy file not found: {config.policy_path}")
        if config.source_root is None or \
                not os.path.isdir(config.source_root):
            raise _Exit(EXIT_IO_ERROR,
                        f"source directory not found: {config.source_root}")
        policy = _read_policy(config.policy_path)
        try:
            program = parse_program(find_sources(config.source_root))
        except SourceError as exc:
            raise _Exit(EXIT_SOURCE_ERROR, str(exc))
        except OSError as exc:
            raise _Exit(EXIT_IO_ERROR, f"cannot read sources: {exc}")
    except _Exit as exc:
        err.write(f"staticrbac: {exc.message}\n")
        return exc.code

    verdict = verify_program(policy, program, config.strict_packages)
    explained = None
    if config.explain:
        explained = unauthorized(policy, simulate_sessions(policy, program))
    _emit(config, verdict, explained, out)
    status = "accepted" if verdict.accepted else "rejected"
    err.write(f"staticrbac: {status}: {len(program)} classes, "
              f"{verdict.examined_calls} calls, {len(verdict.errors)} "
              f"errors, {len(verdict.warnings)} warnings\n")
    return EXIT_ACCEPTED if verdict.accepted else EXIT_REJECTED


def format_tables(policy: Policy) -> str:
    """Stable text rendering of the Resources and Roles tables.

    Resources and roles appear in declaration order, permissions sorted by
    resource then action; inherited permissions are marked.
    """
    lines = ["Resources"]
    for res in policy.resources.values():
        lines.append(f"  {res.name}: {', '.join(res.actions)}")
    lines.append("Roles")
    if not policy.roles:
        lines.append("  (none)")
    for role in policy.roles.values():
        head = f"  {role.name}"
        if role.subsumes is not None:
            head += f" subsumes {role.subsumes}"
        lines.append(head)
        if not role.effective:
            lines.append("    (no permissions)")
        inherited = role.inherited
        for perm in sorted(role.effective):
            mark = " (inherited)" if perm in inherited else ""
            lines.append(f"    {perm}{mark}")
    return "\n".join(lines) + "\n"


def dump_tables(config: RunConfig, out: Optional[TextIO] = None,
                err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        if not os.path.isfile(config.policy_path):
            raise _Exit(EXIT_IO_ERROR,
                        f"policy file not found: {config.policy_path}")
        policy = _read_policy(config.policy_path)
    except _Exit as exc:
        err.write(f"staticrbac: {exc.message}\n")
        return exc.code
    out.write(format_tables(policy))
    return EXIT_ACCEPTED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="staticrbac",
        description="Statically check a Java program against a JPol policy.")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="verify a program")
    verify.add_argument("--policy", required=True, help="JPol policy file")
    verify.add_argument("--src", required=True,
                        help="root directory of the .java sources")
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--strict-packages", action="store_true",
                        help="also require the MVC package layout")
    verify.add_argument("--explain", action="store_true",
                        help="list reachable unauthorized actions with paths")

    tables = sub.add_parser("tables", help="print the policy tables")
    tables.add_argument("--policy", required=True, help="JPol policy file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which would collide with
        # the policy-error code
        return EXIT_ACCEPTED if exc.code == 0 else EXIT_IO_ERROR
    if args.command == "tables":
        return dump_tables(RunConfig(args.policy))
    return run(RunConfig(args.policy, args.src, args.format,
                         args.strict_packages, args.explain))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
