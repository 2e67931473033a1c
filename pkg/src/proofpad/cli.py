"""Command-line frontend.

Subcommands: lint, indent, repl, check, admit, serve.  Heavy imports are
deferred into the subcommand bodies to keep cold start fast.

Exit codes: 0 success, 1 lint errors / failed admissions / counterexamples,
2 usage errors.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proofpad", description="ACL2 tooling and proof sessions")
    parser.add_argument("--version", action="version",
                        version=f"proofpad {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lint", help="static checks over a source file")
    p.add_argument("file")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("indent", help="re-indent a source file")
    p.add_argument("file")
    p.add_argument("--write", action="store_true",
                   help="rewrite the file in place instead of printing")

    p = sub.add_parser("repl", help="interactive prompt with event routing")
    p.add_argument("--fake-backend", action="store_true")
    p.add_argument("--acl2", help="path to the ACL2 executable")

    p = sub.add_parser("check", help="run defproperty random tests")
    p.add_argument("file")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fake-backend", action="store_true")
    p.add_argument("--acl2")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("admit", help="batch admit every form in a file")
    p.add_argument("file")
    p.add_argument("--fake-backend", action="store_true")
    p.add_argument("--acl2")

    p = sub.add_parser("serve", help="run the local IDE service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--fake-backend", action="store_true")
    p.add_argument("--acl2")
    p.add_argument("--static-dir", help="directory of UI assets to serve")
    return parser


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def _make_backend(args):
    from .backend import BackendConfig, discover_acl2, start
    if args.fake_backend:
        return start(fake=True)
    exe = discover_acl2(getattr(args, "acl2", None))
    if exe is None:
        print("proofpad: no ACL2 executable found; pass --acl2, set "
              "PROOFPAD_ACL2, or use --fake-backend", file=sys.stderr)
        raise SystemExit(2)
    return start(BackendConfig(executable=exe))


def _cmd_lint(args) -> int:
    import json

    from .lint import lint_source
    diags = lint_source(_read(args.file))
    if args.format == "json":
        print(json.dumps([{
            "start": d.start, "end": d.end, "severity": d.severity,
            "code": d.code, "message": d.message,
        } for d in diags]))
    else:
        for d in diags:
            print(f"{args.file}:{d.start}-{d.end}: {d.severity}: "
                  f"{d.code}: {d.message}")
    return 1 if any(d.severity == "error" for d in diags) else 0


def _cmd_indent(args) -> int:
    from .indent import reindent
    result = reindent(_read(args.file))
    if args.write:
        with open(args.file, "w", encoding="utf-8") as f:
            f.write(result)
    else:
        sys.stdout.write(result)
    return 0


def _cmd_repl(args) -> int:
    from .errors import IncompleteForm
    from .repl import Moved, submit_input
    from .session import SessionState

    backend = _make_backend(args)
    session = SessionState("")
    pending = ""
    prompt = "pp> "
    while True:
        try:
            line = input(prompt if not pending else "... ")
        except EOFError:
            print()
            return 0
        pending = (pending + "\n" + line) if pending else line
        if not pending.strip():
            pending = ""
            continue
        try:
            results = submit_input(pending, session, backend)
        except IncompleteForm:
            continue  # keep reading a multi-line form
        pending = ""
        for result in results:
            if isinstance(result, Moved):
                print("; moved to definitions")
            else:
                summary = result.summary
                for item in summary.items:
                    print(f"[{item.severity}] {item.headline}")
                if not summary.items:
                    print(summary.raw.strip())


def _cmd_check(args) -> int:
    import json

    from .doublecheck import format_report, parse_properties, run_property
    backend = _make_backend(args)
    specs = parse_properties(_read(args.file))
    found_counterexample = False
    reports = []
    for spec in specs:
        report = run_property(spec, args.trials, args.seed, backend)
        reports.append((spec, report))
        if report.counterexample is not None or report.error is not None:
            found_counterexample = True
    if args.format == "json":
        from .backend import format_value
        print(json.dumps([{
            "name": spec.name, "trialsRun": r.trials_run, "passes": r.passes,
            "seed": r.seed, "error": r.error,
            "counterexample": None if r.counterexample is None else
            {k: format_value(v) for k, v in r.counterexample.items()},
        } for spec, r in reports]))
    else:
        for spec, r in reports:
            print(format_report(spec, r))
    return 1 if found_counterexample else 0


def _cmd_admit(args) -> int:
    from .session import ProofStatus, SessionState, execute_admit, plan_click

    backend = _make_backend(args)
    session = SessionState(_read(args.file))
    if session.forms:
        plan = plan_click(session, len(session.forms) - 1)
        for _ in execute_admit(session, plan, backend):
            pass
    letters = {ProofStatus.ADMITTED: "A", ProofStatus.FAILED: "F",
               ProofStatus.UNADMITTED: "U", ProofStatus.QUEUED: "Q",
               ProofStatus.IN_PROGRESS: "P"}
    for fs in session.forms:
        head = fs.form.head or "<atom>"
        print(f"{letters[fs.status]} {head}")
    failed = any(fs.status is not ProofStatus.ADMITTED
                 for fs in session.forms)
    return 1 if failed else 0


def _cmd_serve(args) -> int:
    from .api import DEFAULT_PORT, serve
    from .backend import BackendConfig, discover_acl2

    if args.fake_backend:
        from .backend import fake_backend
        factory = fake_backend
    else:
        exe = discover_acl2(args.acl2)
        if exe is None:
            print("proofpad: no ACL2 executable found; pass --acl2, set "
                  "PROOFPAD_ACL2, or use --fake-backend", file=sys.stderr)
            return 2
        from .backend import ProcessBackend
        factory = lambda: ProcessBackend(BackendConfig(executable=exe))
    port = args.port if args.port is not None else DEFAULT_PORT
    try:
        server = serve(port=port, backend_factory=factory,
                       static_dir=args.static_dir)
    except OSError as exc:
        print(f"proofpad: cannot listen on port {port}: {exc}",
              file=sys.stderr)
        return 1
    print(f"proofpad service listening on ws://127.0.0.1:{port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


_COMMANDS = {
    "lint": _cmd_lint,
    "indent": _cmd_indent,
    "repl": _cmd_repl,
    "check": _cmd_check,
    "admit": _cmd_admit,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"proofpad: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
