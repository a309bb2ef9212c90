"""Command-line interface: ``gtt <command> [options]``.

Exit status is 0 on success, 1 when a program or property fails, and 2 for
usage and configuration errors (bad flags, missing files, unknown names).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

from . import __version__
from .config import Config, ConfigError, make_config
from .extract import erase, pretty_target, to_json
from .frontend import PRAGMAS, ParseError, SourceFile, parse, pretty, tokenize
from .grades import (INSTANCE_NAMES, ModalityError, check_laws, check_well_behaved_zero, division_laws,
                     make_instance, render_ctx)
from .harness.suites import SUITES, run_suite
from .pipeline import check_closed, run, show_readback
from .reduce import Numeral, Stuck, read_numeral
from .syntax import Lam, Term
from .typecheck import EMPTY, Checker, TypingError
from .usage import MODES, ONE_M, UsageError, accepts, infer_usage

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    """A usage or configuration problem (exit status 2)."""


# ---------------------------------------------------------------------------
# Argument parsing


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("configuration (flags override file pragmas)")
    g.add_argument("--modality", help=f"grade instance: {', '.join(INSTANCE_NAMES)}, or 'lattice' with --lattice")
    g.add_argument("--lattice", metavar="PATH", help="lattice description file (with --modality lattice)")
    g.add_argument("--nr", choices=("good", "bad"), help="natrec usage function (bad: the greatest-star variant, linear only)")
    g.add_argument("--mode", choices=("plain", "moded"), help="usage system: plain, or moded with 0M/1M")
    g.add_argument("--strict", action="store_true", default=None, help="call-by-value extraction")
    g.add_argument("--no-erased-matches", action="store_true", default=None,
                   help="forbid prodrec with r = 0 and unitrec with p = 0")
    g.add_argument("--no-emptyrec-zero", action="store_true", default=None, help="forbid emptyrec with p = 0")
    g.add_argument("--pisigma", choices=("any", "equal"), help="allowed grade pairs on Π/Σ")
    g.add_argument("--fuel", type=int, help="reduction step budget (default 10^6, or $GTT_FUEL)")
    g.add_argument("--seed", type=int, help="seed for generated cases")
    g.add_argument("--emit", "--output", dest="emit", choices=("text", "json"), default="text",
                   help="output format")
    g.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gtt", description="Graded modal dependent type theory toolkit.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("check", help="type-check and usage-check definitions")
    p.add_argument("file")
    p.add_argument("names", nargs="*", help="definitions to check (default: all)")
    _common(p)

    p = sub.add_parser("usage", help="print the inferred usage context of a definition")
    p.add_argument("file")
    p.add_argument("name")
    p.add_argument("--at", choices=MODES, default=ONE_M, help="mode to infer at (moded system)")
    _common(p)

    p = sub.add_parser("extract", help="print the extracted target term")
    p.add_argument("file")
    p.add_argument("name")
    _common(p)

    p = sub.add_parser("eval", help="evaluate a definition in the source language")
    p.add_argument("file")
    p.add_argument("name")
    _common(p)

    p = sub.add_parser("run", help="compare source, call-by-name and call-by-value results")
    p.add_argument("file")
    p.add_argument("name")
    _common(p)

    p = sub.add_parser("laws", help="check modality laws")
    p.add_argument("instances", nargs="*", help="instances (default: --modality, or all built-ins)")
    _common(p)

    p = sub.add_parser("suite", help="run property suites")
    p.add_argument("suites", nargs="*", help=f"suites: {', '.join(SUITES)}, or all (default)")
    p.add_argument("--scale", type=float, default=1.0, help="multiply the number of generated cases")
    p.add_argument("--verbose", action="store_true", help="list passing cases as well")
    _common(p)
    return ap


# ---------------------------------------------------------------------------
# Configuration


def _modality_name(args, pragmas: dict[str, str]) -> str:
    name = args.modality or pragmas.get("modality") or "erasure"
    if name == "lattice":
        if not args.lattice:
            raise CliError("--modality lattice needs --lattice PATH")
        return f"lattice:{args.lattice}"
    if args.lattice:
        raise CliError("--lattice is only meaningful with --modality lattice")
    return name


def config_from(args, pragmas: dict[str, str] | None = None) -> Config:
    pragmas = pragmas or {}

    def flag(value, pragma: str, default):
        if value is not None:
            return value
        return pragmas.get(pragma, default)

    mode = flag(args.mode, "mode", "plain")
    if mode not in ("plain", "moded"):
        raise CliError(f"mode must be plain or moded, not {mode!r}")
    pisigma = flag(args.pisigma, "pisigma", "any")
    try:
        return make_config(
            _modality_name(args, pragmas),
            nr=flag(args.nr, "nr", "good"),
            moded=mode == "moded",
            strict=bool(args.strict) or "strict" in pragmas,
            erased_matches=not (args.no_erased_matches or "no-erased-matches" in pragmas),
            emptyrec_zero=not (args.no_emptyrec_zero or "no-emptyrec-zero" in pragmas),
            pisigma=pisigma,
            fuel=args.fuel,  # None falls back to $GTT_FUEL, then the default
            **({"seed": args.seed} if args.seed is not None else {}),
            output=args.emit,
        )
    except (ConfigError, ModalityError, OSError) as e:
        raise CliError(str(e)) from None


def load(args) -> tuple[SourceFile, Config]:
    """Read and parse ``args.file`` under the configuration from pragmas and flags."""
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(f"cannot read {args.file}: {e.strerror}") from None
    first = parse_pragmas_only(text, args.file)
    config = config_from(args, first)
    return parse(text, config.modality, args.file), config


def parse_pragmas_only(text: str, source: str) -> dict[str, str]:
    """Pragmas are needed before the body can be parsed with the right grades."""
    pragmas: dict[str, str] = {}
    for tok in tokenize(text, source):
        if tok.kind == "pragma":
            word, *rest = tok.text.split()
            if word in PRAGMAS:
                pragmas[word[1:]] = rest[0] if rest else "on"
    return pragmas


# ---------------------------------------------------------------------------
# Output helpers


@dataclass
class Out:
    json_mode: bool
    stream: Any = None

    def emit(self, text: str | None = None, data: dict | None = None) -> None:
        stream = self.stream or sys.stdout
        if self.json_mode:
            if data is not None:
                stream.write(json.dumps(data, ensure_ascii=False, indent=2) + "\n")
        elif text is not None:
            stream.write(text + "\n")


def _error_dict(err: Exception, file: SourceFile | None, root: Term | None) -> dict:
    d: dict[str, Any] = {"kind": getattr(err, "kind", type(err).__name__), "message": getattr(err, "message", str(err))}
    path = tuple(getattr(err, "path", ()) or ())
    if path:
        d["path"] = "/".join(path)
    if isinstance(err, ParseError):
        d["line"], d["col"] = err.line, err.col
    elif file is not None and root is not None:
        span = file.span_of(root, path)
        if span is not None:
            d["line"], d["col"] = span.line, span.col
    return d


def _render_error(d: dict, source: str, name: str | None) -> str:
    loc = f"{source}:{d['line']}:{d['col']}" if "line" in d else source
    where = f" in {name}" if name else ""
    path = f" (at {d['path']})" if d.get("path") else ""
    return f"{loc}: {d['kind']}{where}: {d['message']}{path}"


def _get(file: SourceFile, name: str):
    try:
        return file.get(name)
    except KeyError as e:
        raise CliError(e.args[0]) from None


# ---------------------------------------------------------------------------
# Commands


def _check_one(config: Config, d) -> dict:
    try:
        check_closed(config, d.body, d.type)
        return {"name": d.name, "status": "ok"}
    except TypingError as e:
        return {"name": d.name, "status": "type-error", "error": e}
    except UsageError as e:
        return {"name": d.name, "status": "usage-error", "error": e}


def _check_worker(payload) -> list[tuple[str, str, dict | None]]:
    text, source, args_dict, names = payload
    args = argparse.Namespace(**args_dict)
    config = config_from(args, parse_pragmas_only(text, source))
    file = parse(text, config.modality, source)
    out = []
    for d in file.definitions:
        if d.name in names:
            r = _check_one(config, d)
            out.append((d.name, r["status"], _error_dict(r["error"], file, d.body) if "error" in r else None))
    return out


def cmd_check(args, out: Out) -> int:
    file, config = load(args)
    wanted = args.names or file.names()
    for n in wanted:
        _get(file, n)
    defs = [d for d in file.definitions if d.name in wanted]
    results: list[tuple[str, str, dict | None]] = []
    if args.jobs > 1 and len(defs) > 1:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
        groups = [set(d.name for d in defs[k::args.jobs]) for k in range(args.jobs)]
        payloads = [(text, args.file, vars(args), g) for g in groups if g]
        by_name: dict[str, tuple] = {}
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            for part in ex.map(_check_worker, payloads):
                for r in part:
                    by_name[r[0]] = r
        results = [by_name[d.name] for d in defs]
    else:
        for d in defs:
            r = _check_one(config, d)
            results.append((d.name, r["status"], _error_dict(r["error"], file, d.body) if "error" in r else None))
    ok = all(s == "ok" for _, s, _ in results)
    for name, status, err in results:
        out.emit(f"{name} : ok" if status == "ok" else _render_error(err, args.file, name))
    out.emit(data={"command": "check", "file": args.file, "modality": config.modality.name, "ok": ok,
                   "results": [{"name": n, "status": s, **({"error": e} if e else {})} for n, s, e in results]})
    return EXIT_OK if ok else EXIT_FAIL


def peel(file: SourceFile, body: Term) -> tuple[Term, list[str]]:
    """Strip the outer λs of ``body``; return the inner term and the binder names, outermost first."""
    names: list[str] = []
    while isinstance(body, Lam):
        names.append(file.binder_name(body, f"x{len(names)}"))
        body = body.body
    return body, names


def cmd_usage(args, out: Out) -> int:
    file, config = load(args)
    d = _get(file, args.name)
    try:
        checker = Checker(config)
        checker.check_type(EMPTY, d.type)
        checker.check(EMPTY, d.body, d.type)
    except TypingError as e:
        err = _error_dict(e, file, d.body)
        out.emit(_render_error(err, args.file, d.name), {"command": "usage", "name": d.name, "ok": False, "error": err})
        return EXIT_FAIL
    # The declared λ grades are not checked here: the point is to report what
    # the body needs, which may exceed what the declared type promises.
    inner, names = peel(file, d.body)
    mode = args.at if config.moded else ONE_M
    try:
        gamma = infer_usage(config, inner, len(names), mode)
    except UsageError as e:
        err = _error_dict(e, file, d.body)
        out.emit(_render_error(err, args.file, d.name), {"command": "usage", "name": d.name, "ok": False, "error": err})
        return EXIT_FAIL
    index_names = list(reversed(names))
    accepted = accepts(config, gamma, inner, mode)
    out.emit(render_ctx(gamma, index_names),
             {"command": "usage", "name": d.name, "modality": config.modality.name, "mode": mode,
              "ok": accepted, "rendered": render_ctx(gamma, index_names),
              "context": [{"name": n, "grade": gamma[len(names) - 1 - k]} for k, n in enumerate(names)]})
    return EXIT_OK if accepted else EXIT_FAIL


def cmd_extract(args, out: Out) -> int:
    file, config = load(args)
    d = _get(file, args.name)
    target = erase(d.body, strict=config.strict, moded=config.moded, zero=config.modality.zero)
    out.emit(pretty_target(target),
             {"command": "extract", "name": d.name, "strict": config.strict, "moded": config.moded,
              "target": to_json(target)})
    return EXIT_OK


def cmd_eval(args, out: Out) -> int:
    file, config = load(args)
    d = _get(file, args.name)
    r = read_numeral(d.body, config.fuel)
    data: dict[str, Any] = {"command": "eval", "name": d.name, "result": show_readback(r)}
    if isinstance(r, Numeral):
        out.emit(str(r.value), {**data, "value": r.value})
        return EXIT_OK
    if isinstance(r, Stuck):
        shown = pretty(r.term)
        what = "a neutral term" if r.kind == "neutral" else f"a {r.kind}"
        out.emit(f"stuck: reduces to {what}, not a numeral: {shown}", {**data, "kind": r.kind, "term": shown})
    else:
        out.emit(f"timeout after {config.fuel} steps", {**data, "fuel": config.fuel})
    return EXIT_FAIL


def cmd_run(args, out: Out) -> int:
    file, config = load(args)
    d = _get(file, args.name)
    r = run(config, d.body)
    out.emit(r.render(), {"command": "run", "name": d.name, "source": show_readback(r.source),
                          "cbn": show_readback(r.cbn), "cbv": show_readback(r.cbv),
                          "verdict": "AGREE" if r.agree else "DISAGREE"})
    return EXIT_OK if r.agree else EXIT_FAIL


def cmd_laws(args, out: Out) -> int:
    names = args.instances or ([args.modality] if args.modality else
                               ["erasure", "affine", "linear", "linear-or-affine", "trivial", "information-flow"])
    if args.modality == "lattice":
        names = [f"lattice:{args.lattice}"] if args.lattice else []
        if not names:
            raise CliError("--modality lattice needs --lattice PATH")
    report = []
    ok = True
    lines = []
    for n in names:
        try:
            m = make_instance(n)
        except (ModalityError, OSError) as e:
            raise CliError(str(e)) from None
        laws = check_laws(m)
        wbz = check_well_behaved_zero(m)
        lines.append(f"{m.name}:")
        for r in laws:
            ok &= r.ok
            lines.append(f"  {'PASS' if r.ok else 'FAIL'} {r.law}" + ("" if r.ok else f"  witness: {r.witness}"))
        lines.append(f"  well-behaved zero: {'yes' if all(r.ok for r in wbz) else 'no'}")
        for r in wbz:
            if not r.ok:
                lines.append(f"    fails {r.law}  witness: {r.witness}")
        div = division_laws(m)
        lines.append(f"  division by: {', '.join(sorted(m.supports_division_by)) or '-'}")
        for r in div:
            lines.append(f"    {'holds' if r.ok else 'fails'} {r.law}" + ("" if r.ok else f"  witness: {r.witness}"))
        report.append({"instance": m.name, "laws": [{"law": r.law, "ok": r.ok, "witness": _jsonable(r.witness)}
                                                    for r in laws],
                       "well_behaved_zero": all(r.ok for r in wbz),
                       "zero_conditions": [{"law": r.law, "ok": r.ok, "witness": _jsonable(r.witness)} for r in wbz],
                       "division_by": sorted(m.supports_division_by),
                       "division_laws": [{"law": r.law, "ok": r.ok, "witness": _jsonable(r.witness)} for r in div]})
    out.emit("\n".join(lines), {"command": "laws", "ok": ok, "instances": report})
    return EXIT_OK if ok else EXIT_FAIL


def _jsonable(w):
    if w is None or isinstance(w, (str, int, float, bool)):
        return w
    if isinstance(w, (tuple, list)):
        return [_jsonable(x) for x in w]
    return repr(w)


def cmd_suite(args, out: Out) -> int:
    config = config_from(args)
    names = args.suites or ["all"]
    if "all" in names:
        names = list(SUITES)
    for n in names:
        if n not in SUITES:
            raise CliError(f"unknown suite {n!r}; choose from {', '.join(SUITES)}")
    reports = [run_suite(n, config, jobs=args.jobs, scale=args.scale) for n in names]
    ok = all(r.passed for r in reports)
    out.emit("\n".join(r.to_text(args.verbose) for r in reports),
             {"command": "suite", "ok": ok, "seed": config.seed, "reports": [r.to_json() for r in reports]})
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"check": cmd_check, "usage": cmd_usage, "extract": cmd_extract, "eval": cmd_eval,
            "run": cmd_run, "laws": cmd_laws, "suite": cmd_suite}


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    out = Out(args.emit == "json")
    if args.jobs < 1:
        print("gtt: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    try:
        return COMMANDS[args.command](args, out)
    except CliError as e:
        print(f"gtt: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        err = _error_dict(e, None, None)
        out.emit(_render_error(err, e.source, None), {"command": args.command, "ok": False, "error": err})
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
