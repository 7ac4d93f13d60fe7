"""Command-line interface: parse, check, score, reward, serve.

Exit codes: 0 success, 1 diagnostics or findings, 2 I/O or corpus format
problems, 3 mixed domains without a filter, 4 invalid reference, 5 invalid
config.

The config file is found via --config or the GEOFORMAL_CONFIG environment
variable; built-in defaults apply otherwise.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .ast import DOMAINS, PLANE, Document
from .canon import CanonMode, canonicalize
from .corpus import CorpusFormatError, load_jsonl
from .expr import Expr
from .metrics import MixedDomains, score_corpus
from .parser import parse_document
from .render import render_canonical
from .reward import BadReference, ConfigError, RewardConfig, total_reward
from .validator import check_consistency, check_format, lint_redundancy

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_IO = 2
EXIT_MIXED_DOMAINS = 3
EXIT_BAD_REFERENCE = 4
EXIT_BAD_CONFIG = 5


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="reward/canonicalization config JSON")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--quiet", action="store_true", help="suppress informational output")

    parser = argparse.ArgumentParser(prog="geoformal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse a formal description")
    p.add_argument("input", help="path to the formal text")
    p.add_argument("--domain", choices=DOMAINS, default=PLANE)
    p.add_argument("--canon", action="store_true", help="print the canonical rendering")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check", parents=[common], help="format, consistency and redundancy checks")
    p.add_argument("input", help="path to the formal text")
    p.add_argument("--domain", choices=DOMAINS, default=PLANE)
    p.add_argument("--strict", action="store_true", help="treat warnings as errors")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("score", parents=[common], help="score a JSONL corpus")
    p.add_argument("corpus", help="JSONL file of id/prediction/reference/domain records")
    p.add_argument("--domain", choices=DOMAINS, help="keep only records of this domain")
    p.add_argument("--macro", action="store_true", help="macro-average instead of micro")
    p.add_argument("--strict-cyclic", action="store_true", help="cyclic plane/base matching")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("reward", parents=[common], help="reward one prediction against a reference")
    p.add_argument("prediction", help="path to the predicted formal text")
    p.add_argument("reference", help="path to the reference formal text")
    p.add_argument("--domain", choices=DOMAINS, default=PLANE)
    p.set_defaults(func=cmd_reward)

    p = sub.add_parser("serve", parents=[common], help="run the reward service")
    p.add_argument("--bind", default="127.0.0.1:8321", help="host:port to listen on")
    p.set_defaults(func=cmd_serve)

    return parser


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_config(args) -> RewardConfig:
    path = args.config or os.environ.get("GEOFORMAL_CONFIG")
    if not path:
        return RewardConfig()
    return RewardConfig.load(path)


def _document_json(doc: Document) -> dict:
    def seg(s):
        return [s[0].render(), s[1].render()]

    def clause(c):
        name = type(c).__name__
        if name == "SegmentEq":
            rhs = {"expr": c.rhs.raw} if isinstance(c.rhs, Expr) else {"segment": seg(c.rhs)}
            return {"type": "segment_eq", "lhs": seg(c.lhs), "rhs": rhs}
        if name == "AngleMeasure":
            return {
                "type": "angle",
                "points": [c.p1.render(), c.vertex.render(), c.p3.render()],
                "value": c.value.raw,
            }
        if name == "ArcMeasure":
            return {"type": "arc", "points": [c.p1.render(), c.p2.render()], "value": c.value.raw}
        if name == "Perp":
            return {
                "type": "perp",
                "seg1": seg(c.seg1),
                "seg2": seg(c.seg2),
                "foot": c.foot.render() if c.foot else None,
            }
        return {"type": "parallel", "seg1": seg(c.seg1), "seg2": seg(c.seg2)}

    return {
        "domain": doc.domain,
        "dialect": doc.dialect,
        "points": sorted(p.render() for p in doc.points),
        "lines": [
            {"name": l.name, "points": [p.render() for p in l.points]} for l in doc.lines
        ],
        "circles": [
            {
                "center": c.center.render(),
                "on": sorted(p.render() for p in c.on_points),
            }
            for c in doc.circles
        ],
        "planes": [{"points": [p.render() for p in pl.points]} for pl in doc.planes],
        "solids": [
            {"kind": s.kind, "groups": [[p.render() for p in g] for g in s.groups]}
            for s in doc.solids
        ],
        "semantics": [clause(c) for c in doc.semantics],
    }


def cmd_parse(args) -> int:
    try:
        text = _read(args.input)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    result = parse_document(text, args.domain)
    for diag in result.diagnostics:
        print(str(diag), file=sys.stderr)
    if args.canon:
        sys.stdout.write(render_canonical(canonicalize(result.document)))
    else:
        print(json.dumps(_document_json(result.document), indent=2))
    return EXIT_OK if result.ok else EXIT_FINDINGS


def cmd_check(args) -> int:
    try:
        text = _read(args.input)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    report = check_format(text, args.domain)
    parsed = parse_document(text, args.domain)
    findings = list(report.diagnostics)
    findings += check_consistency(parsed.document)
    findings += lint_redundancy(parsed.document)
    if args.json:
        print(json.dumps([f.to_json_dict() for f in findings], indent=2))
    elif not args.quiet:
        for f in findings:
            location = f"{f.line}:{f.col}: " if f.line is not None else ""
            print(f"{f.severity}: {location}[{f.rule}] {f.message}")
    has_errors = any(f.severity == "error" for f in findings)
    if has_errors or (args.strict and findings):
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_score(args) -> int:
    try:
        records = load_jsonl(args.corpus)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except CorpusFormatError as err:
        print(f"error: {args.corpus}: {err}", file=sys.stderr)
        return EXIT_IO
    try:
        config = _load_config(args)
    except (OSError, ConfigError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    if args.domain:
        records = [r for r in records if r.domain == args.domain]
    if not records:
        print("error: no records to score", file=sys.stderr)
        return EXIT_IO
    mode = CanonMode(strict_cyclic=args.strict_cyclic) if args.strict_cyclic else config.mode
    pairs = []
    for record in records:
        pred = canonicalize(parse_document(record.prediction, record.domain).document, mode)
        ref = canonicalize(parse_document(record.reference, record.domain).document, mode)
        pairs.append((pred, ref, record.domain))
    try:
        report = score_corpus(pairs, macro=args.macro)
    except MixedDomains as err:
        print(f"error: {err} (use --domain to filter)", file=sys.stderr)
        return EXIT_MIXED_DOMAINS
    if args.json:
        print(json.dumps(report.to_json_dict(), indent=2))
    elif not args.quiet:
        print(report.to_table())
    return EXIT_OK


def cmd_reward(args) -> int:
    try:
        pred_text = _read(args.prediction)
        ref_text = _read(args.reference)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    try:
        config = _load_config(args)
    except (OSError, ConfigError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    try:
        breakdown = total_reward(pred_text, ref_text, args.domain, config)
    except BadReference as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_REFERENCE
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    print(json.dumps(breakdown.to_json_dict(), indent=2))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    try:
        config = _load_config(args)
    except (OSError, ConfigError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        print(f"error: --bind expects host:port, got {args.bind!r}", file=sys.stderr)
        return EXIT_IO
    app = create_app(config)
    uvicorn.run(app, host=host, port=int(port), log_level="warning" if args.quiet else "info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
