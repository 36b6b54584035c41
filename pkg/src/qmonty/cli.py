"""Batch command line front end.

`qmonty --host haar --player switch -n 100000` runs an experiment and
prints the report; `qmonty serve` starts the JSON API service.  Exit
codes: 0 success, 1 usage or configuration error, 2 host rule violation
detected mid-run.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import re
import sys

from . import lab, strategies
from .engine import RuleSet, VARIANTS
from .errors import ConfigError, HostViolation, QmontyError

_HOST_SHORTHANDS = {
    "haar": {"kind": "haar"},
    "axes": {"kind": "axes"},
    "real": {"kind": "real"},
    "ignore": {"kind": "ignore_notepad"},
    "ignore-notepad": {"kind": "ignore_notepad"},
    "complete-vn": {"kind": "complete_vn"},
    "entangled": {"kind": "entangled"},
    "entangled-transpose": {"kind": "entangled",
                            "policy": "transpose_of_player_triple"},
    "entangled-early": {"kind": "entangled", "measure_early": True},
}

_PLAYER_SHORTHANDS = {
    "stick": {"kind": "stick"},
    "switch": {"kind": "switch"},
    "cheat-finite": {"kind": "cheat_finite"},
    "cheat-real": {"kind": "cheat_real"},
    "bayes": {"kind": "bayes"},
}

_THETA_RE = re.compile(
    r"^(?:(\d+(?:\.\d+)?)\s*\*?\s*)?pi(?:\s*/\s*(\d+(?:\.\d+)?))?$")


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(1)


def parse_theta(token: str) -> float:
    tok = token.strip().lower().replace("π", "pi")
    if "pi" in tok:
        m = _THETA_RE.match(tok)
        if not m:
            raise ConfigError("cannot parse angle %r" % token)
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(tok)
    except ValueError:
        raise ConfigError("cannot parse angle %r" % token) from None


def parse_theta_grid(text: str) -> list[float]:
    tokens = [t for t in text.split(",") if t.strip()]
    if not tokens:
        raise ConfigError("empty theta grid")
    return [parse_theta(t) for t in tokens]


def parse_host(text: str, seed: int):
    text = text.strip()
    if text.startswith("{"):
        return strategies.host_from_spec(json.loads(text))
    if text in _HOST_SHORTHANDS:
        return strategies.host_from_spec(dict(_HOST_SHORTHANDS[text]))
    m = re.match(r"^finite:(\d+)$", text)
    if m:
        return strategies.FiniteSetHost(lab.finite_catalog(int(m.group(1)),
                                                           seed))
    raise ConfigError("unknown host %r" % text)


def parse_player(text: str, host):
    text = text.strip()
    if text.startswith("{"):
        return strategies.player_from_spec(json.loads(text), host=host)
    if text in _PLAYER_SHORTHANDS:
        return strategies.player_from_spec(dict(_PLAYER_SHORTHANDS[text]),
                                            host=host)
    m = re.match(r"^sweep:(.+)$", text)
    if m:
        return strategies.AngleSweepPlayer(parse_theta(m.group(1)))
    raise ConfigError("unknown player %r" % text)


def build_parser() -> _Parser:
    parser = _Parser(prog="qmonty",
                     description="quantum three-door game simulator")
    sub = parser.add_subparsers(dest="command")

    sim = sub.add_parser("simulate", help="run a batch experiment")
    _add_simulate_flags(sim)
    srv = sub.add_parser("serve", help="start the JSON API service")
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--bind", default="127.0.0.1")
    return parser


def _add_simulate_flags(p) -> None:
    p.add_argument("--host", default="haar",
                   help="host spec: haar|axes|real|ignore-notepad|"
                        "complete-vn|entangled[-transpose|-early]|"
                        "finite:N or a JSON object")
    p.add_argument("--player", default=None,
                   help="player spec: stick|switch|cheat-finite|cheat-real|"
                        "bayes|sweep:THETA or a JSON object")
    p.add_argument("--rules", default="strict",
                   help="variant name (%s) or JSON" % "|".join(VARIANTS))
    p.add_argument("-n", "--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--theta-sweep", default=None, metavar="GRID",
                   help="comma-separated angles (pi tokens allowed); "
                        "runs the interpolated strategy per point")
    p.add_argument("--digits", type=int, default=None,
                   help="truncate announced doors to this many significant "
                        "digits")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", default=None, metavar="FILE",
                   help="write the report here instead of stdout")


def _simulate(args) -> int:
    rules = RuleSet.from_config(args.rules)
    if args.digits is not None:
        rules = dataclasses.replace(rules,
                                    announce_precision_digits=args.digits)
    host = parse_host(args.host, args.seed)

    if args.theta_sweep is not None:
        if args.player is not None:
            raise ConfigError("--theta-sweep chooses the player; drop "
                              "--player")
        if rules.variant != "strict":
            raise ConfigError("the theta sweep is defined under strict "
                              "rules")
        grid = parse_theta_grid(args.theta_sweep)
        points = lab.theta_sweep(host, grid, args.trials, args.seed)
        rows = lab.sweep_rows(points, host.label(), rules.label())
    else:
        player = parse_player(args.player or "switch", host)
        config = lab.ExperimentConfig(host=host, player=player, rules=rules,
                                      trials=args.trials, seed=args.seed,
                                      format=args.format)
        rows = [lab.run_experiment(config, workers=args.workers)]

    document = lab.emit_report(rows, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(document)
    else:
        sys.stdout.write(document)
        if not document.endswith("\n"):
            sys.stdout.write("\n")
    return 0


def _serve(args) -> int:
    try:
        port = int(os.environ.get("QMONTY_PORT", args.port))
    except ValueError:
        print("QMONTY_PORT is not an integer", file=sys.stderr)
        return 1
    try:
        import uvicorn

        from .service import create_app
    except ImportError as exc:
        print("service dependencies missing (%s); install the 'service' "
              "extra" % exc, file=sys.stderr)
        return 1
    try:
        uvicorn.run(create_app(), host=args.bind, port=port,
                    log_level="warning")
    except (OSError, OverflowError, ValueError, SystemExit) as exc:
        print("failed to serve on %s:%d: %s" % (args.bind, port, exc),
              file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in ("simulate", "serve", "-h", "--help"):
        argv = ["simulate"] + argv
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            return _serve(args)
        return _simulate(args)
    except HostViolation as exc:
        print("host violation: %s" % exc, file=sys.stderr)
        return 2
    except (QmontyError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
