"""Command-line front end.

Every command emits either a record (a flat mapping) or a table. ``--format
json`` writes records as an object and tables as a list of objects;
``--format csv`` writes tables with a header row and records as
``field,value`` rows. Floats carry 12 significant digits; rationals print
exactly (``"5/8"`` in CSV, ``{"num": "5", "den": "8"}`` in JSON).

Strategy descriptors are JSON documents, inline or as ``@path``::

    {"v": 1, "role": "alice", "kind": "threshold",
     "params": {"family": "logistic", "params": [0, 1]}}

Exit status: 0 on success, 1 when a ``repro`` check fails, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import analysis, descriptors as D, repro, sim, twopile as TP
from .alice import classify
from .bob import ContinuousBobStrategy, DiscreteBobStrategy

DEFAULT_SEED = 0
DEFAULT_TRIALS = 10**5
CLASSIFY_GRID = np.linspace(-1000, 1000, 4001)


class ConfigError(ValueError):
    pass


class Table:
    def __init__(self, header: Sequence[str], rows: list):
        self.header = list(header)
        self.rows = rows


def _num_text(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    if isinstance(v, (np.integer, np.bool_)):
        return str(v.item())
    if isinstance(v, (list, tuple)):
        return " ".join(_num_text(x) for x in v)
    return str(v)


def _num_json(v):
    if isinstance(v, Fraction):
        return D.encode_number(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(f"{v:.12g}") if np.isfinite(v) else str(v)
    if isinstance(v, (np.integer, np.bool_)):
        return v.item()
    if isinstance(v, dict):
        return {str(k): _num_json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_num_json(x) for x in v]
    return v


def render(result, fmt: str) -> str:
    if fmt == "json":
        if isinstance(result, Table):
            payload = [dict(zip(result.header, row)) for row in result.rows]
        else:
            payload = result
        return json.dumps(_num_json(payload), indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    if isinstance(result, Table):
        w.writerow(result.header)
        w.writerows([_num_text(v) for v in row] for row in result.rows)
    else:
        w.writerow(["field", "value"])
        for k, v in result.items():
            w.writerow([k, _num_text(v)])
    return buf.getvalue()


def _range(text: str, cast=float):
    try:
        lo, hi, step = (cast(p) for p in text.split(":"))
    except ValueError:
        raise ConfigError(f"expected lo:hi:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise ConfigError(f"empty range {text!r}")
    count = int(round((hi - lo) / step)) + 1
    return [lo + i * step for i in range(count)]


def _alice(text):
    if text is None:
        raise ConfigError("--alice descriptor required")
    return D.alice_from_descriptor(D.load(text))


def _bob(text):
    if text is None:
        raise ConfigError("--bob descriptor required")
    return D.bob_from_descriptor(D.load(text))


# ------------------------------------------------------------------ commands


def cmd_eval(args):
    F, bob = _alice(args.alice), _bob(args.bob)
    if not isinstance(bob, DiscreteBobStrategy):
        raise ConfigError("eval needs a discrete Bob strategy; use simulate")
    cls = classify(F, CLASSIFY_GRID)
    return {
        "alice": F.kind,
        "bob": bob.descriptor.get("kind", "discrete"),
        "win_probability": analysis.win_prob_vs_discrete(F, bob),
        "minimax": cls.minimax,
        "strongly_dominant": cls.strongly_dominant,
        "proper": cls.proper,
        "superminimax": cls.superminimax,
    }


def cmd_simulate(args):
    F = _alice(args.alice)
    if args.repeated:
        trace = sim.repeated_game(F, args.repeated, args.seed)
        rows = [[r, f] for r, f in enumerate(trace.running_frequency, start=1)]
        return Table(["round", "frequency"], rows)
    est = sim.estimate(_bob(args.bob), F, args.trials, args.seed, args.workers)
    return {
        "successes": est.successes,
        "trials": est.trials,
        "point": est.point,
        "ci95_low": est.ci95[0],
        "ci95_high": est.ci95[1],
        "seed": est.seed,
    }


def cmd_best_response(args):
    bob = _bob(args.bob)
    if isinstance(bob, ContinuousBobStrategy):
        return {"value": analysis.best_response_value(bob, seed=args.seed), "exact": False}
    rep = analysis.best_response(bob)
    if args.table:
        rows = [[x, rep.pi_table[x], rep.marginal[x], int(rep.accepts(x))]
                for x in rep.pi_table]
        return Table(["x", "pi", "probability", "accept"], rows)
    return {"value": rep.value, "exact": True, "decision_set": list(rep.decision_set)}


def _certificate(m, exhaustive):
    cert = analysis.finite_game_oracle(m, exhaustive)
    return {
        "m": cert.m,
        "value": cert.value,
        "alice_guarantee": cert.alice_guarantee,
        "bob_cap": cert.bob_cap,
        "exhaustive": cert.exhaustive,
        "best_decision_set": list(cert.best_decision_set),
    }


def cmd_finite_game(args):
    try:
        return _certificate(args.m, not args.no_exhaustive)
    except analysis.ExhaustionLimit as e:
        raise ConfigError(str(e)) from None


def _pile_args(args):
    if args.n is None or args.k is None:
        raise ConfigError("--n and --k are required")
    cfg = TP.PileConfig(args.n, args.k)
    model = TP.ScaleMixtureModel(args.delta)
    return cfg, model


def cmd_two_pile(args):
    cfg, model = _pile_args(args)
    if args.action == "deals":
        return TP.deals_csv(cfg, model, args.trials, TP.as_generator(args.seed))
    if args.action == "pi":
        xs = np.concatenate([np.logspace(-6, 0, 13)[:-1], [1.0, 10.0]])
        return Table(["x", "pi"], [[x, p] for x, p in zip(xs, TP.pi_nk(xs, cfg, model))])
    eps = args.epsilon
    rep = TP.epsilon_bound_check(cfg.n, eps, model.delta)
    lo, plateau = TP.pi_limits(cfg, model)
    return {
        "n": cfg.n,
        "k": cfg.k,
        "delta": model.delta,
        "iid_value": TP.iid_value(cfg),
        "game_value": TP.game_value(cfg),
        "best_response_quadrature": TP.best_response_value_quadrature(cfg, model),
        "pi_at_0": lo,
        "pi_plateau": plateau,
        "epsilon": eps,
        "epsilon_check": rep.passed,
        "max_deviation": rep.max_deviation,
    }


def cmd_sweep(args):
    if args.target == "iid-two-pile":
        ratios = _range(args.ratio or "0.05:0.95:0.01")
        return Table(["ratio", "value"],
                     [[r, float(TP.iid_value_of_ratio(r))] for r in ratios])
    if args.target == "finite-game":
        rows = []
        for m in _range(args.m_range or "1:20:1", int):
            c = _certificate(m, m <= analysis.EXHAUSTIVE_LIMIT)
            rows.append([m, c["value"], c["alice_guarantee"], c["bob_cap"]])
        return Table(["m", "value", "alice_guarantee", "bob_cap"], rows)
    if args.target == "scale-mixture":
        cfg = TP.PileConfig(args.n or 4, args.k or 2)
        rows = []
        for d in _range(args.delta_range or "0.005:0.05:0.005"):
            model = TP.ScaleMixtureModel(d)
            lo, plateau = TP.pi_limits(cfg, model)
            rows.append([d, lo, plateau, TP.best_response_value_quadrature(cfg, model)])
        return Table(["delta", "pi_at_0", "pi_plateau", "best_response_value"], rows)
    raise ConfigError(f"unknown sweep target {args.target!r}")


def cmd_repro(args):
    echo = (lambda line: print(line, file=sys.stderr)) if args.verbose else None
    results = repro.run_all(echo)
    table = Table(["check", "name", "passed", "detail"],
                  [[c.number, c.name, c.passed, c.detail] for c in results])
    table.failed = not all(c.passed for c in results)
    return table


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"RNG seed (default {DEFAULT_SEED})")
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                        help=f"Monte Carlo trials or deal rows (default {DEFAULT_TRIALS})")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--format", choices=("csv", "json"),
                        help="default json; csv for sweep and two-pile deals")
    common.add_argument("--out", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="guessgame", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="exact win probability")
    s.add_argument("--alice")
    s.add_argument("--bob")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo win rate")
    s.add_argument("--alice")
    s.add_argument("--bob")
    s.add_argument("--repeated", type=int, metavar="R",
                   help="play R rounds of the repeated game; emits (round, frequency)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("best-response", parents=[common], help="Alice's best response to Bob")
    s.add_argument("--bob")
    s.add_argument("--table", action="store_true", help="emit the pi table instead")
    s.set_defaults(func=cmd_best_response)

    s = sub.add_parser("finite-game", parents=[common], help="certificate for {1..m+1}")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--no-exhaustive", action="store_true",
                   help="use the best response instead of enumerating decision sets")
    s.set_defaults(func=cmd_finite_game)

    s = sub.add_parser("two-pile", parents=[common], help="two-pile game")
    s.add_argument("action", nargs="?", choices=("eval", "pi", "deals"), default="eval")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--delta", type=float, default=TP.select_delta(0.01))
    s.add_argument("--epsilon", type=float, default=0.01)
    s.set_defaults(func=cmd_two_pile)

    s = sub.add_parser("sweep", parents=[common], help="vary one parameter, emit a table")
    s.add_argument("--target", required=True,
                   choices=("iid-two-pile", "finite-game", "scale-mixture"))
    s.add_argument("--ratio", help="lo:hi:step for iid-two-pile")
    s.add_argument("--m-range", help="lo:hi:step for finite-game")
    s.add_argument("--delta-range", help="lo:hi:step for scale-mixture")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("repro", parents=[common], help="run every reproduction check")
    s.add_argument("-v", "--verbose", action="store_true", help="echo checks as they run")
    s.set_defaults(func=cmd_repro)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.trials < 1 or args.workers < 1 or args.seed < 0:
        parser.error("--trials and --workers must be positive, --seed non-negative")
    try:
        result = args.func(args)
    except (ConfigError, D.DescriptorError, ValueError, OSError) as e:
        print(f"guessgame: error: {e}", file=sys.stderr)
        return 2
    fmt = args.format or ("csv" if args.command == "sweep" else "json")
    text = result if isinstance(result, str) else render(result, fmt)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if getattr(result, "failed", False) else 0


if __name__ == "__main__":
    sys.exit(main())
