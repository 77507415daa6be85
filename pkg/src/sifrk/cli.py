"""``sifrk`` command line: ``run``, ``certify`` and ``bench``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import benchmarks as bm
from .config import ConfigError, SimulationConfig, load_config
from .diagnostics import write_curve
from .nonlinearity import from_config
from .spectral import BC, Field, Grid, write_snapshot
from .stepper import NonFiniteError
from .suites import SUITES, run_suite
from .tableau import (ShuOsherTableau, TableauError, Verdict, certify, certify_mbp_butcher,
                      get_tableau, shu_osher_to_butcher)

log = logging.getLogger("sifrk")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MBP = 2
EXIT_CODES = {Verdict.CERTIFIED: 0, Verdict.REFUTED: 3, Verdict.INCONCLUSIVE: 4}
DESK_FACTOR = 4


def _times(text: str) -> list[float]:
    try:
        out = sorted(float(p) for p in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad time list {text!r}") from None
    if any(t < 0 for t in out):
        raise argparse.ArgumentTypeError("snapshot times must be nonnegative")
    return out


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_problem(cfg: SimulationConfig) -> bm.ProblemDef:
    spec, diffusivity = from_config(cfg.potential, cfg.epsilon, cfg.theta, cfg.theta_c)
    grid = Grid.uniform(cfg.dim, cfg.n, cfg.box, BC.parse(cfg.bc))
    if cfg.initial == "random":
        init = bm.Random(cfg.low, cfg.high, cfg.seed)
    elif cfg.initial == "bubble":
        init = bm.Bubble(cfg.radius)
    else:
        init = bm.TravelingWave(cfg.epsilon)
    return bm.ProblemDef(grid, diffusivity, spec, cfg.kappa, init, Path(cfg.source).stem)


def _summary_text(cfg, tableau, problem, res, mon, wall) -> str:
    last = res.records[-1]
    verdict = "preserved" if not mon.flagged else \
        f"violated (first at step {mon.flag_step}, t={mon.flag_time:.12e})"
    rows = [
        ("config", cfg.source),
        ("scheme", tableau.name),
        ("grid", "x".join(str(k) for k in problem.grid.n) + f" {problem.grid.bc.value}"),
        ("tau", f"{cfg.tau:.12e}"),
        ("steps", str(res.steps)),
        ("final_time", f"{res.T:.12e}"),
        ("stopped_early", str(res.stopped_early).lower()),
        ("final_sup_norm", f"{last.sup_norm:.12e}"),
        ("final_energy", f"{last.energy:.12e}"),
        ("max_sup_norm", f"{mon.max_norm:.12e}"),
        ("gamma", f"{problem.spec.gamma:.12e}"),
        ("mbp", verdict),
        ("wall_time_s", f"{wall:.3f}"),
    ]
    return "".join(f"{k} = {v}\n" for k, v in rows)


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.snapshots is not None:
        cfg.snapshots = args.snapshots
    if args.desk:
        cfg.n = max(2, cfg.n // DESK_FACTOR)
    out = Path(args.out or cfg.dir)
    out.mkdir(parents=True, exist_ok=True)

    tableau = get_tableau(cfg.scheme)
    problem = build_problem(cfg)
    snap_steps = {int(round(t / cfg.tau)): t for t in cfg.snapshots}

    def snap(n, t, u):
        if n in snap_steps:
            write_snapshot(out / f"snap_t{snap_steps[n]:g}.sifk", Field(problem.grid, u))

    t0 = time.perf_counter()
    summary = bm.run_with_monitor(tableau, problem, cfg.tau, cfg.T, stride=cfg.stride,
                                  stop_on_flag=args.expect_mbp,
                                  record_stages=cfg.record_stages, step_hook=snap)
    wall = time.perf_counter() - t0
    res, mon = summary.result, summary.monitor
    write_curve(out / "curve.csv", res.records)
    text = _summary_text(cfg, tableau, problem, res, mon, wall)
    (out / "summary").write_text(text)
    print(text, end="")
    if mon.flagged and args.expect_mbp:
        print(f"MBP flag: sup norm exceeded {problem.spec.gamma:g} + {mon.tolerance:g}", file=sys.stderr)
        return EXIT_MBP
    return EXIT_OK


def certify_any(t):
    """Certify in the tableau's own form; Shu-Osher tableaus also get the Butcher test.

    Either sufficient condition certifies.  Returns the primary report, the
    Butcher-form report (or None) and the combined verdict.
    """
    primary = certify(t)
    if not isinstance(t, ShuOsherTableau) or primary.certified:
        return primary, None, primary.verdict
    secondary = certify_mbp_butcher(shu_osher_to_butcher(t))
    verdict = Verdict.CERTIFIED if secondary.certified else primary.verdict
    return primary, secondary, verdict


def cmd_certify(args) -> int:
    t = get_tableau(args.tableau)
    primary, secondary, verdict = certify_any(t)
    form = "Shu-Osher" if isinstance(t, ShuOsherTableau) else "Butcher"
    print(primary.format(f"{t.name} ({form} form)"))
    if secondary is not None:
        print(secondary.format(f"{t.name} (Butcher form)"))
    f = primary.first_failure() if verdict is not Verdict.CERTIFIED else None
    tail = ""
    if f is not None and isinstance(f.witness, tuple):
        tail = f" witness ({f.witness[0]},{f.witness[1]})"
    elif f is not None and f.witness is not None:
        tail = f" witness stage {f.stage} at x={f.witness:.6g}"
    print(f"verdict: {verdict}{tail}")
    return EXIT_CODES[verdict]


def cmd_bench(args) -> int:
    if args.suite not in SUITES:
        print(f"error: unknown suite {args.suite!r}; choose from {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_ERROR
    out = Path(args.out or f"bench_{args.suite}")
    res = run_suite(args.suite, out, desk=args.desk, schemes=args.scheme, seed=args.seed)
    text = res.report()
    (out / f"{args.suite}_report.txt").write_text(text + "\n")
    print(text)
    return EXIT_OK if res.ok else EXIT_ERROR


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--seed", type=_u64, metavar="U64", help="override the random-data seed")
    p.add_argument("--desk", action="store_true", help="reduced resolution")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sifrk", description="Stabilized integrating-factor RK solver")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="integrate a configured problem")
    r.add_argument("--config", required=True, metavar="PATH")
    r.add_argument("--expect-mbp", action="store_true",
                   help="stop at the first MBP flag and exit 2")
    r.add_argument("--snapshots", type=_times, metavar="T1,T2,...")
    _common(r)
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("certify", help="check a tableau for unconditional MBP preservation")
    c.add_argument("tableau", help="builtin name or tableau file")
    c.set_defaults(func=cmd_certify)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("suite", help=", ".join(SUITES))
    b.add_argument("--scheme", action="append", metavar="NAME",
                   help="restrict to a scheme (repeatable)")
    _common(b)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, TableauError, NonFiniteError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
