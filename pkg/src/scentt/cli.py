"""Command-line front end: ``sce-ntt <group> <command> [options]``.

Exit codes: 0 success, 1 verification failure or model error, 2 usage error.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import random
import sys
from pathlib import Path

from .errors import SceNttError
from .modmath import bit_reverse, make_context
from .phaseclk import METHODS, GateGraph, assign_phases, check_hold_safe, dff_sweep, throughput_of
from .pipesim import (
    DEFAULT_CLOCK_HZ,
    DEFAULT_CLOCK_PERIOD_PS,
    DEFAULT_L_BU,
    DEFAULT_L_MEM,
    PipelineConfig,
    apply_output_permutation,
    derive_output_permutation,
    latency_report,
    run_pipeline,
)
from .reference import dft_bruteforce, ntt_ct
from .report import format_rate
from .scale import HEAX_KEYSWITCH_PER_S, big_ntt_cycles, ckks_security_check, keyswitch_estimate

DEFAULT_Q = 2013265921  # 15 * 2^27 + 1


class UsageError(Exception):
    pass


def _default_seed() -> int:
    return int(os.environ.get("SCE_NTT_SEED", "0"))


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _default_l_mem(n: int) -> int:
    return max(DEFAULT_L_MEM, n // 2)


def cmd_verify_ntt(args) -> int:
    ctx = make_context(args.q, args.n)
    cfg = PipelineConfig(ctx, l_bu=args.l_bu,
                         l_mem=args.l_mem if args.l_mem is not None else _default_l_mem(args.n),
                         trace=False, seed=args.seed)
    perm = derive_output_permutation(cfg)
    rng = random.Random(args.seed)
    inputs = [[rng.randrange(ctx.q) for _ in range(ctx.N)] for _ in range(args.cases)]
    res = run_pipeline(inputs, cfg)
    oracle = args.oracle or ("brute" if ctx.N <= 256 else "ct")
    golden = dft_bruteforce if oracle == "brute" else ntt_ct
    bad = [i for i, (x, y) in enumerate(zip(inputs, res.outputs))
           if apply_output_permutation(y, perm).coeffs != golden(x, ctx).coeffs]
    summary = {
        "command": "verify ntt", "n": ctx.N, "q": ctx.q, "omega": ctx.omega,
        "cases": args.cases, "seed": args.seed, "oracle": oracle,
        "mismatches": len(bad), "first_mismatch": bad[0] if bad else None,
        "output_permutation_is_bit_reverse":
            perm == [bit_reverse(p, ctx.log_n) for p in range(ctx.N)],
        "latency_cycles": res.report.cycles,
        "initiation_intervals": res.report.details.get("measured_initiation_intervals"),
        "ok": not bad,
    }
    _emit(summary if not bad else {"error": "VerificationFailed", **summary})
    return 0 if not bad else 1


_CONFIG_KEYS = {"n", "q", "w", "beta", "l_bu", "l_mem", "clock_period_ps", "clock_hz",
                "transforms", "seed", "idle_gap", "bubble_rate", "strict", "pruned_mac"}


def load_config(path: str | Path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    text = Path(path).read_text()
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.read_string("[sim]\n" + text)
    raw = dict(cp["sim"])
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    out: dict = {}
    for key, val in raw.items():
        if key == "l_mem" and "," in val:
            out[key] = [int(x) for x in val.split(",")]
        elif key in ("clock_period_ps", "clock_hz", "bubble_rate"):
            out[key] = float(val)
        elif key in ("strict", "pruned_mac"):
            out[key] = cp["sim"].getboolean(key)
        else:
            out[key] = int(val)
    return out


def cmd_sim_run(args) -> int:
    conf = load_config(args.config)
    n = conf.pop("n", 128)
    ctx = make_context(conf.pop("q", DEFAULT_Q), n, conf.pop("w", 32), conf.pop("beta", None))
    transforms = conf.pop("transforms", 16)
    seed = conf.pop("seed", args.seed)
    conf.setdefault("l_mem", _default_l_mem(n))
    cfg = PipelineConfig(ctx, trace=bool(args.trace), seed=seed, **conf)
    rng = random.Random(seed)
    inputs = [[rng.randrange(ctx.q) for _ in range(n)] for _ in range(transforms)]
    perm = derive_output_permutation(cfg)
    res = run_pipeline(inputs, cfg)
    bad = sum(apply_output_permutation(y, perm).coeffs != ntt_ct(x, ctx).coeffs
              for x, y in zip(inputs, res.outputs))
    res.report.details["mismatches"] = bad
    if args.trace:
        with open(args.trace, "w") as fh:
            res.trace.write_jsonl(fh)
    if args.report:
        Path(args.report).write_text(res.report.to_csv() if args.report.endswith(".csv")
                                     else res.report.to_json() + "\n")
    _emit(res.report.to_dict() if not bad else {"error": "VerificationFailed",
                                                  **res.report.to_dict()})
    return 0 if not bad else 1


def cmd_phase_assign(args) -> int:
    graph = GateGraph.from_edgelist(Path(args.graph).read_text())
    a = assign_phases(graph, args.k, args.method)
    report = check_hold_safe(a, graph)
    base = dff_sweep(graph, [1], args.method)[1]["total_dff"]
    stats = {**a.stats(), "method": args.method, "dff_at_k1": base,
             "reduction_vs_k1": 0.0 if base == 0 else 1 - a.total_dff / base,
             "clock_hz": throughput_of(args.k, args.base_ghz * 1e9),
             "hold_violations": report.violations}
    if args.out:
        Path(args.out).write_text(a.to_csv() if args.out.endswith(".csv") else a.to_json() + "\n")
    _emit(stats)
    return 0 if report.ok else 1


def _table4_text() -> str:
    cfg = PipelineConfig(make_context(DEFAULT_Q, 128), clock_hz=DEFAULT_CLOCK_HZ)
    r = latency_report(cfg)
    lines = [
        "NTT-128 latency and throughput",
        f"  butterfly unit per PE : {DEFAULT_L_BU} cycles",
        f"  memory block per PE   : {DEFAULT_L_MEM} cycles",
        f"  PEs                   : {r.details['pes']}",
        f"  total design          : {r.cycles} cycles",
        f"  latency @ {DEFAULT_CLOCK_PERIOD_PS} ps     : {r.latency_ns:.2f} ns",
        f"  initiation interval   : {r.details['initiation_interval_cycles']} cycles",
        f"  throughput @ 34 GHz   : {format_rate(r.throughput_per_s, 'NTT/s')}",
    ]
    return "\n".join(lines)


def cmd_cost(args) -> int:
    if args.what == "table4":
        if args.format == "text":
            print(_table4_text())
            return 0
        rep = latency_report(PipelineConfig(make_context(DEFAULT_Q, 128), clock_hz=DEFAULT_CLOCK_HZ))
    elif args.what == "big-ntt":
        rep = big_ntt_cycles(args.n_big, args.k_units, args.flush, args.clock_ps)
        if args.format == "text":
            d = rep.details
            print(f"{args.n_big}-point NTT on {args.k_units} NTT-128 core(s)\n"
                  f"  core cycles      : {d['core_cycles']} cycles "
                  f"({d['core_latency_ns']:.1f} ns @ {args.clock_ps} ps)\n"
                  f"  with flush       : {rep.cycles} cycles ({rep.latency_ns:.1f} ns)")
            return 0
    else:
        rep = keyswitch_estimate(levels=args.levels, clock_period_ps=args.clock_ps,
                                 clock_hz=args.clock_ghz * 1e9 if args.clock_ghz else None)
        if args.format == "text":
            print(f"key switch, N=2^14, L+1={args.levels}\n"
                  f"  cycles           : {rep.cycles}\n"
                  f"  throughput       : {rep.throughput_per_s:,.0f} ops/s\n"
                  f"  vs {HEAX_KEYSWITCH_PER_S} ops/s    : {rep.details['speedup_vs_heax']:.1f}x")
            return 0
    print(rep.to_csv() if args.format == "csv" else rep.to_json())
    return 0


def cmd_params_check(args) -> int:
    r = ckks_security_check(args.n, args.lam, args.logpql)
    _emit({"n": args.n, "lambda": args.lam, "log_pql": args.logpql,
           "required_n": r.required_n, "margin": r.margin, "satisfied": r.satisfied})
    return 0 if r.satisfied else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sce-ntt", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: $SCE_NTT_SEED or 0)")
    groups = p.add_subparsers(dest="group", required=True)

    verify = groups.add_parser("verify").add_subparsers(dest="cmd", required=True)
    v = verify.add_parser("ntt", help="pipeline vs. golden NTT on random inputs")
    v.add_argument("--n", type=int, default=128)
    v.add_argument("--q", type=int, default=DEFAULT_Q)
    v.add_argument("--cases", type=int, default=100)
    v.add_argument("--l-bu", type=int, default=DEFAULT_L_BU)
    v.add_argument("--l-mem", type=int, default=None)
    v.add_argument("--oracle", choices=("brute", "ct"), default=None)
    v.set_defaults(func=cmd_verify_ntt)

    sim = groups.add_parser("sim").add_subparsers(dest="cmd", required=True)
    s = sim.add_parser("run", help="stream transforms described by a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--trace", default=None, help="write per-cycle events as JSON lines")
    s.add_argument("--report", default=None, help="write the cost report (.json or .csv)")
    s.set_defaults(func=cmd_sim_run)

    phase = groups.add_parser("phase").add_subparsers(dest="cmd", required=True)
    a = phase.add_parser("assign", help="multiphase clock assignment for an edge list")
    a.add_argument("--graph", required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--method", choices=METHODS, default="lp_relax_round")
    a.add_argument("--base-ghz", type=float, default=34.0)
    a.add_argument("--out", default=None, help="write the assignment (.csv or .json)")
    a.set_defaults(func=cmd_phase_assign)

    c = groups.add_parser("cost", help="reproduce the latency/cost figures")
    c.add_argument("what", choices=("table4", "big-ntt", "keyswitch"))
    c.add_argument("--n-big", type=int, default=1 << 14)
    c.add_argument("--k-units", type=int, default=1)
    c.add_argument("--flush", type=int, default=None)
    c.add_argument("--levels", type=int, default=8)
    c.add_argument("--clock-ps", type=float, default=DEFAULT_CLOCK_PERIOD_PS)
    c.add_argument("--clock-ghz", type=float, default=None)
    c.add_argument("--format", choices=("text", "json", "csv"), default="text")
    c.set_defaults(func=cmd_cost)

    params = groups.add_parser("params").add_subparsers(dest="cmd", required=True)
    pc = params.add_parser("check", help="CKKS ring-size security inequality")
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--lambda", dest="lam", type=float, required=True)
    pc.add_argument("--logpql", type=float, required=True)
    pc.set_defaults(func=cmd_params_check)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    try:
        return args.func(args)
    except (UsageError, FileNotFoundError, configparser.Error) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 2
    except ValueError as exc:
        # bad parameters (not prime, no root, N not a power of two, ...)
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 2
    except SceNttError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
