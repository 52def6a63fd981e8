import io
import json
import random
from collections import Counter

import pytest

from scentt.errors import ContextMismatch, ScheduleViolation
from scentt.modmath import Order, bit_reverse, make_context
from scentt.pipesim import (
    PipelineConfig,
    PipelineTrace,
    apply_output_permutation,
    derive_output_permutation,
    latency_report,
    run_pipeline,
)
from scentt.reference import dft_bruteforce, ntt_ct, ntt_ct_stages

Q31 = 2013265921


def polys(n, q, count, seed=0):
    rng = random.Random(seed)
    return [[rng.randrange(q) for _ in range(n)] for _ in range(count)]


def check_outputs(inputs, res, cfg):
    perm = derive_output_permutation(cfg)
    for x, y in zip(inputs, res.outputs):
        assert y.order is Order.PIPELINE
        assert apply_output_permutation(y, perm) == dft_bruteforce(x, cfg.ctx)


@pytest.mark.parametrize("q,n,l_bu,l_mem", [(17, 8, 5, 4), (17, 16, 0, 8), (257, 32, 3, 20),
                                            (Q31, 128, 79, 69)])
def test_pipeline_matches_bruteforce(q, n, l_bu, l_mem):
    cfg = PipelineConfig(make_context(q, n), l_bu=l_bu, l_mem=l_mem, trace=False)
    inputs = polys(n, q, 6)
    check_outputs(inputs, run_pipeline(inputs, cfg), cfg)


def test_output_permutation_is_bit_reverse():
    for n in (8, 16, 128):
        cfg = PipelineConfig(make_context(Q31, n), l_bu=2, l_mem=n // 2, trace=False)
        s = n.bit_length() - 1
        assert derive_output_permutation(cfg) == [bit_reverse(p, s) for p in range(n)]


def test_latency_and_ii():
    cfg = PipelineConfig(make_context(17, 8), l_bu=5, l_mem=4, trace=False)
    res = run_pipeline(polys(8, 17, 4), cfg)
    assert res.report.cycles == 3 * (5 + 4) == 27
    assert res.report.details["measured_latency_cycles"] == 27
    assert res.report.details["measured_initiation_intervals"] == [4]


def test_per_pe_memory_latency():
    ctx = make_context(257, 16)
    cfg = PipelineConfig(ctx, l_bu=1, l_mem=[8, 9, 10, 12], trace=False)
    inputs = polys(16, 257, 3)
    res = run_pipeline(inputs, cfg)
    assert res.report.details["measured_latency_cycles"] == 4 + 39
    check_outputs(inputs, res, cfg)
    with pytest.raises(ContextMismatch):
        run_pipeline(inputs, PipelineConfig(ctx, l_mem=[8, 8]))


def test_l_mem_below_fill_rejected():
    cfg = PipelineConfig(make_context(17, 16), l_bu=1, l_mem=7)
    with pytest.raises(ScheduleViolation):
        run_pipeline(polys(16, 17, 1), cfg)


def test_butterfly_inputs_match_reference_stages():
    ctx = make_context(Q31, 32)
    x = polys(32, Q31, 1, seed=3)[0]
    rec = []
    ntt_ct_stages(x, ctx, record=rec)
    res = run_pipeline([x], PipelineConfig(ctx, l_bu=2, l_mem=16))
    for k in range(ctx.log_n):
        got = Counter(tuple(r.value) for r in res.trace.select(pe=k, event="bu_in"))
        assert got == Counter(tuple(t) for t in rec[k])


@pytest.mark.parametrize("idle_gap,bubble_rate", [(3, 0.0), (0, 0.3), (5, 0.2)])
def test_gaps_and_bubbles(idle_gap, bubble_rate):
    ctx = make_context(257, 16)
    cfg = PipelineConfig(ctx, l_bu=4, l_mem=10, idle_gap=idle_gap, bubble_rate=bubble_rate,
                         seed=11, trace=False)
    inputs = polys(16, 257, 8, seed=5)
    res = run_pipeline(inputs, cfg)
    assert len(res.outputs) == 8
    check_outputs(inputs, res, cfg)


def test_pruned_mac_same_result():
    ctx = make_context(257, 32)
    inputs = polys(32, 257, 4)
    a = run_pipeline(inputs, PipelineConfig(ctx, l_bu=3, l_mem=16, trace=False))
    b = run_pipeline(inputs, PipelineConfig(ctx, l_bu=3, l_mem=16, trace=False, pruned_mac=True))
    assert a.outputs == b.outputs


def test_trace_deterministic_and_monotone():
    ctx = make_context(17, 8)
    cfg = PipelineConfig(ctx, l_bu=2, l_mem=4, bubble_rate=0.25, seed=9)
    inputs = polys(8, 17, 3)
    dumps = []
    for _ in range(2):
        buf = io.StringIO()
        run_pipeline(inputs, cfg).trace.write_jsonl(buf)
        dumps.append(buf.getvalue())
    assert dumps[0] == dumps[1]
    cycles = [json.loads(line)["cycle"] for line in dumps[0].splitlines()]
    assert cycles == sorted(cycles)
    t = PipelineTrace()
    t.add(5, 0, "in", None)
    with pytest.raises(ScheduleViolation):
        t.add(4, 0, "in", None)


def test_flip_events():
    ctx = make_context(17, 8)
    res = run_pipeline(polys(8, 17, 3), PipelineConfig(ctx, l_bu=1, l_mem=4))
    flips = res.trace.select(pe=0, event="flip")
    assert [r.value for r in flips] == [0, 1, 0]
    assert [r.cycle for r in flips] == [3, 7, 11]


def test_default_latency_report():
    r = latency_report(PipelineConfig(make_context(Q31, 128), clock_hz=34e9))
    assert r.cycles == 1036
    assert r.details["initiation_interval_cycles"] == 64
    assert r.throughput_per_s == pytest.approx(531.25e6)
    assert r.details["tw_load_cycles"] == 64
    assert "1036" in r.to_text()
