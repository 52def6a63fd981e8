"""Cycle-accurate model of the pipelined NTT: log2(N) processing elements.

Each PE owns two coefficient banks used ping-pong, TW and TW' CSRMs, a memory
access controller and a pipelined butterfly unit. Two coefficients enter and
two leave every cycle in steady state.

Timing model (per PE, in cycles):

* a bank fills in N/2 write cycles and is read out over the next N/2 cycles,
  starting the cycle after it becomes full;
* read words pass through ``l_mem - N/2`` extra cycles of access delay, so the
  first word written reaches the butterfly ``l_mem`` cycles after it arrived;
* the butterfly unit adds ``l_bu`` cycles.

So the first output leaves PE_k ``l_mem + l_bu`` cycles after its first input.
"""
from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, NamedTuple, Optional, Sequence

from .errors import ContextMismatch, NotAPermutation, ScheduleViolation
from .mac import MemoryAccessController
from .memsim import BankMode, CoefficientBank, Csrm, bank_tick, csrm_tick
from .modmath import ModulusContext, Order, Polynomial, check_poly
from .reference import ntt_ct, twiddle_schedule
from .report import CostReport

DEFAULT_L_BU = 79
DEFAULT_L_MEM = 69
DEFAULT_CLOCK_PERIOD_PS = 29.4
DEFAULT_CLOCK_HZ = 34e9


@dataclass
class PipelineConfig:
    ctx: ModulusContext
    l_bu: int = DEFAULT_L_BU
    l_mem: int | Sequence[int] = DEFAULT_L_MEM
    clock_period_ps: float = DEFAULT_CLOCK_PERIOD_PS
    # None derives the rate from the period; set it to report at a nominal rate.
    clock_hz: float | None = None
    strict: bool = True
    trace: bool = True
    idle_gap: int = 0
    bubble_rate: float = 0.0
    seed: int = 0
    pruned_mac: bool = False
    flush_cycles: int = 200

    @property
    def stages(self) -> int:
        return self.ctx.log_n

    def l_mem_per_pe(self) -> list[int]:
        if isinstance(self.l_mem, int):
            return [self.l_mem] * self.stages
        l_mem = [int(x) for x in self.l_mem]
        if len(l_mem) != self.stages:
            raise ContextMismatch(f"{len(l_mem)} memory latencies for {self.stages} PEs")
        return l_mem

    def rate_hz(self) -> float:
        return self.clock_hz if self.clock_hz else 1e12 / self.clock_period_ps

    def validate(self) -> None:
        N = self.ctx.N
        if N < 4:
            raise ContextMismatch("the pipeline needs N >= 4")
        if self.l_bu < 0:
            raise ScheduleViolation("negative butterfly latency")
        for k, lm in enumerate(self.l_mem_per_pe()):
            if lm < N // 2:
                raise ScheduleViolation(
                    f"PE{k}: l_mem={lm} is shorter than the N/2={N // 2} cycle bank fill")


class TraceRecord(NamedTuple):
    cycle: int
    pe: int
    event: str
    value: object


class PipelineTrace:
    """Append-only, cycle-monotone list of per-PE events."""

    def __init__(self):
        self.records: list[TraceRecord] = []
        self._last = -1

    def add(self, cycle: int, pe: int, event: str, value: object) -> None:
        if cycle < self._last:
            raise ScheduleViolation("trace records must be cycle-monotone")
        self._last = cycle
        self.records.append(TraceRecord(cycle, pe, event, value))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[TraceRecord]:
        return iter(self.records)

    def select(self, pe: int | None = None, event: str | None = None) -> list[TraceRecord]:
        return [r for r in self.records
                if (pe is None or r.pe == pe) and (event is None or r.event == event)]

    def write_jsonl(self, fh: IO[str]) -> None:
        for r in self.records:
            fh.write(json.dumps({"cycle": r.cycle, "pe": r.pe, "event": r.event,
                                 "value": r.value}, sort_keys=True,
                                separators=(",", ":")))
            fh.write("\n")


class ButterflyUnit:
    """Fixed-depth pipeline computing (A + B*TW, A - B*TW) mod q with Shoup."""

    def __init__(self, ctx: ModulusContext, depth: int):
        self.ctx = ctx
        self.depth = depth
        self._pipe: deque = deque([None] * depth)

    def compute(self, a: int, b: int, tw: int, twp: int) -> tuple[int, int]:
        q = self.ctx.q
        t = b * tw - ((b * twp) >> self.ctx.beta) * q
        if t >= q:
            t -= q
        hi = a + t
        if hi >= q:
            hi -= q
        lo = a - t
        if lo < 0:
            lo += q
        return hi, lo

    def tick(self, item: Optional[tuple[int, int, int, int]]) -> Optional[tuple[int, int]]:
        res = None if item is None else self.compute(*item)
        if self.depth == 0:
            return res
        self._pipe.append(res)
        return self._pipe.popleft()


class ProcessingElement:
    def __init__(self, k: int, config: PipelineConfig, trace: PipelineTrace | None):
        ctx = config.ctx
        self.k = k
        self.N = ctx.N
        self.ctx = ctx
        self.trace = trace
        self.banks = [CoefficientBank(ctx.N, width=ctx.w, strict=config.strict)
                      for _ in range(2)]
        self.tw = Csrm(1 << k, width=ctx.w)
        self.twp = Csrm(1 << k, width=ctx.beta)
        sched = twiddle_schedule(k, ctx)
        self.tw.load_all(t for t, _ in sched)
        self.twp.load_all(p for _, p in sched)
        self.mac = MemoryAccessController(ctx.N, pruned=config.pruned_mac)
        self.l_mem = config.l_mem_per_pe()[k]
        self.delay: deque = deque([None] * (self.l_mem - ctx.N // 2))
        self.bu = ButterflyUnit(ctx, config.l_bu)
        self.reading: Optional[int] = None
        self.read_count = 0
        self.write_count = 0
        self._cycle = 0

    def _hook(self, bank_id: int):
        if self.trace is None:
            return None

        def hook(op, qid, word):
            self.trace.add(self._cycle, self.k, op, [bank_id, qid, word])
        return hook

    def _violation(self, msg: str) -> None:
        raise ScheduleViolation(f"PE{self.k} cycle {self._cycle}: {msg}")

    def tick(self, cycle: int, inp: Optional[tuple[int, int]]) -> Optional[tuple[int, int]]:
        self._cycle = cycle
        half = self.N // 2
        item = None
        if self.reading is not None:
            bank_id, queues = self.mac.next_read()
            if bank_id != self.reading:
                self._violation(f"MAC read bank {bank_id} but bank {self.reading} is reading")
            bank = self.banks[bank_id]
            a, b = bank_tick(bank, queues, hook=self._hook(bank_id))
            tw, twp = csrm_tick(self.tw), csrm_tick(self.twp)
            if a is not None and b is not None:
                item = (a, b, tw, twp)
            self.read_count += 1
            if self.read_count == half:
                bank.mode = BankMode.IDLE
                self.reading = None
                self.read_count = 0
        if inp is not None:
            if self.trace is not None:
                self.trace.add(cycle, self.k, "in", list(inp))
            bank_id, queues = self.mac.next_write()
            bank = self.banks[bank_id]
            if bank.mode is BankMode.IDLE:
                if bank.occupancy():
                    self._violation(f"bank {bank_id} reused before it was drained")
                bank.mode = BankMode.WRITING
            elif bank.mode is BankMode.READING:
                self._violation(f"write into bank {bank_id} while it is reading")
            bank_tick(bank, queues, inp, hook=self._hook(bank_id))
            self.write_count += 1
            if self.write_count == half:
                if self.reading is not None:
                    self._violation("both banks full: input arrived faster than N/2 per transform")
                bank.mode = BankMode.READING
                self.reading = bank_id
                self.write_count = 0
                if self.trace is not None:
                    self.trace.add(cycle, self.k, "flip", bank_id)
        if self.delay:
            self.delay.append(item)
            item = self.delay.popleft()
        if item is not None and self.trace is not None:
            self.trace.add(cycle, self.k, "bu_in", list(item[:3]))
        out = self.bu.tick(item)
        if out is not None and self.trace is not None:
            self.trace.add(cycle, self.k, "out", list(out))
        return out


class PipelineResult(NamedTuple):
    outputs: list[Polynomial]
    trace: PipelineTrace
    report: CostReport


def _input_schedule(polys: list[list[int]], config: PipelineConfig) -> Iterator[Optional[tuple[int, int]]]:
    rng = random.Random(config.seed)
    half = config.ctx.N // 2
    for j, p in enumerate(polys):
        if j:
            for _ in range(config.idle_gap):
                yield None
        c = 0
        while c < half:
            if config.bubble_rate and rng.random() < config.bubble_rate:
                yield None
                continue
            yield p[2 * c], p[2 * c + 1]
            c += 1


def run_pipeline(inputs: Iterable, config: PipelineConfig) -> PipelineResult:
    """Stream natural-order polynomials through the pipeline.

    Outputs are returned in pipeline (stream) order; ``apply_output_permutation``
    with ``derive_output_permutation(config)`` maps them to natural order.
    """
    config.validate()
    ctx = config.ctx
    polys = [check_poly(p, ctx) for p in inputs]
    trace = PipelineTrace()
    pes = [ProcessingElement(k, config, trace if config.trace else None)
           for k in range(config.stages)]
    half = ctx.N // 2
    latency = sum(config.l_bu + lm for lm in config.l_mem_per_pe())

    feed = _input_schedule(polys, config)
    outputs: list[Polynomial] = []
    current: list[int] = []
    first_in: Optional[int] = None
    out_starts: list[int] = []
    cycle = 0
    limit = None
    while len(outputs) < len(polys):
        inp = next(feed, None)
        if inp is not None and first_in is None:
            first_in = cycle
        for pe in pes:
            inp = pe.tick(cycle, inp)
        if inp is not None:
            if not current:
                out_starts.append(cycle)
            current.extend(inp)
            if len(current) == ctx.N:
                outputs.append(Polynomial(current, Order.PIPELINE))
                current = []
        cycle += 1
        if limit is None:
            # Generous bound: every input cycle plus the full pipeline latency.
            span = len(polys) * (half + config.idle_gap) * (2 if config.bubble_rate else 1)
            limit = 4 * (span + latency + ctx.N) + 1000
        if cycle > limit:
            raise ScheduleViolation(f"pipeline produced {len(outputs)}/{len(polys)} outputs "
                                    f"after {cycle} cycles")

    report = latency_report(config)
    if out_starts and first_in is not None:
        report.details["measured_latency_cycles"] = out_starts[0] - first_in
    if len(out_starts) > 1:
        gaps = {b - a for a, b in zip(out_starts, out_starts[1:])}
        report.details["measured_initiation_intervals"] = sorted(gaps)
    report.details["simulated_cycles"] = cycle
    report.details["transforms"] = len(polys)
    return PipelineResult(outputs, trace, report)


def apply_output_permutation(raw: Sequence[int], perm: Sequence[int]) -> Polynomial:
    out = [0] * len(raw)
    for p, idx in enumerate(perm):
        out[idx] = raw[p]
    return Polynomial(out)


def derive_output_permutation(config: PipelineConfig) -> list[int]:
    """Map pipeline output position -> natural-order NTT index.

    The probe x (coefficient 1 at index 1) has spectrum omega^r, all distinct,
    so each output word names its own frequency index through the twiddle
    table. A second, random probe confirms the map is input independent.
    """
    ctx = config.ctx
    quiet = PipelineConfig(**{**config.__dict__, "trace": False, "bubble_rate": 0.0,
                              "idle_gap": 0})
    probe = [0] * ctx.N
    probe[1] = 1
    rng = random.Random(config.seed + 1)
    check = [rng.randrange(ctx.q) for _ in range(ctx.N)]
    res = run_pipeline([probe, check], quiet)
    where = {t: j for j, t in enumerate(ctx.twiddles)}
    try:
        perm = [where[v] for v in res.outputs[0]]
    except KeyError as exc:
        raise NotAPermutation(f"output word {exc} is not a power of omega") from None
    if sorted(perm) != list(range(ctx.N)):
        raise NotAPermutation("pipeline output order is not a bijection")
    if apply_output_permutation(res.outputs[1], perm).coeffs != ntt_ct(check, ctx).coeffs:
        raise NotAPermutation("output order depends on the input")
    return perm


def latency_report(config: PipelineConfig) -> CostReport:
    """Static latency/throughput accounting from the configured constants."""
    l_mem = config.l_mem_per_pe()
    per_pe = [config.l_bu + lm for lm in l_mem]
    total = sum(per_pe)
    ii = config.ctx.N // 2
    rate = config.rate_hz()
    return CostReport(
        name=f"ntt-{config.ctx.N}",
        cycles=total,
        clock_period_ps=config.clock_period_ps,
        clock_hz=rate,
        latency_ns=total * config.clock_period_ps / 1000.0,
        throughput_per_s=rate / ii,
        details={
            "pes": config.stages,
            "per_pe_cycles": per_pe,
            "l_bu": config.l_bu,
            "l_mem": l_mem,
            "initiation_interval_cycles": ii,
            "tw_load_cycles": 1 << (config.stages - 1),
            "flush_cycles_per_stage": config.flush_cycles,
        },
        notes=["twiddle CSRM loading is a one-time preamble, excluded from latency"],
    )
