"""Shift-register memory model: coefficient banks, twiddle CSRMs, layouts.

A coefficient bank holds N words in four queues of N/4 slots. Writes follow
``write_schedule`` (first half of a transform to queues 0/1, second half to
2/3) and reads follow ``read_schedule`` (queues 0/2 on even cycles, 1/3 on
odd ones), which yields the pair (c, c + N/2) of the incoming stream at
read cycle c.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

from .errors import (
    CollisionDetected,
    CycleOutOfRange,
    EmptyRead,
    IndexOutOfRange,
    OverflowDetected,
    ScheduleViolation,
)
from .modmath import rotate_left_bits

TraceHook = Callable[[str, int, Optional[int]], None]

# DI0 feeds queues 0 and 2, DI1 feeds 1 and 3.
BROADCAST = {0: 0, 1: 1, 2: 0, 3: 1}
# Output merger of port 0 joins queues 0/1, port 1 joins 2/3.
MERGER = {0: 0, 1: 0, 2: 1, 3: 1}


def layout_address(i: int, k: int, s: int) -> tuple[int, int]:
    """(queue, slot) holding original coefficient i in the bank of PE_k."""
    if s < 2 or not 0 <= i < (1 << s) or not 0 <= k < s:
        raise IndexOutOfRange(f"i={i}, k={k}, s={s}")
    r = rotate_left_bits(i, k, s)
    msb = r >> (s - 1)
    return 2 * msb + (r & 1), (r >> 1) & ((1 << (s - 2)) - 1)


def write_schedule(c: int, N: int) -> tuple[int, int]:
    """Queues latching (DI0, DI1) at write cycle c of a transform."""
    if not 0 <= c < N // 2:
        raise CycleOutOfRange(f"write cycle {c} outside [0, {N // 2})")
    return (0, 1) if c < N // 4 else (2, 3)


def read_schedule(c: int, N: int) -> tuple[int, int]:
    """Queues whose heads are read at read cycle c of a transform."""
    if not 0 <= c < N // 2:
        raise CycleOutOfRange(f"read cycle {c} outside [0, {N // 2})")
    return (0, 2) if c % 2 == 0 else (1, 3)


class SrmQueue:
    """Triggered shift register; slot 0 is the head, the last slot the tail.

    A write trigger shifts every word one slot toward the head and latches the
    new word at the tail; a read trigger emits the head and shifts likewise.
    """

    def __init__(self, depth: int, width: int = 32):
        self.depth = depth
        self.width = width
        self._slots: deque[Optional[int]] = deque([None] * depth, maxlen=depth)

    @property
    def slots(self) -> list[Optional[int]]:
        return list(self._slots)

    @property
    def head(self) -> Optional[int]:
        return self._slots[0]

    def occupancy(self) -> int:
        return sum(s is not None for s in self._slots)

    def push(self, word: int) -> None:
        if self._slots[0] is not None:
            raise OverflowDetected("write trigger would shift a word out of the head")
        if word >> self.width:
            raise OverflowDetected(f"word {word} wider than {self.width} bits")
        self._slots.popleft()
        self._slots.append(word)

    def pop(self) -> int:
        word = self._slots[0]
        if word is None:
            raise EmptyRead("read trigger on an empty head slot")
        self._slots.popleft()
        self._slots.append(None)
        return word


class BankMode(Enum):
    WRITING = "writing"
    READING = "reading"
    IDLE = "idle"


@dataclass
class CoefficientBank:
    N: int
    width: int = 32
    strict: bool = True
    mode: BankMode = BankMode.IDLE
    fill_count: int = 0
    queues: list[SrmQueue] = field(default_factory=list)
    faults: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.N < 4:
            raise ValueError("a bank needs N >= 4 (four queues of N/4 slots)")
        if not self.queues:
            self.queues = [SrmQueue(self.N // 4, self.width) for _ in range(4)]

    def fault(self, exc: ScheduleViolation) -> None:
        if self.strict:
            raise exc
        self.faults.append(f"{type(exc).__name__}: {exc}")

    def occupancy(self) -> int:
        return sum(q.occupancy() for q in self.queues)


def bank_tick(bank: CoefficientBank, triggers: Iterable[int],
              inputs: Sequence[Optional[int]] = (None, None),
              hook: TraceHook | None = None) -> tuple[Optional[int], Optional[int]]:
    """Advance one cycle; returns the words on the two output mergers.

    In writing mode DI0/DI1 are broadcast and only the triggered queues latch
    them. In reading mode each triggered queue shifts its head out through the
    merger of its port; two words on one merger in the same cycle is a
    collision.
    """
    triggers = tuple(triggers)
    out: list[Optional[int]] = [None, None]
    if bank.mode is BankMode.WRITING:
        for qid in triggers:
            word = inputs[BROADCAST[qid]]
            if word is None:
                bank.fault(ScheduleViolation(f"queue {qid} triggered without input"))
                continue
            try:
                bank.queues[qid].push(word)
            except OverflowDetected as exc:
                bank.fault(exc)
                continue
            bank.fill_count += 1
            if hook:
                hook("write", qid, word)
    elif bank.mode is BankMode.READING:
        for qid in triggers:
            port = MERGER[qid]
            try:
                word = bank.queues[qid].pop()
            except EmptyRead as exc:
                bank.fault(exc)
                continue
            if out[port] is not None:
                bank.fault(CollisionDetected(f"merger {port} received two words"))
                continue
            out[port] = word
            bank.fill_count -= 1
            if hook:
                hook("read", qid, word)
    elif triggers:
        bank.fault(ScheduleViolation("trigger on an idle bank"))
    return out[0], out[1]


class Csrm:
    """Circular shift-register memory for the twiddle stream of PE_k.

    While ``load_mode`` is set, ``load`` shifts words in at the tail. Once
    loading is finished, each trigger emits the head and feeds it back to the
    tail, so the contents rotate with period ``len(stages)``.
    """

    def __init__(self, length: int, width: int = 32):
        self.length = length
        self.width = width
        self.stages: deque[Optional[int]] = deque([None] * length, maxlen=length)
        self.load_mode = True
        self._loaded = 0

    def load(self, word: int) -> None:
        if not self.load_mode:
            raise ScheduleViolation("CSRM load outside load mode")
        if word >> self.width:
            raise OverflowDetected(f"word {word} wider than {self.width} bits")
        if self._loaded >= self.length:
            raise OverflowDetected("CSRM already holds a full cycle of words")
        self.stages.popleft()
        self.stages.append(word)
        self._loaded += 1

    def finish_load(self) -> None:
        if self._loaded != self.length:
            raise ScheduleViolation(f"CSRM loaded {self._loaded}/{self.length} words")
        self.load_mode = False

    def load_all(self, words: Iterable[int]) -> None:
        for w in words:
            self.load(w)
        self.finish_load()

    @property
    def head(self) -> Optional[int]:
        return self.stages[0]


def csrm_tick(csrm: Csrm, trigger: bool = True) -> Optional[int]:
    """Emit the head word on a trigger and recirculate it; reads are non-destructive."""
    if not trigger:
        return None
    if csrm.load_mode:
        raise ScheduleViolation("CSRM triggered before loading finished")
    word = csrm.stages.popleft()
    csrm.stages.append(word)
    return word


def replay_stage(stream: Sequence[int], N: int) -> list[tuple[int, int]]:
    """Push one transform's stream through a fresh bank and read it back.

    ``stream`` is in arrival order (two words per write cycle); returns the
    pairs read at cycles 0..N/2-1. Used to check the schedules without any
    arithmetic in the way.
    """
    bank = CoefficientBank(N, width=max(32, max(stream).bit_length() if stream else 1))
    bank.mode = BankMode.WRITING
    for c in range(N // 2):
        bank_tick(bank, write_schedule(c, N), (stream[2 * c], stream[2 * c + 1]))
    bank.mode = BankMode.READING
    pairs = []
    for c in range(N // 2):
        pairs.append(bank_tick(bank, read_schedule(c, N)))
    return pairs
