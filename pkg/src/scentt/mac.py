"""Memory access controller: TFF divider tree driving set/reset latches.

The controller keeps no schedule table. Each side (write, read) owns a ripple
chain of toggle flip-flops whose one-hot decode sets and resets NDRO-style
latches; the latches select the bank and the queue pair. A pruned controller
drops the decoder and taps the TFF states that matter directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional


class TffTree:
    """Ripple chain of ``depth`` TFFs with a one-hot decoder of width 2^depth."""

    def __init__(self, depth: int, pruned: bool = False):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.depth = depth
        self.pruned = pruned
        self.states = [False] * depth  # states[0] is the root (input) TFF

    def pulse(self) -> None:
        for j in range(self.depth):
            self.states[j] = not self.states[j]
            if self.states[j]:
                break  # no falling edge, the carry stops here

    def one_hot(self) -> list[bool]:
        # AND-tree decode, most significant stage first.
        lines = [True]
        for j in reversed(range(self.depth)):
            b = self.states[j]
            lines = [x for node in lines for x in (node and not b, node and b)]
        return lines

    def index(self) -> int:
        if self.pruned:
            return sum(1 << j for j, s in enumerate(self.states) if s)
        # Follow the single live path of the decode tree (same answer as
        # one_hot().index(True) without building all 2^depth lines).
        node = 0
        for j in reversed(range(self.depth)):
            node = 2 * node + self.states[j]
        return node

    def tap(self, stage: int) -> bool:
        return self.states[stage]


def tff_step(tree: TffTree) -> int:
    """Return the active one-hot index, then apply one input pulse."""
    idx = tree.index()
    tree.pulse()
    return idx


@dataclass(frozen=True)
class TriggerSet:
    cycle: int
    write_bank: Optional[int]
    write_queues: tuple[int, ...]
    read_bank: Optional[int]
    read_queues: tuple[int, ...]
    csrm: bool
    flip: bool


class _Side:
    """One counter plus the latches it drives."""

    def __init__(self, N: int, pruned: bool):
        self.N = N
        self.tree = TffTree(N.bit_length() - 1, pruned=pruned)
        self.pruned = pruned
        self.bank = False
        self.half = False
        self.parity = False

    def step(self) -> tuple[int, bool, bool]:
        N, d = self.N, self.tree.depth
        if self.pruned:
            bank = self.tree.tap(d - 1)
            half = self.tree.tap(d - 2) if d >= 2 else False
            parity = self.tree.tap(0)
            self.tree.pulse()
            return int(bank), half, parity
        idx = tff_step(self.tree)
        # NDRO latches: set/reset on specific one-hot lines.
        if idx == 0:
            self.bank = False
        elif idx == N // 2:
            self.bank = True
        if idx % (N // 2) == 0:
            self.half = False
        elif idx % (N // 2) == N // 4:
            self.half = True
        self.parity = bool(idx & 1)
        return int(self.bank), self.half, self.parity


class MemoryAccessController:
    """Trigger generator for one PE (N >= 4)."""

    def __init__(self, N: int, pruned: bool = False):
        if N < 4 or N & (N - 1):
            raise ValueError("N must be a power of two >= 4")
        self.N = N
        self.pruned = pruned
        self._w = _Side(N, pruned)
        self._r = _Side(N, pruned)

    def next_write(self) -> tuple[int, tuple[int, int]]:
        bank, half, _ = self._w.step()
        return bank, ((2, 3) if half else (0, 1))

    def next_read(self) -> tuple[int, tuple[int, int]]:
        bank, _, parity = self._r.step()
        return bank, ((1, 3) if parity else (0, 2))

    def run(self, cycles: int) -> Iterator[TriggerSet]:
        """Free-running schedule for back-to-back transforms from cycle 0."""
        half = self.N // 2
        for c in range(cycles):
            wb, wq = self.next_write()
            if c >= half:
                rb, rq = self.next_read()
            else:
                rb, rq = None, ()
            yield TriggerSet(c, wb, wq, rb, rq, csrm=c >= half,
                             flip=c > 0 and c % half == 0)


def mac_triggers(cycle: int, pe_index: int, N: int, pruned: bool = False) -> TriggerSet:
    """Trigger set of PE ``pe_index`` at local ``cycle`` of a streaming run.

    The queue pattern is identical for every PE (constant geometry); the PE
    index only bounds the CSRM length 2^pe_index.
    """
    if cycle < 0:
        raise ValueError("cycle must be >= 0")
    if not 0 <= pe_index < N.bit_length() - 1:
        raise ValueError(f"no PE {pe_index} for N={N}")
    ts = None
    for ts in MemoryAccessController(N, pruned).run(cycle + 1):
        pass
    return ts
