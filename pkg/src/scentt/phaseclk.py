"""Multiphase clock assignment for gate-level DAGs.

Every gate gets an integer global time slot; with k phases the gate is clocked
by phase ``slot % k``. An edge u -> v needs slot(v) >= slot(u) + 1 (the
consumer fires strictly later, which makes it hold-safe). One DFF delays a
signal by a whole clock period, i.e. k slots, so the edge needs

    dff(u, v) = ceil((slot(v) - slot(u)) / k) - 1 = (gap - 1) // k

balancing DFFs. With k = 1 this is classical full path balancing.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Hashable, Iterable, Mapping

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp
from scipy.sparse import lil_matrix

from .errors import CyclicGraph, InfeasibleK

Node = Hashable
Edge = tuple[Node, Node]

KINDS = ("logic", "input", "output")
EXACT_LIMIT = 20


@dataclass
class GateGraph:
    kinds: dict[Node, str]
    edges: list[Edge]
    order: list[Node] = field(init=False, repr=False)
    preds: dict[Node, list[Node]] = field(init=False, repr=False)
    succs: dict[Node, list[Node]] = field(init=False, repr=False)

    def __post_init__(self):
        self.kinds = dict(self.kinds)
        for u, v in self.edges:
            self.kinds.setdefault(u, "logic")
            self.kinds.setdefault(v, "logic")
        for n, kind in self.kinds.items():
            if kind not in KINDS:
                raise ValueError(f"gate {n!r}: unknown kind {kind!r}")
        self.preds = {n: [] for n in self.kinds}
        self.succs = {n: [] for n in self.kinds}
        for u, v in self.edges:
            if u == v:
                raise CyclicGraph(f"self loop on {u!r}")
            self.preds[v].append(u)
            self.succs[u].append(v)
        try:
            self.order = list(TopologicalSorter(self.preds).static_order())
        except CycleError as exc:
            raise CyclicGraph(f"cycle through {exc.args[1]}") from None

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], kinds: Mapping[Node, str] | None = None) -> "GateGraph":
        return cls(dict(kinds or {}), [tuple(e) for e in edges])

    @classmethod
    def from_edgelist(cls, text: str) -> "GateGraph":
        """Parse ``src dst`` lines; ``gate <id> <kind>`` lines annotate kinds."""
        kinds: dict[Node, str] = {}
        edges: list[Edge] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "gate" and len(parts) in (2, 3):
                kinds[parts[1]] = parts[2] if len(parts) == 3 else "logic"
            elif len(parts) == 2:
                edges.append((parts[0], parts[1]))
            else:
                raise ValueError(f"line {lineno}: expected 'src dst' or 'gate id kind'")
        return cls(kinds, edges)

    def to_edgelist(self) -> str:
        lines = [f"gate {n} {k}" for n, k in self.kinds.items() if k != "logic"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @property
    def nodes(self) -> list[Node]:
        return list(self.kinds)

    def __len__(self) -> int:
        return len(self.kinds)

    def depth(self) -> int:
        """Edges on the longest path."""
        asap = asap_slots(self)
        return max(asap.values(), default=0)


def dff_for_gap(gap: int, k: int) -> int:
    return max(0, -(-gap // k) - 1)


@dataclass
class PhaseAssignment:
    k: int
    slot: dict[Node, int]
    edges: list[Edge]

    def phase(self, n: Node) -> int:
        return self.slot[n] % self.k

    @property
    def dff(self) -> dict[Edge, int]:
        return {(u, v): dff_for_gap(self.slot[v] - self.slot[u], self.k) for u, v in self.edges}

    @property
    def total_dff(self) -> int:
        return sum(self.dff.values())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("gate", "slot", "phase"))
        for n in sorted(self.slot, key=str):
            w.writerow((n, self.slot[n], self.phase(n)))
        return buf.getvalue()

    def stats(self) -> dict:
        return {"k": self.k, "gates": len(self.slot), "edges": len(self.edges),
                "total_dff": self.total_dff,
                "edges_with_dff": sum(1 for d in self.dff.values() if d)}

    def to_json(self) -> str:
        return json.dumps({**self.stats(),
                           "slots": {str(n): s for n, s in self.slot.items()}},
                          sort_keys=True, indent=2)


def asap_slots(graph: GateGraph) -> dict[Node, int]:
    slot: dict[Node, int] = {}
    for n in graph.order:
        slot[n] = max((slot[u] + 1 for u in graph.preds[n]), default=0)
    return slot


def alap_slots(graph: GateGraph) -> dict[Node, int]:
    depth = max(asap_slots(graph).values(), default=0)
    slot: dict[Node, int] = {}
    for n in reversed(graph.order):
        slot[n] = min((slot[v] - 1 for v in graph.succs[n]), default=depth)
    return slot


def _cost(graph: GateGraph, slot: Mapping[Node, int], k: int) -> int:
    return sum((slot[v] - slot[u] - 1) // k for u, v in graph.edges)


def _normalize(slot: dict[Node, int]) -> dict[Node, int]:
    lo = min(slot.values(), default=0)
    return {n: s - lo for n, s in slot.items()}


def _repair(graph: GateGraph, slot: Mapping[Node, float]) -> dict[Node, int]:
    """Round to integers and push consumers later until every edge is hold-safe."""
    out: dict[Node, int] = {}
    for n in graph.order:
        s = int(np.floor(slot[n] + 0.5))
        for u in graph.preds[n]:
            s = max(s, out[u] + 1)
        out[n] = s
    return out


def _local_search(graph: GateGraph, slot: dict[Node, int], k: int, max_passes: int = 50) -> dict[Node, int]:
    """Move single gates inside their feasible window while the DFF count drops."""
    slot = dict(slot)
    preds, succs = graph.preds, graph.succs

    def local(n, s):
        return (sum((s - slot[u] - 1) // k for u in preds[n])
                + sum((slot[w] - s - 1) // k for w in succs[n]))

    for _ in range(max_passes):
        improved = False
        for n in graph.order + graph.order[::-1]:
            if not preds[n] and not succs[n]:
                continue
            lo = max((slot[u] + 1 for u in preds[n]), default=None)
            hi = min((slot[w] - 1 for w in succs[n]), default=None)
            if lo is None:
                cands = {hi}
            elif hi is None:
                cands = {lo}
            else:
                # The cost is piecewise constant; every piece starts at lo, just
                # after a pred edge gains a DFF, or where a succ edge loses one.
                cands = {lo}
                for u in preds[n]:
                    cands.update(range(slot[u] + k + 1, hi + 1, k))
                for w in succs[n]:
                    cands.update(range(slot[w] - k, lo - 1, -k))
                cands = {c for c in cands if lo <= c <= hi}
            best_s, best_c = slot[n], local(n, slot[n])
            for c in sorted(cands):
                cost = local(n, c)
                if cost < best_c:
                    best_s, best_c = c, cost
            if best_s != slot[n]:
                slot[n] = best_s
                improved = True
        if not improved:
            break
    return slot


def _index(graph: GateGraph):
    idx = {n: i for i, n in enumerate(graph.order)}
    return idx, len(idx), len(graph.edges)


def _constraints(graph: GateGraph, k: int):
    """Rows over [slots..., dffs...]: s_u - s_v <= -1 and s_v - s_u - k*d_e <= k."""
    idx, n, m = _index(graph)
    A = lil_matrix((2 * m, n + m))
    ub = np.empty(2 * m)
    for e, (u, v) in enumerate(graph.edges):
        A[2 * e, idx[u]] = 1
        A[2 * e, idx[v]] = -1
        ub[2 * e] = -1
        A[2 * e + 1, idx[v]] = 1
        A[2 * e + 1, idx[u]] = -1
        A[2 * e + 1, n + e] = -k
        ub[2 * e + 1] = k
    c = np.concatenate([np.zeros(n), np.ones(m)])
    horizon = k * (n + 1)
    lo = np.zeros(n + m)
    hi = np.concatenate([np.full(n, horizon), np.full(m, np.inf)])
    return idx, A.tocsr(), ub, c, lo, hi


def _lp_round(graph: GateGraph, k: int) -> dict[Node, int]:
    idx, A, ub, c, lo, hi = _constraints(graph, k)
    res = linprog(c, A_ub=A, b_ub=ub, bounds=list(zip(lo, hi)), method="highs-ds")
    if res.status != 0:
        raise InfeasibleK(f"LP relaxation failed: {res.message}")
    return _repair(graph, {n: res.x[i] for n, i in idx.items()})


def _exact(graph: GateGraph, k: int) -> dict[Node, int]:
    if len(graph) > EXACT_LIMIT:
        raise ValueError(f"exact_small handles at most {EXACT_LIMIT} gates, got {len(graph)}")
    idx, A, ub, c, lo, hi = _constraints(graph, k)
    res = milp(c, constraints=LinearConstraint(A, -np.inf, ub),
               integrality=np.ones_like(c), bounds=Bounds(lo, hi))
    if res.status != 0:
        raise InfeasibleK(f"integer search failed: {res.message}")
    return {n: int(round(res.x[i])) for n, i in idx.items()}


METHODS = ("lp_relax_round", "greedy_asap", "exact_small")


def assign_phases(graph: GateGraph, k: int, method: str = "lp_relax_round") -> PhaseAssignment:
    """Assign slots minimising the total balancing-DFF count for k phases.

    ``exact_small`` is an exact integer search (at most 20 gates). The two
    heuristics sweep k' = 1..k and keep the better of their own solution and
    the one carried over from k' - 1; a slot assignment never needs more DFFs
    with more phases, so the result is non-increasing in k.
    """
    if k < 1:
        raise InfeasibleK(f"k={k}: at least one clock phase is required")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if not graph.edges:
        return PhaseAssignment(k, {n: 0 for n in graph.nodes}, [])
    if method == "exact_small":
        return PhaseAssignment(k, _normalize(_exact(graph, k)), list(graph.edges))

    return _heuristic_sweep(graph, k, method)[-1]


def _heuristic_sweep(graph: GateGraph, kmax: int, method: str) -> list[PhaseAssignment]:
    asap, alap = asap_slots(graph), alap_slots(graph)
    carried: dict[Node, int] | None = None
    out = []
    for kk in range(1, kmax + 1):
        own = _lp_round(graph, kk) if method == "lp_relax_round" else dict(asap)
        cands = [own, asap, alap] + ([carried] if carried else [])
        cands = [_local_search(graph, s, kk) for s in cands]
        carried = min(cands, key=lambda s: _cost(graph, s, kk))
        out.append(PhaseAssignment(kk, _normalize(carried), list(graph.edges)))
    return out


@dataclass
class HoldReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_hold_safe(assignment: PhaseAssignment, graph: GateGraph | None = None) -> HoldReport:
    """Independent re-check of an assignment; an empty violation list means safe."""
    bad: list[str] = []
    k = assignment.k
    edges = graph.edges if graph is not None else assignment.edges
    if graph is not None:
        missing = set(graph.nodes) - set(assignment.slot)
        bad += [f"gate {n!r} has no slot" for n in sorted(missing, key=str)]
    dff = assignment.dff
    for u, v in edges:
        if u not in assignment.slot or v not in assignment.slot:
            continue
        gap = assignment.slot[v] - assignment.slot[u]
        if gap < 1:
            bad.append(f"{u!r}->{v!r}: consumer slot not later than producer ({gap})")
            continue
        if gap < k and assignment.slot[u] % k == assignment.slot[v] % k:
            bad.append(f"{u!r}->{v!r}: same phase within one period")
        want = (gap + k - 1) // k - 1
        if dff.get((u, v), want) != want:
            bad.append(f"{u!r}->{v!r}: {dff[(u, v)]} DFFs recorded, {want} needed")
    return HoldReport(bad)


def throughput_of(k: int, base_freq: float) -> float:
    """Effective clock rate with k phases sharing one period."""
    if k < 1:
        raise InfeasibleK("k must be >= 1")
    return base_freq / k


def dff_sweep(graph: GateGraph, ks: Iterable[int], method: str = "lp_relax_round") -> dict[int, dict]:
    """DFF totals per phase count and the saving relative to k = 1."""
    ks = sorted(set(ks))
    if method == "exact_small" or not graph.edges:
        totals = {k: assign_phases(graph, k, method).total_dff for k in set(ks) | {1}}
    else:
        sweep = _heuristic_sweep(graph, max(ks + [1]), method)
        totals = {a.k: a.total_dff for a in sweep}
    base = totals[1]
    return {k: {"total_dff": totals[k],
                "reduction": 0.0 if base == 0 else 1 - totals[k] / base} for k in ks}


def random_dag(n: int, max_fanin: int = 3, n_inputs: int | None = None,
               seed: int | None = None) -> GateGraph:
    """Random layered-free DAG: gate i draws 1..max_fanin producers among 0..i-1."""
    rng = np.random.default_rng(seed)
    n_inputs = n_inputs or max(1, n // 10)
    kinds = {i: ("input" if i < n_inputs else "logic") for i in range(n)}
    edges = []
    for v in range(n_inputs, n):
        fanin = int(rng.integers(1, max_fanin + 1))
        srcs = rng.choice(v, size=min(fanin, v), replace=False)
        edges += [(int(u), v) for u in sorted(srcs)]
    for v in range(n_inputs, n):
        if not any(u == v for u, _ in edges):
            kinds[v] = "output"
    return GateGraph(kinds, edges)
