"""Cost reports shared by the pipeline simulator and the large-scale model."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass
class CostReport:
    name: str
    cycles: int
    clock_period_ps: float
    clock_hz: float
    latency_ns: float
    throughput_per_s: float
    details: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self, **kw) -> str:
        kw.setdefault("indent", 2)
        kw.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(), **kw)

    def rows(self) -> list[tuple[str, Any]]:
        rows: list[tuple[str, Any]] = [
            ("name", self.name),
            ("cycles", self.cycles),
            ("clock_period_ps", self.clock_period_ps),
            ("clock_hz", self.clock_hz),
            ("latency_ns", self.latency_ns),
            ("throughput_per_s", self.throughput_per_s),
        ]
        for k in sorted(self.details):
            v = self.details[k]
            rows.append((k, json.dumps(v) if isinstance(v, (list, dict)) else v))
        for i, note in enumerate(self.notes):
            rows.append((f"note{i}", note))
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("key", "value"))
        w.writerows(self.rows())
        return buf.getvalue()

    def to_text(self) -> str:
        width = max(len(k) for k, _ in self.rows())
        return "\n".join(f"{k:<{width}}  {v}" for k, v in self.rows())


def format_rate(x: float, unit: str) -> str:
    """531250000 -> '531.25M <unit>'."""
    for scale, suffix in ((1e9, "G"), (1e6, "M"), (1e3, "k")):
        if x >= scale:
            return f"{x / scale:.2f}{suffix} {unit}"
    return f"{x:.2f} {unit}"
