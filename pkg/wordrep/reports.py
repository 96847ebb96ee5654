import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from django.utils import timezone

logger = logging.getLogger(__name__)

PASSED = "passed"
FAILED = "failed"
ERROR = "error"


@dataclass
class ReportItem:
    key: str
    title: str
    status: str
    detail: str = ""
    elapsed_ms: Optional[int] = None
    data: Dict[str, Any] = field(default_factory=dict)


@dataclass
class RunReport:
    """What a command did: one item per verdict or claim, plus counterexamples.

    A run passes when every item passed. Deterministic reports leave out
    timings and timestamps so that two runs compare byte for byte.
    """

    command: str
    deterministic: bool = False
    items: List[ReportItem] = field(default_factory=list)
    counterexamples: List[str] = field(default_factory=list)
    started_at: Any = field(default_factory=timezone.now)
    finished_at: Any = None

    def add(self, key: str, title: str, passed: bool, detail: str = "", **data) -> ReportItem:
        item = ReportItem(key, title, PASSED if passed else FAILED, detail, data=data)
        self.items.append(item)
        return item

    def finish(self):
        self.finished_at = timezone.now()
        logger.info(f"RunReport.command={self.command!r} status={self.status} items={len(self.items)}")

    @property
    def status(self) -> str:
        statuses = {item.status for item in self.items}
        if ERROR in statuses:
            return ERROR
        if FAILED in statuses:
            return FAILED
        return PASSED

    @property
    def passed(self) -> bool:
        return self.status == PASSED

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def as_dict(self) -> Dict[str, Any]:
        items = []
        for item in self.items:
            entry = {"key": item.key, "title": item.title, "status": item.status, "detail": item.detail}
            if item.data:
                entry["data"] = item.data
            if not self.deterministic and item.elapsed_ms is not None:
                entry["elapsed_ms"] = item.elapsed_ms
            items.append(entry)
        document = {
            "command": self.command,
            "status": self.status,
            "items": items,
            "counterexamples": self.counterexamples,
        }
        if not self.deterministic:
            document["started_at"] = self.started_at.isoformat()
            if self.finished_at is not None:
                document["finished_at"] = self.finished_at.isoformat()
        return document

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        width = max([len(item.key) for item in self.items] + [8])
        lines = [self.command]
        for item in self.items:
            line = f"  [{item.status}] {item.key:<{width}}  {item.title}"
            if not self.deterministic and item.elapsed_ms is not None:
                line += f" ({item.elapsed_ms} ms)"
            lines.append(line.rstrip())
            lines += [f"      {detail}" for detail in item.detail.splitlines()]
        for counterexample in self.counterexamples:
            lines.append(f"  counterexample: {counterexample}")
        counts = {status: sum(item.status == status for item in self.items) for status in (PASSED, FAILED, ERROR)}
        lines.append(f"{counts[PASSED]} passed, {counts[FAILED]} failed, {counts[ERROR]} errors")
        return "\n".join(lines) + "\n"
