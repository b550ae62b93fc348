from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional

from fp2_cube_builder._utils import canonical_json
from fp2_cube_builder.errors import InputError

LOGGER = logging.getLogger(__name__)

PASS: str = "pass"
FAIL: str = "fail"
INFO: str = "info"

COMPUTED: str = "computed"
RECORDED: str = "recorded"

LAB_BANNER: str = (
    "LAB MODE: generator sizes below the size bound; results exercise the "
    "construction but certify no finiteness property"
)


@dataclass(frozen=True)
class Assumption:
    key: str
    value: str
    provenance: str = RECORDED
    note: str = ""

    def describe(self) -> str:
        text = f"{self.key} = {self.value} ({self.provenance}"
        return text + (f": {self.note})" if self.note else ")")

    def to_data(self) -> dict[str, Any]:
        return {
            "key": self.key,
            "value": self.value,
            "provenance": self.provenance,
            "note": self.note,
        }


def parse_assumption(text: str) -> Assumption:
    """KEY=VALUE from the command line."""
    key, sep, value = text.partition("=")
    if not sep or not key.strip() or not value.strip():
        raise InputError(f"Assumption must look like KEY=VALUE, got {text!r}")
    return Assumption(key.strip(), value.strip())


@dataclass
class Stage:
    name: str
    verdict: str
    data: dict[str, Any] = field(default_factory=dict)
    citations: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.data and not self.citations:
            raise ValueError(f"Stage {self.name} has neither data nor citations")

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL

    def to_data(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "data": self.data,
            "citations": self.citations,
        }


@dataclass
class Report:
    stages: list[Stage] = field(default_factory=list)
    assumptions: list[Assumption] = field(default_factory=list)
    banner: Optional[str] = None
    config: dict[str, Any] = field(default_factory=dict)

    def add(
        self,
        name: str,
        passed: Optional[bool],
        data: dict[str, Any],
        citations: Iterable[str] = (),
    ) -> Stage:
        cited = list(citations)
        ran = {stage.name for stage in self.stages}
        recorded = {a.key for a in self.assumptions}
        unknown = [c for c in cited if c not in ran and c not in recorded]
        if unknown:
            raise ValueError(f"Stage {name} cites {unknown}, which neither ran nor is recorded")
        verdict = INFO if passed is None else PASS if passed else FAIL
        stage = Stage(name, verdict, data, cited)
        self.stages.append(stage)
        LOGGER.info("Stage %s: %s", name, verdict)
        return stage

    @property
    def ok(self) -> bool:
        return all(stage.ok for stage in self.stages)

    @property
    def failed_stage(self) -> Optional[str]:
        return next((s.name for s in self.stages if not s.ok), None)

    def to_data(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "ok": self.ok,
            "stages": [stage.to_data() for stage in self.stages],
            "assumptions": [a.to_data() for a in self.assumptions],
        }
        if self.banner:
            data["banner"] = self.banner
        if self.config:
            data["config"] = self.config
        return data

    def dumps(self) -> str:
        return canonical_json(self.to_data())


def write_artifacts(out_dir: Path, artifacts: dict[str, str]) -> Path:
    """
    Write text artifacts under out_dir and index them in manifest.json with
    their sha256 digests.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    index: dict[str, str] = {}
    for name, text in sorted(artifacts.items()):
        target = out_dir / name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        index[name] = hashlib.sha256(text.encode("utf-8")).hexdigest()
    manifest = out_dir / "manifest.json"
    manifest.write_text(canonical_json({"artifacts": index}), encoding="utf-8")
    LOGGER.info("Wrote %d artifacts to %s", len(index), out_dir)
    return manifest
