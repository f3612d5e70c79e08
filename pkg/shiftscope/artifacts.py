"""Output directories for demo runs and CLI reports.

Names are POSIX-style paths relative to the store root. The index written by
``write_index`` lists them in write order without absolute paths, so two runs
with the same seed produce identical listings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any

from shiftscope.exceptions import ConfigError

INDEX_FILE = "artifacts.json"


class ArtifactKind(StrEnum):
    MANIFEST = "manifest"
    DISTANCES = "distances"
    PREDICTIONS = "predictions"
    EVALUATION = "evaluation"
    PREDICTORS = "predictors"
    TABLE = "table"
    INDEX = "index"


@dataclass(frozen=True, slots=True)
class Artifact:
    name: str
    path: Path
    kind: ArtifactKind
    metadata: dict[str, Any] = field(default_factory=dict)


class ArtifactStore:
    """Output directory that remembers every file written through it."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self._artifacts: list[Artifact] = []

    @classmethod
    def open(cls, root: str | Path) -> ArtifactStore:
        """Create ``root`` if needed and check that files can be written there.

        Raises:
            ConfigError: The directory cannot be created or written.
        """
        root = Path(root)
        try:
            root.mkdir(parents=True, exist_ok=True)
            check = root / ".write-check"
            check.write_bytes(b"")
            check.unlink()
        except OSError as exc:
            raise ConfigError(
                f"output directory is not writable: {exc}", details={"path": str(root)}
            ) from exc
        return cls(root)

    @property
    def artifacts(self) -> tuple[Artifact, ...]:
        return tuple(self._artifacts)

    def path_for(self, name: str) -> Path:
        relative = Path(name)
        if relative.is_absolute() or ".." in relative.parts:
            raise ConfigError(f"artifact name must be relative and safe: {name}")
        return self.root / relative

    def register(
        self,
        name: str,
        *,
        kind: ArtifactKind | str,
        metadata: dict[str, Any] | None = None,
    ) -> Artifact:
        """Record a file some other writer puts at ``path_for(name)``."""
        artifact = Artifact(
            name=name,
            path=self.path_for(name),
            kind=ArtifactKind(kind),
            metadata=dict(metadata or {}),
        )
        self._artifacts.append(artifact)
        return artifact

    def write_text(
        self,
        name: str,
        content: str,
        *,
        kind: ArtifactKind | str,
        metadata: dict[str, Any] | None = None,
    ) -> Artifact:
        artifact = self.register(name, kind=kind, metadata=metadata)
        artifact.path.parent.mkdir(parents=True, exist_ok=True)
        artifact.path.write_text(content, encoding="utf-8")
        return artifact

    def index(self) -> list[dict[str, Any]]:
        return [
            {"name": artifact.name, "kind": artifact.kind.value, "metadata": dict(artifact.metadata)}
            for artifact in self._artifacts
        ]

    def write_index(self, name: str = INDEX_FILE) -> Artifact:
        """Write the listing of every artifact recorded so far, excluding itself."""
        listing = json.dumps(self.index(), indent=2, sort_keys=True) + "\n"
        return self.write_text(name, listing, kind=ArtifactKind.INDEX)
