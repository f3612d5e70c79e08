"""Dataset manifests: JSON index of tensor files plus grouping metadata.

Schema (UTF-8 JSON)::

    {
      "version": 1,
      "datasets": [
        {
          "name": "base",
          "group": "base",
          "class_ids": [0, 1, 2],
          "prob_class_ids": [0, 1, 2],          optional, default class_ids
          "probabilities_path": "base.probs.dsg",
          "features_path": "base.features.dsg", optional
          "labels_path": "base.labels.dsg",     optional
          "rotated_features_paths": [4 paths]   optional
        }
      ]
    }

Relative paths resolve against the manifest's directory.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from shiftscope.data import Dataset, LabelSpace
from shiftscope.exceptions import DataError, LabelSpaceError, ManifestError
from shiftscope.io.tensor import read_tensor, write_tensor

logger = logging.getLogger(__name__)

MANIFEST_VERSION = 1


@dataclass(frozen=True, slots=True)
class ManifestEntry:
    name: str
    group: str
    class_ids: tuple[int, ...]
    probabilities_path: str
    prob_class_ids: tuple[int, ...] | None = None
    features_path: str | None = None
    labels_path: str | None = None
    rotated_features_paths: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ManifestError("manifest entry name is required")
        if list(self.class_ids) != sorted(set(self.class_ids)):
            raise ManifestError(f"class_ids of {self.name} must be sorted and unique")
        if self.rotated_features_paths is not None and len(self.rotated_features_paths) != 4:
            raise ManifestError(f"{self.name}: rotated_features_paths needs 4 entries")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ManifestEntry:
        if not isinstance(data, dict):
            raise ManifestError("manifest entries must be JSON objects")
        try:
            rotated = data.get("rotated_features_paths")
            if rotated is not None and (
                not isinstance(rotated, list) or not all(isinstance(item, str) for item in rotated)
            ):
                raise TypeError("rotated_features_paths must be a list of strings")
            prob_ids = data.get("prob_class_ids")
            return cls(
                name=str(data["name"]),
                group=str(data.get("group", "")),
                class_ids=tuple(int(item) for item in data["class_ids"]),
                probabilities_path=_checked_path("probabilities_path", data["probabilities_path"]),
                prob_class_ids=None if prob_ids is None else tuple(int(i) for i in prob_ids),
                features_path=_optional_path(data, "features_path"),
                labels_path=_optional_path(data, "labels_path"),
                rotated_features_paths=None if rotated is None else tuple(rotated),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"malformed manifest entry: {exc}") from exc

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "name": self.name,
            "group": self.group,
            "class_ids": list(self.class_ids),
            "probabilities_path": self.probabilities_path,
        }
        if self.prob_class_ids is not None:
            data["prob_class_ids"] = list(self.prob_class_ids)
        if self.features_path is not None:
            data["features_path"] = self.features_path
        if self.labels_path is not None:
            data["labels_path"] = self.labels_path
        if self.rotated_features_paths is not None:
            data["rotated_features_paths"] = list(self.rotated_features_paths)
        return data


def _checked_path(key: str, value: Any) -> str:
    if not isinstance(value, str) or not value:
        raise TypeError(f"{key} must be a non-empty string, got {value!r}")
    return value


def _optional_path(data: dict[str, Any], key: str) -> str | None:
    value = data.get(key)
    return None if value is None else _checked_path(key, value)


@dataclass(frozen=True, slots=True)
class GroupedDataset:
    dataset: Dataset
    group: str

    @property
    def name(self) -> str:
        return self.dataset.name


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("datasets"), list):
        raise ManifestError("manifest must be an object with a 'datasets' list")
    if data.get("version", MANIFEST_VERSION) != MANIFEST_VERSION:
        raise ManifestError(f"unsupported manifest version: {data.get('version')}")
    entries = [ManifestEntry.from_dict(item) for item in data["datasets"]]
    names = [entry.name for entry in entries]
    if len(names) != len(set(names)):
        raise ManifestError("manifest dataset names must be unique")
    return entries


def load_manifest(path: str | Path) -> list[GroupedDataset]:
    """Load and validate every dataset a manifest references."""
    root = Path(path).parent
    loaded = [
        GroupedDataset(_load_entry(root, entry), entry.group)
        for entry in read_manifest(path)
    ]
    logger.info("loaded %d datasets from %s", len(loaded), path)
    return loaded


def write_manifest(path: str | Path, entries: list[ManifestEntry]) -> None:
    document = {
        "version": MANIFEST_VERSION,
        "datasets": [entry.to_dict() for entry in entries],
    }
    Path(path).write_text(
        json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def save_dataset(directory: str | Path, dataset: Dataset, group: str) -> ManifestEntry:
    """Write a dataset's tensors next to a manifest and return its entry."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    stem = dataset.name

    probabilities_path = f"{stem}.probabilities.dsg"
    write_tensor(root / probabilities_path, dataset.probabilities)
    features_path = labels_path = None
    rotated_paths = None
    if dataset.features is not None:
        features_path = f"{stem}.features.dsg"
        write_tensor(root / features_path, dataset.features)
    if dataset.labels is not None:
        labels_path = f"{stem}.labels.dsg"
        write_tensor(root / labels_path, dataset.labels)
    if dataset.rotated_features is not None:
        rotated_paths = tuple(f"{stem}.rot{k * 90}.dsg" for k in range(4))
        for name, matrix in zip(rotated_paths, dataset.rotated_features):
            write_tensor(root / name, matrix)

    assert dataset.label_space is not None
    prob_ids = None
    if dataset.prob_classes != dataset.label_space:
        prob_ids = dataset.prob_classes.ids
    return ManifestEntry(
        name=dataset.name,
        group=group,
        class_ids=dataset.label_space.ids,
        probabilities_path=probabilities_path,
        prob_class_ids=prob_ids,
        features_path=features_path,
        labels_path=labels_path,
        rotated_features_paths=rotated_paths,
    )


def _load_entry(root: Path, entry: ManifestEntry) -> Dataset:
    def tensor(relative: str) -> Any:
        location = root / relative
        if not location.is_file():
            raise ManifestError(
                f"{entry.name}: tensor file not found: {relative}",
                details={"path": str(location)},
            )
        return read_tensor(location)

    probabilities = tensor(entry.probabilities_path)
    features = tensor(entry.features_path) if entry.features_path else None
    labels = tensor(entry.labels_path) if entry.labels_path else None
    rotated = None
    if entry.rotated_features_paths:
        rotated = tuple(tensor(item) for item in entry.rotated_features_paths)

    n = probabilities.shape[0]
    for kind, array in (("labels", labels), ("features", features)):
        if array is not None and array.shape[0] != n:
            raise ManifestError(
                f"{entry.name}: row-count mismatch between {kind} and probabilities",
                details={kind: int(array.shape[0]), "probabilities": int(n)},
            )
    if labels is not None and labels.dtype.kind != "i":
        raise ManifestError(f"{entry.name}: labels must be an int64 tensor")

    class_ids = LabelSpace(entry.class_ids)
    prob_ids = LabelSpace(entry.prob_class_ids) if entry.prob_class_ids else class_ids
    try:
        return Dataset(
            name=entry.name,
            probabilities=probabilities,
            prob_classes=prob_ids,
            labels=labels,
            features=features,
            label_space=class_ids,
            rotated_features=rotated,
        )
    except (DataError, LabelSpaceError) as exc:
        raise ManifestError(exc.message, details=exc.details) from exc
