"""Tensor files, manifests, deterministic splits, and CSV reports."""

from shiftscope.io.manifest import (
    GroupedDataset,
    ManifestEntry,
    load_manifest,
    read_manifest,
    save_dataset,
    write_manifest,
)
from shiftscope.io.reports import (
    DISTANCE_HEADER,
    EVALUATION_HEADER,
    PREDICTION_HEADER,
    parse_csv,
    render_csv,
)
from shiftscope.io.splits import SplitSpec, make_splits
from shiftscope.io.tensor import TensorFile, read_tensor, write_tensor

__all__ = [
    "DISTANCE_HEADER",
    "EVALUATION_HEADER",
    "GroupedDataset",
    "ManifestEntry",
    "PREDICTION_HEADER",
    "SplitSpec",
    "TensorFile",
    "load_manifest",
    "make_splits",
    "parse_csv",
    "read_manifest",
    "read_tensor",
    "render_csv",
    "save_dataset",
    "write_manifest",
    "write_tensor",
]
