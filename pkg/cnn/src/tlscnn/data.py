"""Dataset loading and the train/test/validation split."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .mapio import read_manifest, read_map_values


@dataclass
class Splits:
    """Tensors for each split; maps normalized to [0, 1], labels in GHz."""

    train_x: torch.Tensor
    train_y: torch.Tensor
    test_x: torch.Tensor
    test_y: torch.Tensor
    val_x: torch.Tensor
    val_y: torch.Tensor

    @property
    def n_labels(self) -> int:
        return self.train_y.shape[1]


def normalize(values: np.ndarray) -> np.ndarray:
    """Per-map min-max normalization to [0, 1]; a constant map becomes 0."""
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


def split_indices(count, seed):
    """Deterministic shuffled 80/10/10 split of range(count)."""
    order = np.random.default_rng(seed).permutation(count)
    n_train = int(count * 0.8)
    n_test = int(count * 0.1)
    return (order[:n_train], order[n_train:n_train + n_test],
            order[n_train + n_test:])


def load_dataset(manifest_path, seed=0) -> Splits:
    """Read every map in the manifest and split 80/10/10.

    All maps must share one shape and one label length; labels are the
    ground-truth defect frequencies, sorted ascending, in GHz.
    """
    records = read_manifest(manifest_path)
    maps, labels = [], []
    shape = None
    for record in records:
        values, _ = read_map_values(record["path"])
        if shape is None:
            shape = values.shape
        elif values.shape != shape:
            raise ValueError(f"{record['path']}: map shape {values.shape} "
                             f"differs from {shape}")
        maps.append(normalize(values))
        labels.append(np.sort(np.asarray(record["omega_k"], dtype=np.float64)) / 1e9)
    label_len = len(labels[0])
    if any(len(lab) != label_len for lab in labels):
        raise ValueError("inconsistent label lengths across the manifest")

    x = torch.from_numpy(np.stack(maps)[:, None, :, :])
    y = torch.from_numpy(np.stack(labels).astype(np.float32))
    train, test, val = split_indices(len(records), seed)
    return Splits(x[train], y[train], x[test], y[test], x[val], y[val])
