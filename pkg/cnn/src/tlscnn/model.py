"""The convolutional frequency regressor.

Three convolution blocks (16/32/64 channels, 3x3 kernels, 2x2 max-pooling),
a 128-unit dense layer, and a linear head with one output per defect.
Outputs are sorted ascending so predictions match the label convention
regardless of internal ordering.
"""

from __future__ import annotations

import torch
from torch import nn

CHECKPOINT_VERSION = 1


class FrequencyRegressor(nn.Module):
    def __init__(self, input_shape, n_labels):
        super().__init__()
        self.input_shape = tuple(input_shape)
        self.n_labels = n_labels
        self.features = nn.Sequential(
            nn.Conv2d(1, 16, 3, padding=1), nn.ReLU(), nn.MaxPool2d(2),
            nn.Conv2d(16, 32, 3, padding=1), nn.ReLU(), nn.MaxPool2d(2),
            nn.Conv2d(32, 64, 3, padding=1), nn.ReLU(), nn.MaxPool2d(2),
        )
        with torch.no_grad():
            probe = torch.zeros(1, 1, *input_shape)
            flat = self.features(probe).numel()
        self.head = nn.Sequential(
            nn.Flatten(),
            nn.Linear(flat, 128), nn.ReLU(),
            nn.Linear(128, n_labels),
        )

    def forward(self, x):
        raw = self.head(self.features(x))
        return torch.sort(raw, dim=1).values


def save_checkpoint(model: FrequencyRegressor, path, extra=None):
    payload = {
        "checkpoint_version": CHECKPOINT_VERSION,
        "input_shape": model.input_shape,
        "n_labels": model.n_labels,
        "state_dict": model.state_dict(),
        "normalization": "per-map min-max to [0, 1]",
        "label_units": "GHz, sorted ascending",
    }
    if extra:
        payload.update(extra)
    torch.save(payload, path)


def load_checkpoint(path) -> FrequencyRegressor:
    payload = torch.load(path, map_location="cpu", weights_only=False)
    if payload.get("checkpoint_version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version "
                         f"{payload.get('checkpoint_version')!r}")
    model = FrequencyRegressor(payload["input_shape"], payload["n_labels"])
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model
