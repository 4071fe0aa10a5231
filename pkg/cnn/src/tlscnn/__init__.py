"""Convolutional regression of defect frequencies from two-tone maps.

Consumes the simulator's documented map and manifest file formats, trains a
small convolutional network with early stopping, and reports accuracy
(100 - mean absolute percentage error) together with the more telling mean
absolute error in MHz.
"""

from .data import Splits, load_dataset, normalize, split_indices
from .mapio import MapReadError, read_manifest, read_map_values
from .model import FrequencyRegressor, load_checkpoint, save_checkpoint
from .training import (Hyperparams, TrainingReport, evaluate,
                       midband_baseline_mae_mhz, predict, save_model, train)

__version__ = "0.1.0"

__all__ = [
    "Splits", "load_dataset", "normalize", "split_indices",
    "MapReadError", "read_manifest", "read_map_values",
    "FrequencyRegressor", "load_checkpoint", "save_checkpoint",
    "Hyperparams", "TrainingReport", "evaluate", "midband_baseline_mae_mhz",
    "predict", "save_model", "train",
]
