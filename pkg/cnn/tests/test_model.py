import numpy as np
import pytest
import torch

from tlscnn import FrequencyRegressor, load_checkpoint, save_checkpoint


class TestModel:
    def test_forward_shape(self):
        model = FrequencyRegressor((24, 24), 2)
        out = model(torch.zeros(5, 1, 24, 24))
        assert out.shape == (5, 2)

    def test_outputs_always_ascending(self):
        torch.manual_seed(1)
        model = FrequencyRegressor((24, 24), 3)
        out = model(torch.randn(16, 1, 24, 24))
        assert bool((out[:, :-1] <= out[:, 1:]).all())

    def test_rectangular_input(self):
        model = FrequencyRegressor((40, 24), 2)
        assert model(torch.zeros(2, 1, 40, 24)).shape == (2, 2)

    def test_checkpoint_roundtrip(self, tmp_path):
        torch.manual_seed(2)
        model = FrequencyRegressor((24, 24), 2)
        x = torch.randn(4, 1, 24, 24)
        with torch.no_grad():
            before = model(x)
        path = tmp_path / "model.pt"
        save_checkpoint(model, path, extra={"note": "test"})
        loaded = load_checkpoint(path)
        with torch.no_grad():
            after = loaded(x)
        assert np.array_equal(before.numpy(), after.numpy())

    def test_checkpoint_version_guard(self, tmp_path):
        model = FrequencyRegressor((24, 24), 2)
        path = tmp_path / "model.pt"
        save_checkpoint(model, path)
        payload = torch.load(path, weights_only=False)
        payload["checkpoint_version"] = 99
        torch.save(payload, path)
        with pytest.raises(ValueError, match="version"):
            load_checkpoint(path)
