"""Shared fixtures: JSON payload writers for the CLI tests and a seeded rng."""

import json

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def write_matrix(tmp_path):
    """Write a complex matrix to the {"n", "re", "im"} JSON file format."""

    counter = {"k": 0}

    def _write(matrix):
        m = np.asarray(matrix, dtype=complex)
        counter["k"] += 1
        path = tmp_path / f"matrix_{counter['k']}.json"
        payload = {
            "n": m.shape[0],
            "re": m.real.tolist(),
            "im": m.imag.tolist(),
        }
        path.write_text(json.dumps(payload))
        return str(path)

    return _write


@pytest.fixture
def write_state(tmp_path):
    """Write a spectral state to the {"energies", "weights"} JSON file format."""

    counter = {"k": 0}

    def _write(energies, weights):
        counter["k"] += 1
        path = tmp_path / f"state_{counter['k']}.json"
        payload = {"energies": list(energies), "weights": list(weights)}
        path.write_text(json.dumps(payload))
        return str(path)

    return _write
