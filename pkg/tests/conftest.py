import pytest

from ftqc import tensors


@pytest.fixture
def small_data():
    return tensors.random_instance(3, seed=7)


@pytest.fixture
def fcidump_file(tmp_path, small_data):
    path = tmp_path / "FCIDUMP"
    tensors.write_fcidump(small_data, path, nelec=6, ms2=0)
    return path
