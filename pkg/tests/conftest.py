import numpy as np
import pytest

from darkloc import derive_params, ghz_to_rad, make_disorder_spec


@pytest.fixture(scope="session")
def params():
    return derive_params()


@pytest.fixture()
def spec_w1(params):
    return make_disorder_spec(1.0, params, master_seed=42, n_realizations=50)


def omega_of(f_ghz):
    return float(ghz_to_rad(f_ghz))
