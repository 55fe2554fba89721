import hypothesis
import pytest

import duffing_optomech as dm

hypothesis.settings.register_profile(
    "ci", derandomize=True, max_examples=60, deadline=None
)
hypothesis.settings.load_profile("ci")


@pytest.fixture(scope="session")
def base_params() -> dm.SystemParams:
    return dm.default_params()


@pytest.fixture(scope="session")
def base_reduced(base_params) -> dm.ReducedParams:
    return dm.reduce_params(base_params)


@pytest.fixture(scope="session")
def transfer_reduced(base_params) -> dm.ReducedParams:
    """Operating point of the transfer experiments: weak atom coupling."""
    w1 = base_params.omega_m[0]
    return dm.reduce_params(base_params.replace(eta_e=0.005 * w1))
