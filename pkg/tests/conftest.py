import pathlib

import pytest

DATA = pathlib.Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def bundled_wdi():
    from importlib.resources import files

    return str(files("paneldag").joinpath("data/mini_wdi.csv"))


@pytest.fixture(scope="session")
def bundled_emissions():
    from importlib.resources import files

    return str(files("paneldag").joinpath("data/emissions.csv"))
