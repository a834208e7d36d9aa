import pytest
from hypothesis import settings

from pdmosc.ordering import derived_means, named_scheme
from pdmosc.oscillator import OscillatorParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def ml():
    return derived_means(named_scheme("mathews-lakshmanan"))


@pytest.fixture
def bdd():
    return derived_means(named_scheme("ben-daniel-duke"))


@pytest.fixture
def carinena():
    return derived_means(named_scheme("carinena"))


@pytest.fixture
def unit():
    return OscillatorParams(k=1.0, lam=1.0, hbar=1.0)


@pytest.fixture
def neg47():
    return OscillatorParams(k=22.09, lam=-1.0, hbar=1.0)


@pytest.fixture
def neg5():
    return OscillatorParams(k=25.0, lam=-1.0, hbar=1.0)
