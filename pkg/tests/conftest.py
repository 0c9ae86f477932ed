"""Shared fixtures for wreathlab tests."""

import random

import pytest
from hypothesis import HealthCheck, settings

from wreathlab import FreeAbelian, FreeSolvable, WreathProduct, parse_group

settings.register_profile("wreathlab", suppress_health_check=[HealthCheck.function_scoped_fixture], deadline=None)
settings.load_profile("wreathlab")


@pytest.fixture(autouse=True)
def _disable_telemetry(monkeypatch):
  """Disable telemetry globally for all tests."""
  import wreathlab._telemetry as tel_mod

  monkeypatch.setenv("WREATHLAB_TELEMETRY", "off")
  monkeypatch.setattr(tel_mod, "_ENABLED", False)


@pytest.fixture()
def rng():
  """A seeded Mersenne Twister."""
  return random.Random(20240607)


@pytest.fixture()
def lamplighter() -> WreathProduct:
  """Z2 wr Z."""
  return parse_group("W:Z2~Z")


@pytest.fixture()
def z2() -> FreeAbelian:
  return parse_group("Z^2")


@pytest.fixture()
def lamplighter_z2() -> WreathProduct:
  """Z2 wr Z^2."""
  return parse_group("W:Z2~Z^2")


@pytest.fixture()
def metabelian() -> FreeSolvable:
  """S_{2,2}, the free metabelian group of rank 2."""
  return FreeSolvable.get(2, 2)
