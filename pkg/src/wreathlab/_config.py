import os
from contextlib import contextmanager
from contextvars import ContextVar
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Iterator

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ._exceptions import InputError

try:
  VERSION = version("wreathlab")
except PackageNotFoundError:
  VERSION = "0.0.0"


def _env_int(name: str, default: int) -> int:
  raw = os.getenv(name)
  if raw is None or not raw.strip():
    return default
  try:
    return int(raw)
  except ValueError:
    raise InputError(f"{name} must be an integer, got {raw!r}") from None


class Limits(BaseModel):
  """Search caps shared by every exhaustive procedure.

  A search that would exceed one of these raises ResourceError naming the cap; nothing is truncated silently.
  """

  model_config = ConfigDict(frozen=True)

  bfs_radius_cap: int = Field(default=12, ge=0, description="Largest radius any BFS ball may be grown to.")
  ball_size_cap: int = Field(default=250_000, ge=1, description="Largest number of elements a cached ball may hold.")
  path_cap: int = Field(default=12, ge=0, description="Largest support handled by the exact visiting-path solver.")
  lift_radius_cap: int = Field(default=10, ge=0, description="Largest radius of the free solvable lift search.")
  power_scan_cap: int = Field(default=100_000, ge=1, description="Largest exponent tried when measuring distortion.")

  @classmethod
  def from_env(cls) -> "Limits":
    """Build limits from WREATHLAB_* environment variables."""
    try:
      return cls(
        bfs_radius_cap=_env_int("WREATHLAB_BFS_RADIUS_CAP", 12),
        ball_size_cap=_env_int("WREATHLAB_BALL_SIZE_CAP", 250_000),
        path_cap=_env_int("WREATHLAB_PATH_CAP", 12),
        lift_radius_cap=_env_int("WREATHLAB_LIFT_RADIUS_CAP", 10),
        power_scan_cap=_env_int("WREATHLAB_POWER_SCAN_CAP", 100_000),
      )
    except ValidationError as e:
      raise InputError(f"Invalid WREATHLAB_* limits: {e}") from None


_LIMITS: ContextVar[Limits | None] = ContextVar("wreathlab_limits", default=None)


def current_limits() -> Limits:
  """Return the limits active in the current context."""
  limits = _LIMITS.get()
  if limits is None:
    limits = Limits.from_env()
    _LIMITS.set(limits)
  return limits


@contextmanager
def use_limits(limits: Limits | None = None, **overrides: Any) -> Iterator[Limits]:
  """Temporarily replace the active limits, optionally overriding single fields."""
  base = limits or current_limits()
  active = base.model_copy(update={k: v for k, v in overrides.items() if v is not None})
  token = _LIMITS.set(active)
  try:
    yield active
  finally:
    _LIMITS.reset(token)
