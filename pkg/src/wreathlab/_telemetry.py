"""In-process operation telemetry.

Tracked operations (conjugacy decisions, conjugator searches, scans, selftest suites and CLI verbs) are timed
and queued as `OperationEvent`s. A flush hands the queue to a backend; the default one writes a per-operation
summary to the `wreathlab` logger at DEBUG. Nothing leaves the process.

Disable with WREATHLAB_TELEMETRY=off.
"""

from __future__ import annotations

import asyncio
import functools
import os
import threading
import time as _time
from abc import ABC, abstractmethod
from collections import deque
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Callable, Iterator, Sequence

from ._utils import logger
from .models import OperationEvent

_ENABLED = os.getenv("WREATHLAB_TELEMETRY", "").lower() != "off"

_MAX_QUEUE_SIZE = 500

PropsFn = Callable[[tuple[Any, ...], dict[str, Any]], "dict[str, Any] | None"]


def summarize(events: Sequence[OperationEvent]) -> dict[str, tuple[int, int, int]]:
  """Per operation: (calls, failures, total milliseconds), in first-seen order."""
  out: dict[str, tuple[int, int, int]] = {}
  for ev in events:
    calls, failures, total = out.get(ev.operation, (0, 0, 0))
    out[ev.operation] = (calls + 1, failures + ev.failed, total + (ev.duration_ms or 0))
  return out


class TelemetryBackend(ABC):
  @abstractmethod
  def send_batch(self, events: Sequence[OperationEvent]) -> None: ...


class LogBackend(TelemetryBackend):
  def send_batch(self, events: Sequence[OperationEvent]) -> None:
    for operation, (calls, failures, total) in summarize(events).items():
      logger.debug(f"telemetry {operation}: {calls} call(s), {failures} failed, {total}ms")


class NoopBackend(TelemetryBackend):
  def send_batch(self, events: Sequence[OperationEvent]) -> None:
    pass


class Telemetry:
  """Process-wide event queue. Use `Telemetry.get()`."""

  _instance: Telemetry | None = None
  _lock = threading.Lock()

  def __init__(self) -> None:
    self._backend: TelemetryBackend = LogBackend() if _ENABLED else NoopBackend()
    self._queue: deque[OperationEvent] = deque(maxlen=_MAX_QUEUE_SIZE)
    self._queue_lock = threading.Lock()

  @classmethod
  def get(cls) -> Telemetry:
    if cls._instance is None:
      with cls._lock:
        if cls._instance is None:
          cls._instance = cls()
    return cls._instance

  def set_backend(self, backend: TelemetryBackend) -> None:
    self._backend = backend

  def record(
    self,
    operation: str,
    props: dict[str, Any] | None = None,
    duration_ms: int | None = None,
    error: BaseException | None = None,
  ) -> None:
    if not _ENABLED:
      return
    event = OperationEvent(
      operation=operation,
      at=datetime.now(timezone.utc).isoformat(),
      duration_ms=duration_ms,
      error_type=type(error).__name__ if error is not None else None,
      error=str(error) if error is not None else None,
      props=props or {},
    )
    with self._queue_lock:
      self._queue.append(event)

  def events(self) -> list[OperationEvent]:
    with self._queue_lock:
      return list(self._queue)

  def flush(self) -> int:
    """Hand every queued event to the backend and return how many were sent."""
    with self._queue_lock:
      batch = list(self._queue)
      self._queue.clear()
    if batch:
      self._backend.send_batch(batch)
    return len(batch)


@contextmanager
def span(operation: str, props: dict[str, Any] | None = None) -> Iterator[None]:
  """Time the enclosed block and record it, including the exception if one escapes."""
  start = _time.monotonic()
  try:
    yield
  except Exception as e:
    Telemetry.get().record(operation, props, int((_time.monotonic() - start) * 1000), error=e)
    raise
  Telemetry.get().record(operation, props, int((_time.monotonic() - start) * 1000))


def track(operation: str, props_fn: PropsFn | None = None):
  """Decorator recording each call of a sync or async function as an `OperationEvent`."""

  def decorator(fn: Callable[..., Any]) -> Callable[..., Any]:
    if asyncio.iscoroutinefunction(fn):

      @functools.wraps(fn)
      async def async_wrapper(*args: Any, **kwargs: Any) -> Any:
        with span(operation, props_fn(args, kwargs) if props_fn else None):
          return await fn(*args, **kwargs)

      return async_wrapper

    @functools.wraps(fn)
    def sync_wrapper(*args: Any, **kwargs: Any) -> Any:
      with span(operation, props_fn(args, kwargs) if props_fn else None):
        return fn(*args, **kwargs)

    return sync_wrapper

  return decorator
