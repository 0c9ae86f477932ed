"""Tests for wreathlab._telemetry."""

import logging

import pytest

import wreathlab._telemetry as tel_mod
from wreathlab._conjugacy import wreath_conjugacy
from wreathlab._exceptions import InputError
from wreathlab._telemetry import LogBackend, NoopBackend, Telemetry, TelemetryBackend, span, summarize, track
from wreathlab.models import OperationEvent


class RecordingBackend(TelemetryBackend):
  """Test backend that records sent batches."""

  def __init__(self):
    self.batches = []

  def send_batch(self, events):
    self.batches.append(list(events))


@pytest.fixture()
def enabled(monkeypatch):
  monkeypatch.setattr(tel_mod, "_ENABLED", True)
  t = Telemetry()
  t.set_backend(RecordingBackend())
  monkeypatch.setattr(Telemetry, "_instance", t)
  return t


def event(operation, duration_ms=1, error_type=None):
  return OperationEvent(operation=operation, at="2024-01-01T00:00:00+00:00", duration_ms=duration_ms, error_type=error_type)


class TestSummarize:
  def test_groups_by_operation(self):
    events = [event("clf_scan", 10), event("wreath_conjugacy", 2), event("clf_scan", 5, "InputError")]
    assert summarize(events) == {"clf_scan": (2, 1, 15), "wreath_conjugacy": (1, 0, 2)}

  def test_missing_duration_counts_as_zero(self):
    assert summarize([event("selftest", None)]) == {"selftest": (1, 0, 0)}


class TestTelemetryRecord:
  def test_record_enqueues_event_when_enabled(self, enabled):
    enabled.record("wreath_conjugacy", props={"group": "W:Z2~Z"}, duration_ms=3)
    (ev,) = enabled.events()
    assert ev.operation == "wreath_conjugacy"
    assert ev.props == {"group": "W:Z2~Z"}
    assert ev.duration_ms == 3
    assert not ev.failed

  def test_record_error(self, enabled):
    enabled.record("clf_scan", error=InputError("bad family"))
    (ev,) = enabled.events()
    assert ev.failed
    assert ev.error_type == "InputError"
    assert ev.error == "bad family"

  def test_record_does_not_enqueue_when_disabled(self):
    t = Telemetry()
    t.record("should.be.ignored")
    assert t.events() == []

  def test_disabled_telemetry_uses_noop_backend(self):
    assert isinstance(Telemetry()._backend, NoopBackend)


class TestTelemetryFlush:
  def test_flush_drains_queue(self, enabled):
    for i in range(5):
      enabled.record(f"event.{i}")
    assert enabled.flush() == 5
    assert enabled.events() == []
    assert len(enabled._backend.batches) == 1
    assert len(enabled._backend.batches[0]) == 5

  def test_flush_does_nothing_when_empty(self, enabled):
    assert enabled.flush() == 0
    assert enabled._backend.batches == []

  def test_log_backend_writes_summary(self, caplog):
    with caplog.at_level(logging.DEBUG, logger="wreathlab"):
      LogBackend().send_batch([event("clf_scan", 4), event("clf_scan", 6, "ResourceError")])
    assert "telemetry clf_scan: 2 call(s), 1 failed, 10ms" in caplog.text


class TestSpanAndTrack:
  def test_span_records_escaping_error(self, enabled):
    with pytest.raises(InputError):
      with span("cli.normalize", {"group": "Q"}):
        raise InputError("Unknown group spec")
    (ev,) = enabled.events()
    assert ev.operation == "cli.normalize"
    assert ev.error_type == "InputError"
    assert ev.props == {"group": "Q"}

  def test_sync_success(self, enabled):
    @track("square", lambda args, kwargs: {"x": args[0]})
    def square(x):
      return x * x

    assert square(3) == 9
    (ev,) = enabled.events()
    assert ev.operation == "square"
    assert ev.props["x"] == 3
    assert ev.duration_ms is not None

  async def test_async_success(self, enabled):
    @track("async_double")
    async def double(x):
      return 2 * x

    assert await double(4) == 8
    assert enabled.events()[0].operation == "async_double"

  def test_tracked_decision(self, enabled, lamplighter):
    u = lamplighter.element({(0,): 1}, (1,))
    assert wreath_conjugacy(u, u) is not None
    assert [ev.operation for ev in enabled.events()] == ["wreath_conjugacy"]
