"""Tests for wreathlab.models."""

import pytest
from pydantic import ValidationError

from wreathlab.models import (
  CSV_COLUMNS,
  BoundParameters,
  ConjugacyVerdict,
  ScanConfig,
  ScanRecord,
  WreathElementModel,
)


class TestWreathElementModel:
  def test_parse(self):
    model = WreathElementModel.model_validate_json('{"base":"1","lamps":[{"at":"0","val":"1"}]}')
    assert model.base == "1"
    assert model.lamps[0].at == "0"

  def test_lamps_default_empty(self):
    assert WreathElementModel(base="0").lamps == []

  def test_rejects_unknown_keys(self):
    with pytest.raises(ValidationError):
      WreathElementModel.model_validate({"base": "0", "cursor": "1"})


class TestBoundParameters:
  def test_radius_defaults_to_conservative_max(self):
    assert BoundParameters(n=3).radius() == 6
    assert BoundParameters(n=3, clf_b=10).radius() == 13

  def test_explicit_radius_wins(self):
    assert BoundParameters(n=3, p=4).radius() == 4

  def test_rejects_negative_n(self):
    with pytest.raises(ValidationError):
      BoundParameters(n=-1)


class TestScanConfig:
  def test_defaults(self):
    config = ScanConfig()
    assert config.group == "W:Z2~Z"
    assert config.family == "random"
    assert config.workers == 4

  def test_rejects_inverted_range(self):
    with pytest.raises(ValidationError):
      ScanConfig(n_min=3, n_max=1)

  def test_rejects_unknown_family(self):
    with pytest.raises(ValidationError):
      ScanConfig(family="spiral")

  def test_seed_is_64_bit(self):
    ScanConfig(seed=2**64 - 1)
    with pytest.raises(ValidationError):
      ScanConfig(seed=2**64)


class TestScanRecord:
  def test_csv_row_matches_columns(self):
    record = ScanRecord(
      family="random",
      instance_id="random-0000",
      n=4,
      u_len=2,
      v_len=2,
      min_conj_len=1,
      cap=6,
      bounds={"infinite_order": 216, "wreath": 216},
    )
    row = record.csv_row()
    assert len(row) == len(CSV_COLUMNS)
    assert row == ["random", "random-0000", "4", "2", "2", "1", "216", "", "216", "", "", "0"]

  def test_min_conj_cell_above_cap(self):
    record = ScanRecord(family="random", instance_id="random-0001", cap=6)
    assert record.min_conj_cell() == ">=7"

  def test_min_conj_cell_on_error(self):
    record = ScanRecord(family="random", instance_id="random-0002", cap=6, error="ResourceError: cap")
    assert record.min_conj_cell() == ""


class TestConjugacyVerdict:
  def test_inconclusive(self):
    verdict = ConjugacyVerdict(conjugate="inconclusive", detail="bfs_radius_cap")
    assert verdict.model_dump(exclude_none=True) == {"conjugate": "inconclusive", "detail": "bfs_radius_cap"}
