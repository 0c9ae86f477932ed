"""Tests for wreathlab._magnus."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wreathlab._exceptions import InputError
from wreathlab._magnus import (
  FreeSolvable,
  MagnusImage,
  divergence,
  magnus_algebraic,
  magnus_geometric,
  normal_form_json,
  solvable_cyclic_distortion_bound,
  solvable_normal_form,
)
from wreathlab._words import commutator, parse_word, reduce

words2 = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=10).map(lambda raw: reduce(2, raw))


def second_derived(rank=2):
  """[c, X1 c x1] with c = [x1, x2], a word of F^(2)."""
  c = parse_word("x1 x2 X1 X2", rank)
  return commutator(c, parse_word("X1", rank) * c * parse_word("x1", rank))


class TestFreeSolvable:
  def test_rejects_bad_parameters(self):
    with pytest.raises(InputError, match="Rank"):
      FreeSolvable(0, 2)
    with pytest.raises(InputError, match="Derived length"):
      FreeSolvable(2, 0)

  def test_get_is_shared(self):
    assert FreeSolvable.get(2, 2) is FreeSolvable.get(2, 2)
    assert FreeSolvable.get(2, 2).descriptor == "S:2,2"

  def test_abelian_stage(self):
    S = FreeSolvable.get(2, 1)
    a = S.parse("x1 x2 X1")
    assert a.nf == (0, 1)
    assert S.word_length(a) == 1
    assert S.quotient(a) == ()
    with pytest.raises(InputError, match="no lower stage"):
      S.lower()

  def test_commutator_survives_in_metabelian(self, metabelian):
    c = metabelian.parse("x1 x2 X1 X2")
    assert not c.is_identity()
    assert metabelian.quotient(c).is_identity()
    assert metabelian.word_length(c) == 4

  def test_second_derived_subgroup_dies(self):
    w = second_derived()
    assert FreeSolvable.get(2, 2).from_word(w).is_identity()
    assert not FreeSolvable.get(2, 3).from_word(w).is_identity()

  def test_equality_ignores_representative(self, metabelian):
    a = metabelian.parse("x1 x2")
    b = metabelian.from_word(a.word * second_derived())
    assert a.word != b.word
    assert a == b
    assert hash(a) == hash(b)

  @settings(max_examples=60)
  @given(u=words2, v=words2)
  def test_from_word_is_a_homomorphism(self, metabelian, u, v):
    product = metabelian.mul(metabelian.from_word(u), metabelian.from_word(v))
    assert product == metabelian.from_word(u * v)
    assert metabelian.mul(product, metabelian.inv(product)).is_identity()

  def test_bounds(self, metabelian):
    S1 = FreeSolvable.get(2, 1)
    assert S1.distortion_bound(S1.parse("x1 x2"), 5) == 2
    assert metabelian.distortion_bound(metabelian.parse("x1"), 5) == 10
    assert metabelian.distortion_bound(metabelian.identity(), 5) is None
    assert metabelian.clf_bound(1) == 408
    assert metabelian.clf_bound(0) == 0
    assert S1.clf_bound(7) == 0

  def test_rank_mismatch(self, metabelian):
    with pytest.raises(InputError, match="does not map"):
      metabelian.from_word(parse_word("x1", 3))
    with pytest.raises(InputError):
      solvable_normal_form(parse_word("x1", 1), 2, 2)


class TestMagnusImage:
  def test_generator_image(self):
    image = magnus_geometric(parse_word("x1", 2), 2, 1)
    S1 = FreeSolvable.get(2, 1)
    assert image.cursor == S1.parse("x1")
    assert dict(image.lamp.items()) == {S1.identity(): (1, 0)}

  def test_inverse_generator_image(self):
    image = magnus_geometric(parse_word("X1", 2), 2, 1)
    S1 = FreeSolvable.get(2, 1)
    assert dict(image.lamp.items()) == {S1.parse("X1"): (-1, 0)}

  def test_commutator_image_is_a_loop(self):
    S1 = FreeSolvable.get(2, 1)
    image = magnus_geometric(parse_word("x1 x2 X1 X2", 2), 2, 1)
    assert image.cursor.is_identity()
    assert dict(image.lamp.items()) == {
      S1.identity(): (1, -1),
      S1.parse("x1"): (0, 1),
      S1.parse("x2"): (-1, 0),
    }

  @settings(max_examples=60)
  @given(w=words2)
  def test_algebraic_matches_geometric(self, w):
    image = magnus_algebraic(w, 2, 1)
    assert image.to_wreath() == magnus_geometric(w, 2, 1)
    assert image.satisfies_fundamental_formula()

  def test_algebraic_over_metabelian(self):
    w = parse_word("x1 x2 X1 X2 x2", 2)
    image = magnus_algebraic(w, 2, 2)
    assert image.to_wreath() == magnus_geometric(w, 2, 2)
    assert image.satisfies_fundamental_formula()
    assert not image.is_identity()

  def test_trivial_word(self):
    assert magnus_algebraic(parse_word("e", 2), 2, 1).is_identity()

  def test_coordinate_count_checked(self, metabelian):
    with pytest.raises(InputError, match="coordinates"):
      MagnusImage(metabelian, metabelian.identity(), [])

  def test_rank_checked(self):
    with pytest.raises(InputError):
      magnus_geometric(parse_word("x1", 1), 2, 1)
    with pytest.raises(InputError, match="Derived length"):
      magnus_geometric(parse_word("x1", 2), 2, 0)


class TestDivergence:
  @settings(max_examples=60)
  @given(w=words2)
  def test_path_has_one_source_and_one_sink(self, w):
    image = magnus_geometric(w, 2, 1)
    e = FreeSolvable.get(2, 1).identity()
    expected = {} if image.cursor == e else {e: 1, image.cursor: -1}
    assert divergence(image) == expected

  def test_needs_free_abelian_lamps(self, lamplighter):
    with pytest.raises(InputError, match="Divergence"):
      divergence(lamplighter.identity())


class TestNormalForm:
  def test_json_of_generator(self, metabelian):
    data = json.loads(normal_form_json(metabelian.parse("x1")))
    assert data == {"base": "(1,0)", "lamps": [{"at": "(0,0)", "val": "(1,0)"}]}

  def test_json_is_canonical(self, metabelian):
    a = metabelian.parse("x1 x2")
    b = metabelian.from_word(a.word * second_derived())
    assert normal_form_json(a) == normal_form_json(b)
    assert " " not in normal_form_json(a)

  def test_identity(self, metabelian):
    assert normal_form_json(metabelian.parse("x1 X1")) == '{"base":"(0,0)","lamps":[]}'

  def test_abelian_stage_is_a_list(self):
    assert normal_form_json(FreeSolvable.get(3, 1).parse("x1 x3 x3")) == "[1,0,2]"


def test_cyclic_distortion_bound():
  assert solvable_cyclic_distortion_bound(0) == 0
  assert solvable_cyclic_distortion_bound(7) == 14
  with pytest.raises(InputError):
    solvable_cyclic_distortion_bound(-1)
