"""Tests for wreathlab._words."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wreathlab._exceptions import InputError
from wreathlab._words import ReducedWord, commutator, parse_word, random_word, reduce

letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12)


class TestReduce:
  def test_cancels_adjacent_pairs(self):
    assert reduce(2, [1, 2, -2, -1]).is_identity()

  def test_keeps_reduced_input(self):
    assert reduce(2, [1, -2, 1]).letters == (1, -2, 1)

  def test_accepts_pairs(self):
    assert reduce(2, [(1, 1), (2, -1)]).letters == (1, -2)

  def test_accepts_literal(self):
    assert reduce(2, "x1 x2 X2").letters == (1,)

  def test_out_of_range(self):
    with pytest.raises(InputError, match="outside 1..2"):
      reduce(2, [3])

  @given(letters)
  def test_idempotent(self, raw):
    once = reduce(3, raw)
    assert reduce(3, once.letters) == once


class TestReducedWord:
  def test_constructor_rejects_unreduced(self):
    with pytest.raises(InputError, match="not freely reduced"):
      ReducedWord(2, (1, -1))

  def test_format_and_parse(self):
    w = parse_word("x1 X2 x1")
    assert w.rank == 2
    assert w.format() == "x1 X2 x1"
    assert ReducedWord.identity(2).format() == "e"

  def test_parse_identity_spellings(self):
    for text in ("", "e", "1"):
      assert parse_word(text, 2).is_identity()

  def test_parse_rejects_garbage(self):
    with pytest.raises(InputError, match="Bad word token"):
      parse_word("x1 y2")

  def test_shortlex_order(self):
    words = [parse_word(t, 2) for t in ("x2", "X1", "x1 x1", "x1")]
    assert [w.format() for w in sorted(words)] == ["x1", "X1", "x2", "x1 x1"]

  def test_power(self):
    x1 = ReducedWord.generator(1, 1)
    assert (x1**3).letters == (1, 1, 1)
    assert (x1**-2).letters == (-1, -1)

  @given(letters, letters)
  def test_product_inverse(self, a, b):
    u, v = reduce(3, a), reduce(3, b)
    assert ((u * v) * v.inverse()) == u

  def test_commutator(self):
    x1, x2 = ReducedWord.generator(2, 1), ReducedWord.generator(2, 2)
    assert commutator(x1, x2).format() == "x1 x2 X1 X2"


class TestRandomWord:
  def test_reduced_and_bounded(self, rng):
    for _ in range(50):
      w = random_word(rng, 2, 8)
      assert len(w) <= 8

  def test_seeded(self):
    import random

    a = [random_word(random.Random(5), 3, 10) for _ in range(3)]
    b = [random_word(random.Random(5), 3, 10) for _ in range(3)]
    assert a == b
