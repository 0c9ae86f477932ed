"""Tests for wreathlab._fox."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wreathlab._exceptions import InputError
from wreathlab._fox import (
  GroupRingElement,
  augmentation,
  fox_derive,
  fox_derive_element,
  fox_star,
  kernel_decompose,
  ring_combine,
)
from wreathlab._groups import FreeAbelian, FreeGroup, intern
from wreathlab._magnus import FreeSolvable
from wreathlab._words import ReducedWord, commutator, parse_word, reduce

F2 = intern(FreeGroup(2))
F3 = intern(FreeGroup(3))
words3 = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12).map(lambda raw: reduce(3, raw))


def ring(G, *pairs):
  return GroupRingElement(G, pairs)


def expansion(a, rank):
  """sum_i da/dx_i (x_i - 1)."""
  one = GroupRingElement.one(a.oracle)
  total = GroupRingElement.zero(a.oracle)
  for i in range(1, rank + 1):
    total = total + fox_derive_element(a, i) * (GroupRingElement.of(a.oracle, ReducedWord.generator(rank, i)) - one)
  return total


class TestGroupRingElement:
  def test_collects_and_drops_zeros(self):
    x1 = parse_word("x1", 2)
    a = ring(F2, (x1, 2), (x1, -2), (F2.identity(), 3))
    assert len(a) == 1
    assert a.coefficient(F2.identity()) == 3
    assert a.coefficient(x1) == 0

  def test_format(self):
    a = ring(F2, (parse_word("x2", 2), -1), (F2.identity(), 1))
    assert a.format() == "1·e -1·x2"
    assert GroupRingElement.zero(F2).format() == "0"

  def test_multiplication_uses_group_law(self):
    x1 = GroupRingElement.of(F2, parse_word("x1", 2))
    X1 = GroupRingElement.of(F2, parse_word("X1", 2))
    assert x1 * X1 == GroupRingElement.one(F2)

  def test_ring_combine(self):
    p = GroupRingElement.of(F2, parse_word("x1", 2))
    q = GroupRingElement.one(F2)
    assert ring_combine("add", p, q) == p + q
    assert ring_combine("subtract", p, q) == p - q
    assert ring_combine("multiply", p, q) == p
    assert ring_combine("scale", p, 3).coefficient(parse_word("x1", 2)) == 3

  def test_ring_combine_rejects_bad_operands(self):
    p = GroupRingElement.one(F2)
    with pytest.raises(InputError):
      ring_combine("scale", p, p)
    with pytest.raises(InputError):
      ring_combine("add", p, 2)

  def test_rejects_mixed_rings(self):
    with pytest.raises(InputError, match="cannot be combined"):
      GroupRingElement.one(F2) + GroupRingElement.one(F3)

  def test_augmentation(self):
    a = ring(F2, (parse_word("x1", 2), 4), (parse_word("x2 x1", 2), -1))
    assert augmentation(a) == 3


class TestFoxDerive:
  def test_generator(self):
    assert fox_derive(parse_word("x1", 2), 1) == GroupRingElement.one(F2)
    assert fox_derive(parse_word("x1", 2), 2).is_zero()

  def test_inverse_generator(self):
    assert fox_derive(parse_word("X1", 2), 1) == ring(F2, (parse_word("X1", 2), -1))

  def test_empty_word(self):
    assert fox_derive(ReducedWord.identity(2), 1).is_zero()

  def test_index_checked(self):
    with pytest.raises(InputError, match="outside 1..2"):
      fox_derive(parse_word("x1", 2), 3)

  @given(words3, words3)
  def test_product_rule(self, u, v):
    for i in (1, 2, 3):
      lhs = fox_derive(u * v, i)
      rhs = fox_derive(u, i) + GroupRingElement.of(F3, u) * fox_derive(v, i)
      assert lhs == rhs

  @given(words3)
  def test_fundamental_formula_on_words(self, w):
    a = GroupRingElement.of(F3, w)
    assert a - GroupRingElement.one(F3) == expansion(a, 3)

  @settings(max_examples=50)
  @given(st.lists(st.tuples(words3, st.integers(-5, 5)), min_size=3, max_size=3))
  def test_fundamental_formula_on_combinations(self, pairs):
    a = GroupRingElement(F3, pairs)
    assert a - GroupRingElement.one(F3).scale(augmentation(a)) == expansion(a, 3)

  def test_derive_element_needs_free_group(self):
    with pytest.raises(InputError):
      fox_derive_element(GroupRingElement.one(intern(FreeAbelian(2))), 1)


class TestFoxStar:
  def test_commutator_in_z2(self):
    Z2 = intern(FreeAbelian(2))
    w = commutator(parse_word("x1", 2), parse_word("x2", 2))
    assert fox_star(w, 1, Z2) == ring(Z2, ((0, 0), 1), ((0, 1), -1))
    assert fox_star(w, 2, Z2) == ring(Z2, ((1, 0), 1), ((0, 0), -1))

  def test_power_in_z(self):
    Z = intern(FreeAbelian(1))
    w = ReducedWord.generator(1, 1) ** 4
    assert fox_star(w, 1, Z) == ring(Z, *[((k,), 1) for k in range(4)])

  def test_rank_mismatch(self):
    with pytest.raises(InputError):
      fox_star(parse_word("x1", 2), 1, intern(FreeAbelian(3)))


class TestKernelDecompose:
  def test_single_kernel_element(self, metabelian):
    w = metabelian.from_word(commutator(parse_word("x1", 2), parse_word("x2", 2)))
    a = ring(metabelian, (w, 1), (metabelian.identity(), -1))
    assert kernel_decompose(a) == [(metabelian.identity(), w)]

  def test_translated_kernel_element(self, metabelian):
    w = metabelian.from_word(commutator(parse_word("x1", 2), parse_word("x2", 2)))
    g = metabelian.generator(1)
    a = ring(metabelian, (metabelian.mul(g, w), 1), (g, -1))
    assert kernel_decompose(a) == [(g, w)]

  def test_three_cosets_reconstruct(self, metabelian):
    S = metabelian
    c = S.from_word(commutator(parse_word("x1", 2), parse_word("x2", 2)))
    d = S.from_word(commutator(parse_word("x1 x1", 2), parse_word("X2", 2)))
    a = GroupRingElement.zero(S)
    one = GroupRingElement.one(S)
    for r, h, k in [(S.generator(1), c, 2), (S.generator(2, -1), d, -1), (S.identity(), S.mul(c, d), 3)]:
      a = a + (GroupRingElement.of(S, r) * (GroupRingElement.of(S, h) - one)).scale(k)
    pairs = kernel_decompose(a)
    rebuilt = GroupRingElement.zero(S)
    for r, h in pairs:
      rebuilt = rebuilt + GroupRingElement.of(S, r) * (GroupRingElement.of(S, h) - one)
      assert S.quotient(h).is_identity()
    assert rebuilt == a

  def test_rejects_non_kernel(self, metabelian):
    a = ring(metabelian, (metabelian.generator(1), 1), (metabelian.identity(), -1))
    with pytest.raises(InputError, match="not in the kernel"):
      kernel_decompose(a)
