"""Tests for wreathlab._groups."""

import pytest

from wreathlab._config import use_limits
from wreathlab._exceptions import InputError, ResourceError
from wreathlab._groups import Cyclic, FreeAbelian, FreeGroup, Perm3, bfs_ball, cyclic_power_solve, group_op, parse_group, word_length
from wreathlab._magnus import FreeSolvable
from wreathlab._words import parse_word
from wreathlab._wreath import WreathProduct


class TestParseGroup:
  @pytest.mark.parametrize(
    "spec,cls,descriptor",
    [
      ("Z", FreeAbelian, "Zr:1"),
      ("Z^3", FreeAbelian, "Zr:3"),
      ("Zr:2", FreeAbelian, "Zr:2"),
      ("Z5", Cyclic, "C:5"),
      ("C:5", Cyclic, "C:5"),
      ("P3", Perm3, "P3"),
      ("F:2", FreeGroup, "F:2"),
      ("S:2,2", FreeSolvable, "S:2,2"),
      ("W:Z2~Z", WreathProduct, "W:C:2~Zr:1"),
    ],
  )
  def test_grammar(self, spec, cls, descriptor):
    G = parse_group(spec)
    assert isinstance(G, cls)
    assert G.descriptor == descriptor

  def test_interned(self):
    assert parse_group("Z^2") is parse_group("Zr:2")

  @pytest.mark.parametrize("spec", ["Q", "W:Z2", "W:W:Z2~Z~Z", "Z^x", "S:2"])
  def test_rejects(self, spec):
    with pytest.raises(InputError):
      parse_group(spec)


class TestFreeAbelian:
  def test_literals(self, z2):
    assert z2.parse("(3,-2)") == (3, -2)
    assert z2.format((3, -2)) == "(3,-2)"
    assert parse_group("Z").parse("4") == (4,)

  def test_l1_length(self, z2):
    assert word_length(z2, (3, -2)) == 5

  def test_solve_power(self, z2):
    assert cyclic_power_solve(z2, (2, 0), (-6, 0), 10) == -3
    assert cyclic_power_solve(z2, (2, 0), (3, 0), 10) is None
    assert cyclic_power_solve(z2, (1, 1), (2, 1), 10) is None

  def test_distortion_bound(self, z2):
    assert z2.distortion_bound((2, 0), 7) == 3
    assert z2.distortion_bound((0, 0), 7) is None


class TestCyclic:
  def test_length_and_order(self):
    C = Cyclic(6)
    assert C.word_length(4) == 2
    assert C.order(4) == 3
    assert C.parse("-1") == 5

  def test_ball_saturates(self):
    ball = bfs_ball(Cyclic(5), 10)
    assert sorted(ball) == [0, 1, 2, 3, 4]
    assert ball[3] == 2


class TestPerm3:
  def test_cycle_notation(self):
    P = Perm3()
    t = P.parse("(1 2)")
    assert P.format(t) == "(1 2)"
    assert P.format(P.parse("(1 2 3)")) == "(1 2 3)"
    assert P.format(P.identity()) == "e"

  def test_diameter_and_conjugator(self):
    P = Perm3()
    assert P.diameter() == 3
    a, b = P.parse("(1 2)"), P.parse("(2 3)")
    z = P.conjugator(a, b)
    assert z is not None
    assert P.mul(a, z) == P.mul(z, b)
    assert P.conjugator(a, P.parse("(1 2 3)")) is None

  def test_rejects_bad_literal(self):
    with pytest.raises(InputError):
      Perm3().parse("(1 4)")


class TestFreeGroup:
  def test_length_is_reduced_length(self):
    F = FreeGroup(2)
    assert F.word_length(parse_word("x1 X2 x1", 2)) == 3


class TestGroupOp:
  def test_kinds(self, z2):
    assert group_op(z2, "identity") == (0, 0)
    assert group_op(z2, "invert", (1, 2)) == (-1, -2)
    assert group_op(z2, "multiply", (1, 2), (3, 4)) == (4, 6)

  def test_unknown(self, z2):
    with pytest.raises(InputError):
      group_op(z2, "conjugate", (1, 2))  # type: ignore[arg-type]

  def test_rejects_foreign_elements(self, z2):
    with pytest.raises(InputError):
      group_op(z2, "multiply", (1, 2), (1, 2, 3))


class TestBalls:
  def test_sphere_sizes_z2(self, z2):
    assert [len(z2.sphere(k)) for k in range(4)] == [1, 4, 8, 12]

  def test_radius_cap(self):
    with use_limits(bfs_radius_cap=2):
      with pytest.raises(ResourceError) as exc_info:
        bfs_ball(FreeSolvable(2, 2), 3)
    assert exc_info.value.cap == "bfs_radius_cap"

  def test_ball_size_cap(self):
    with use_limits(ball_size_cap=10):
      with pytest.raises(ResourceError) as exc_info:
        bfs_ball(FreeGroup(2), 3)
    assert exc_info.value.cap == "ball_size_cap"

  def test_length_within(self, metabelian):
    x1 = metabelian.generator(1)
    assert metabelian.length_within(metabelian.power(x1, 3), 3) == 3
    assert metabelian.length_within(metabelian.power(x1, 3), 2) is None
