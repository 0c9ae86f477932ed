"""Restricted wreath products A wr B and their word metric.

An element is a pair (f, b) where f is a finitely supported lamp configuration B -> A and b is
the cursor. The product is (f, b)(g, c) = (f g^b, bc) with g^b(x) = g(b^-1 x).
"""

from __future__ import annotations

import math
from typing import Any, Iterable, Iterator, Mapping

from pydantic import ValidationError

from ._config import current_limits
from ._exceptions import InputError, ResourceError
from ._groups import Element, GroupOracle
from .models import LampModel, WreathElementModel


class FinSuppMap:
  """Finitely supported map from base elements to non-identity top elements."""

  __slots__ = ("base", "top", "_entries", "_hash")

  def __init__(self, base: GroupOracle, top: GroupOracle, entries: Mapping[Element, Element] | Iterable[tuple[Element, Element]] = ()):
    """Initializes the map, dropping identity values."""
    e = top.identity()
    data: dict[Element, Element] = {}
    pairs = entries.items() if isinstance(entries, Mapping) else entries
    for key, value in pairs:
      base.check(key)
      top.check(value)
      if key in data:
        raise InputError(f"Duplicate lamp position {base.format(key)}")
      if value != e:
        data[key] = value
    self.base = base
    self.top = top
    self._entries = data
    self._hash: int | None = None

  @classmethod
  def _trusted(cls, base: GroupOracle, top: GroupOracle, data: dict[Element, Element]) -> FinSuppMap:
    instance = cls.__new__(cls)
    instance.base = base
    instance.top = top
    instance._entries = data
    instance._hash = None
    return instance

  def get(self, key: Element) -> Element:
    return self._entries.get(key, self.top.identity())

  def support(self) -> frozenset[Element]:
    return frozenset(self._entries)

  def items(self) -> Iterator[tuple[Element, Element]]:
    return iter(self._entries.items())

  def __len__(self) -> int:
    return len(self._entries)

  def __contains__(self, key: object) -> bool:
    return key in self._entries

  def __iter__(self) -> Iterator[Element]:
    return iter(self._entries)

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, FinSuppMap):
      return NotImplemented
    return self.base == other.base and self.top == other.top and self._entries == other._entries

  def __hash__(self) -> int:
    if self._hash is None:
      self._hash = hash(frozenset(self._entries.items()))
    return self._hash

  def __repr__(self) -> str:
    body = ", ".join(f"{self.base.format(k)}: {self.top.format(v)}" for k, v in self.sorted_items())
    return f"FinSuppMap({{{body}}})"

  def sorted_items(self) -> list[tuple[Element, Element]]:
    return sorted(self._entries.items(), key=lambda kv: self.base.sort_key(kv[0]))

  def size(self) -> int:
    """Sum of the top-group lengths of the values."""
    return sum(self.top.word_length(v) for v in self._entries.values())

  def is_trivial(self) -> bool:
    return not self._entries


class WreathElement:
  """A pair (lamp, cursor) of A wr B."""

  __slots__ = ("lamp", "cursor", "_hash")

  def __init__(self, lamp: FinSuppMap, cursor: Element):
    """Initializes the element; the cursor must belong to the lamp's base group."""
    lamp.base.check(cursor)
    self.lamp = lamp
    self.cursor = cursor
    self._hash: int | None = None

  @property
  def base(self) -> GroupOracle:
    return self.lamp.base

  @property
  def top(self) -> GroupOracle:
    return self.lamp.top

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, WreathElement):
      return NotImplemented
    return self.cursor == other.cursor and self.lamp == other.lamp

  def __hash__(self) -> int:
    if self._hash is None:
      self._hash = hash((self.lamp, self.cursor))
    return self._hash

  def __repr__(self) -> str:
    return f"WreathElement({self.lamp!r}, {self.base.format(self.cursor)})"


def _require_same(u: WreathElement, v: WreathElement) -> None:
  if u.base != v.base or u.top != v.top:
    raise InputError(
      f"Wreath operands live in different groups: W:{u.top.descriptor}~{u.base.descriptor} "
      f"and W:{v.top.descriptor}~{v.base.descriptor}"
    )


def wreath_mul(u: WreathElement, v: WreathElement) -> WreathElement:
  """Return (f g^b, bc) for u = (f, b), v = (g, c)."""
  _require_same(u, v)
  B, A = u.base, u.top
  b = u.cursor
  e_a = A.identity()
  shift = b != B.identity()
  data = dict(u.lamp._entries)
  for y, value in v.lamp._entries.items():
    key = B.mul(b, y) if shift else y
    current = data.get(key)
    combined = value if current is None else A.mul(current, value)
    if combined == e_a:
      data.pop(key, None)
    else:
      data[key] = combined
  return WreathElement(FinSuppMap._trusted(B, A, data), B.mul(b, v.cursor))


def wreath_inv(u: WreathElement) -> WreathElement:
  """Return (h, b^-1) with h(y) = f(b y)^-1."""
  B, A = u.base, u.top
  b_inv = B.inv(u.cursor)
  data = {B.mul(b_inv, x): A.inv(value) for x, value in u.lamp._entries.items()}
  return WreathElement(FinSuppMap._trusted(B, A, data), b_inv)


def visiting_path_length(points: Iterable[Element], endpoint: Element, G: GroupOracle) -> int:
  """Length of a shortest walk in the Cayley graph of G from e to `endpoint` through every point.

  Exact fixed-endpoint subset dynamic programming; points equal to e or to the endpoint are free.

  Args:
      points: Base elements to visit.
      endpoint: Where the walk ends.
      G: The base group.

  Returns:
      The minimum walk length.
  """
  e = G.identity()
  stops = sorted({G.check(p) for p in points} - {e, G.check(endpoint)}, key=G.sort_key)
  cap = current_limits().path_cap
  if len(stops) > cap:
    raise ResourceError("path_cap", cap, len(stops), "support too large for the exact visiting-path solver")
  if not stops:
    return G.word_length(endpoint)

  n = len(stops)
  start = [G.word_length(p) for p in stops]
  finish = [G.distance(p, endpoint) for p in stops]
  dist = [[G.distance(p, q) for q in stops] for p in stops]

  unreachable = float("inf")
  dp: list[list[float]] = [[unreachable] * n for _ in range(1 << n)]
  for j in range(n):
    dp[1 << j][j] = start[j]
  for mask in range(1, 1 << n):
    row = dp[mask]
    for j in range(n):
      cost = row[j]
      if cost == unreachable or not (mask >> j) & 1:
        continue
      for k in range(n):
        if (mask >> k) & 1:
          continue
        nxt = mask | (1 << k)
        candidate = cost + dist[j][k]
        if candidate < dp[nxt][k]:
          dp[nxt][k] = candidate
  full = dp[(1 << n) - 1]
  return int(min(full[j] + finish[j] for j in range(n)))


def wreath_word_length(u: WreathElement) -> int:
  """|(f, b)| = K(Supp f, b) + sum of |f(x)| over the support."""
  return visiting_path_length(u.lamp.support(), u.cursor, u.base) + u.lamp.size()


def wreath_length_lower_bound(u: WreathElement) -> tuple[int, bool]:
  """Return (value, exact): the exact length when the support fits the path cap, else a counting bound.

  A walk of length K from e visits at most K + 1 vertices, so K >= |(Supp f + {b}) - {e}|.
  """
  B = u.base
  stops = u.lamp.support() - {B.identity(), u.cursor}
  if len(stops) <= current_limits().path_cap:
    return wreath_word_length(u), True
  visited = (u.lamp.support() | {u.cursor}) - {B.identity()}
  return len(visited) + u.lamp.size(), False


class WreathProduct(GroupOracle):
  """A wr B as a group oracle with generators (1, s) for s generating B and (delta_e t, e) for t generating A."""

  def __init__(self, top: GroupOracle, base: GroupOracle):
    super().__init__()
    self.top = top
    self.base = base
    self.is_finite = top.is_finite and base.is_finite
    self.closed_form_length = True

  @property
  def descriptor(self) -> str:
    return f"W:{self.top.descriptor}~{self.base.descriptor}"

  def element(self, lamps: Mapping[Element, Element] | Iterable[tuple[Element, Element]], cursor: Element) -> WreathElement:
    return WreathElement(FinSuppMap(self.base, self.top, lamps), cursor)

  def identity(self) -> WreathElement:
    return WreathElement(FinSuppMap._trusted(self.base, self.top, {}), self.base.identity())

  def mul(self, a: WreathElement, b: WreathElement) -> WreathElement:
    self.check(a)
    return wreath_mul(a, b)

  def inv(self, a: WreathElement) -> WreathElement:
    return wreath_inv(self.check(a))

  def generators(self) -> list[WreathElement]:
    e_b = self.base.identity()
    moves = [self.element({}, s) for s in self.base.generators()]
    lamps = [self.element({e_b: t}, e_b) for t in self.top.generators()]
    return moves + lamps

  def contains(self, a: Element) -> bool:
    return isinstance(a, WreathElement) and a.base == self.base and a.top == self.top

  def sort_key(self, a: WreathElement) -> Any:
    return (
      self.base.sort_key(a.cursor),
      tuple((self.base.sort_key(k), self.top.sort_key(v)) for k, v in a.lamp.sorted_items()),
    )

  def word_length(self, a: WreathElement) -> int:
    return wreath_word_length(self.check(a))

  def order(self, a: WreathElement) -> int | None:
    self.check(a)
    cursor_order = self.base.order(a.cursor)
    if cursor_order is None:
      return None
    # a^k has trivial cursor only when cursor_order divides k; a^cursor_order is then a pure lamp
    folded = self.power(a, cursor_order)
    lamp_order = 1
    for value in folded.lamp._entries.values():
      value_order = self.top.order(value)
      if value_order is None:
        return None
      lamp_order = math.lcm(lamp_order, value_order)
    return cursor_order * lamp_order

  def membership_radius(self, x: WreathElement) -> int:
    raise InputError(f"Cyclic membership search is not available in {self.descriptor}")

  def distortion_bound(self, b: WreathElement, n: int) -> int | None:
    raise InputError(f"No distortion bound available in {self.descriptor}")

  def clf_bound(self, n: int) -> int:
    raise InputError(f"No conjugacy length bound available for {self.descriptor}")

  def conjugator(self, b: WreathElement, c: WreathElement) -> WreathElement | None:
    from ._conjugacy import wreath_conjugacy

    certificate = wreath_conjugacy(b, c)
    return None if certificate is None else certificate.conjugator

  # --- wire format ---

  def to_model(self, a: WreathElement) -> WreathElementModel:
    self.check(a)
    return WreathElementModel(
      base=self.base.format(a.cursor),
      lamps=[LampModel(at=self.base.format(k), val=self.top.format(v)) for k, v in a.lamp.sorted_items()],
    )

  def format(self, a: WreathElement) -> str:
    return self.to_model(a).model_dump_json()

  def parse(self, text: str) -> WreathElement:
    try:
      model = WreathElementModel.model_validate_json(text)
    except ValidationError as e:
      raise InputError(f"Bad wreath element JSON: {e.errors()[0]['msg']}") from e
    return self.from_model(model)

  def from_model(self, model: WreathElementModel) -> WreathElement:
    lamps = [(self.base.parse(lamp.at), self.top.parse(lamp.val)) for lamp in model.lamps]
    return self.element(lamps, self.base.parse(model.base))
