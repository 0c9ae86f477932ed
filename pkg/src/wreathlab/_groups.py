"""Group oracles: a uniform interface over the groups the rest of the package works in.

Every oracle exposes identity / multiply / invert on canonical element values, a generating set,
and a word metric. Elements are plain hashable values owned by their oracle (integer vectors,
residues, permutation tuples, reduced words) or the richer element classes defined in
`_magnus` and `_wreath`.
"""

from __future__ import annotations

import math
import re
import threading
from abc import ABC, abstractmethod
from typing import Any, Iterator, Literal

from ._config import current_limits
from ._exceptions import InputError, InternalError, ResourceError
from ._utils import logger, parse_int, parse_int_tuple
from ._words import ReducedWord, parse_word

Element = Any
OpKind = Literal["multiply", "invert", "identity"]


class GroupOracle(ABC):
  """Abstract group with a finite symmetric generating set and a cached word metric."""

  is_finite: bool = False
  is_abelian: bool = False
  closed_form_length: bool = False

  def __init__(self) -> None:
    self._ball_lock = threading.Lock()
    self._distances: dict[Element, int] = {}
    self._spheres: list[list[Element]] = []
    self._saturated = False

  # --- identity of the oracle itself ---

  @property
  @abstractmethod
  def descriptor(self) -> str: ...

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, GroupOracle):
      return NotImplemented
    return self.descriptor == other.descriptor

  def __hash__(self) -> int:
    return hash(self.descriptor)

  def __repr__(self) -> str:
    return f"<{type(self).__name__} {self.descriptor}>"

  # --- group law ---

  @abstractmethod
  def identity(self) -> Element: ...

  @abstractmethod
  def mul(self, a: Element, b: Element) -> Element: ...

  @abstractmethod
  def inv(self, a: Element) -> Element: ...

  @abstractmethod
  def generators(self) -> list[Element]:
    """Return the positive generators; the metric uses them together with their inverses."""
    ...

  @abstractmethod
  def contains(self, a: Element) -> bool: ...

  @abstractmethod
  def parse(self, text: str) -> Element: ...

  @abstractmethod
  def format(self, a: Element) -> str: ...

  def check(self, a: Element) -> Element:
    if not self.contains(a):
      raise InputError(f"{a!r} is not an element of {self.descriptor}")
    return a

  def sort_key(self, a: Element) -> Any:
    """Total order on elements, a function of the element value only."""
    return a

  def symmetric_generators(self) -> list[Element]:
    result: list[Element] = []
    for gen in self.generators():
      for candidate in (gen, self.inv(gen)):
        if candidate not in result and candidate != self.identity():
          result.append(candidate)
    return result

  def power(self, a: Element, k: int) -> Element:
    base = a if k >= 0 else self.inv(a)
    result = self.identity()
    n = abs(k)
    while n:
      if n & 1:
        result = self.mul(result, base)
      n >>= 1
      if n:
        base = self.mul(base, base)
    return result

  def is_identity(self, a: Element) -> bool:
    return a == self.identity()

  def commutes(self, a: Element, b: Element) -> bool:
    return self.mul(a, b) == self.mul(b, a)

  # --- metric ---

  def word_length(self, a: Element) -> int:
    """Exact distance from the identity; BFS unless a subclass has a closed form."""
    self.check(a)
    cap = current_limits().bfs_radius_cap
    radius = 0
    while True:
      self._grow(radius)
      found = self._distances.get(a)
      if found is not None:
        return found
      if self._saturated:
        raise InputError(f"{self.format(a)} is not reachable in {self.descriptor}")
      radius += 1
      if radius > cap:
        raise ResourceError("bfs_radius_cap", cap, radius, f"word length of {self.format(a)} in {self.descriptor}")

  def length_within(self, a: Element, radius: int) -> int | None:
    """Exact length of a when it is at most radius, else None; grows the ball only to radius."""
    self.check(a)
    if self.closed_form_length:
      length = self.word_length(a)
      return length if length <= radius else None
    for k in range(radius + 1):
      self._grow(k)
      if self._saturated:
        break
    found = self._distances.get(a)
    return found if found is not None and found <= radius else None

  def distance(self, x: Element, y: Element) -> int:
    return self.word_length(self.mul(self.inv(x), y))

  def order(self, a: Element) -> int | None:
    """Order of a, or None when it is infinite."""
    self.check(a)
    if self.is_identity(a):
      return 1
    if not self.is_finite:
      return None
    k, current = 1, a
    while not self.is_identity(current):
      current = self.mul(current, a)
      k += 1
    return k

  def membership_radius(self, x: Element) -> int:
    """Largest |k| that can satisfy b^k = x for an infinite-order b."""
    return self.word_length(x)

  def distortion_bound(self, b: Element, n: int) -> int | None:
    """Upper bound on max{m : |b^m| <= n}, or None if b has finite order."""
    if self.order(b) is not None:
      return None
    return 2 * n

  def clf_bound(self, n: int) -> int:
    """Upper bound on the conjugacy length function at n."""
    return 0

  # --- cyclic subgroups and conjugacy ---

  def solve_power(self, b: Element, x: Element, search_bound: int) -> int | None:
    order = self.order(b)
    if order is not None:
      current = self.identity()
      for k in range(order):
        if current == x:
          return k
        current = self.mul(current, b)
      return None
    if x == self.identity():
      return 0
    up, down = self.identity(), self.identity()
    b_inv = self.inv(b)
    for k in range(1, search_bound + 1):
      up = self.mul(up, b)
      if up == x:
        return k
      down = self.mul(down, b_inv)
      if down == x:
        return -k
    return None

  def conjugator(self, b: Element, c: Element) -> Element | None:
    """Return z with b z = z c, or None when b and c are not conjugate."""
    if self.is_abelian:
      return self.identity() if b == c else None
    if self.is_finite:
      for z in self.ordered_ball(self.diameter()):
        if self.mul(b, z) == self.mul(z, c):
          return z
      return None
    raise InputError(f"No conjugacy oracle for {self.descriptor}")

  def diameter(self) -> int:
    if not self.is_finite:
      raise InputError(f"{self.descriptor} is infinite")
    radius = 0
    while True:
      self._grow(radius)
      if self._saturated:
        return len(self._spheres) - 1
      radius += 1

  # --- balls ---

  def _grow(self, radius: int) -> None:
    if len(self._spheres) > radius or self._saturated:
      return
    limits = current_limits()
    if radius > limits.bfs_radius_cap:
      raise ResourceError("bfs_radius_cap", limits.bfs_radius_cap, radius, f"ball in {self.descriptor}")
    with self._ball_lock:
      if not self._spheres:
        e = self.identity()
        self._distances[e] = 0
        self._spheres.append([e])
      gens = self.symmetric_generators()
      while len(self._spheres) <= radius and not self._saturated:
        depth = len(self._spheres)
        fresh: list[Element] = []
        for g in self._spheres[-1]:
          for s in gens:
            h = self.mul(g, s)
            if h not in self._distances:
              self._distances[h] = depth
              fresh.append(h)
        if not fresh:
          self._saturated = True
          break
        if len(self._distances) > limits.ball_size_cap:
          for h in fresh:
            del self._distances[h]
          raise ResourceError("ball_size_cap", limits.ball_size_cap, len(self._distances) + len(fresh), f"radius {depth} in {self.descriptor}")
        fresh.sort(key=self.sort_key)
        self._spheres.append(fresh)
        logger.debug(f"{self.descriptor}: sphere {depth} has {len(fresh)} elements")

  def sphere(self, radius: int) -> list[Element]:
    self._grow(radius)
    return list(self._spheres[radius]) if radius < len(self._spheres) else []

  def ordered_ball(self, radius: int) -> Iterator[Element]:
    """Yield the ball in increasing length, ties in canonical order."""
    for k in range(radius + 1):
      self._grow(k)
      if k >= len(self._spheres):
        return
      yield from self._spheres[k]


# --- concrete oracles ---


class FreeGroup(GroupOracle):
  """The free group F_r on reduced words; the key group of the ring Z(F)."""

  closed_form_length = True

  def __init__(self, rank: int):
    super().__init__()
    if rank < 1:
      raise InputError(f"Rank must be positive, got {rank}")
    self.rank = rank

  @property
  def descriptor(self) -> str:
    return f"F:{self.rank}"

  def identity(self) -> ReducedWord:
    return ReducedWord.identity(self.rank)

  def mul(self, a: ReducedWord, b: ReducedWord) -> ReducedWord:
    return self.check(a) * self.check(b)

  def inv(self, a: ReducedWord) -> ReducedWord:
    return self.check(a).inverse()

  def generators(self) -> list[ReducedWord]:
    return [ReducedWord.generator(self.rank, i) for i in range(1, self.rank + 1)]

  def contains(self, a: Element) -> bool:
    return isinstance(a, ReducedWord) and a.rank == self.rank

  def parse(self, text: str) -> ReducedWord:
    return parse_word(text, self.rank)

  def format(self, a: ReducedWord) -> str:
    return a.format()

  def sort_key(self, a: ReducedWord) -> Any:
    return a.sort_key()

  def word_length(self, a: ReducedWord) -> int:
    return len(self.check(a))

  def from_word(self, w: ReducedWord) -> ReducedWord:
    return self.check(w)


class FreeAbelian(GroupOracle):
  """Z^r with integer-vector elements and the L1 word metric."""

  is_abelian = True
  closed_form_length = True

  def __init__(self, rank: int):
    super().__init__()
    if rank < 1:
      raise InputError(f"Rank must be positive, got {rank}")
    self.rank = rank

  @property
  def descriptor(self) -> str:
    return f"Zr:{self.rank}"

  def identity(self) -> tuple[int, ...]:
    return (0,) * self.rank

  def mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    self.check(a)
    self.check(b)
    return tuple(x + y for x, y in zip(a, b))

  def inv(self, a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in self.check(a))

  def power(self, a: tuple[int, ...], k: int) -> tuple[int, ...]:
    return tuple(k * x for x in self.check(a))

  def generators(self) -> list[tuple[int, ...]]:
    return [tuple(1 if j == i else 0 for j in range(self.rank)) for i in range(self.rank)]

  def contains(self, a: Element) -> bool:
    return isinstance(a, tuple) and len(a) == self.rank and all(type(x) is int for x in a)

  def parse(self, text: str) -> tuple[int, ...]:
    stripped = text.strip()
    if self.rank == 1 and not stripped.startswith("("):
      return (parse_int(stripped),)
    return parse_int_tuple(stripped, self.rank)

  def format(self, a: tuple[int, ...]) -> str:
    if self.rank == 1:
      return str(a[0])
    return "(" + ",".join(str(x) for x in a) + ")"

  def word_length(self, a: tuple[int, ...]) -> int:
    return sum(abs(x) for x in self.check(a))

  def order(self, a: tuple[int, ...]) -> int | None:
    return 1 if self.is_identity(self.check(a)) else None

  def from_word(self, w: ReducedWord) -> tuple[int, ...]:
    """Abelianization of a word."""
    if w.rank != self.rank:
      raise InputError(f"Word of rank {w.rank} does not map to {self.descriptor}")
    counts = [0] * self.rank
    for letter in w.letters:
      counts[abs(letter) - 1] += 1 if letter > 0 else -1
    return tuple(counts)

  def solve_power(self, b: tuple[int, ...], x: tuple[int, ...], search_bound: int) -> int | None:
    self.check(b)
    self.check(x)
    if self.is_identity(b):
      return 0 if self.is_identity(x) else None
    pivot = next(i for i, value in enumerate(b) if value)
    k, remainder = divmod(x[pivot], b[pivot])
    if remainder or abs(k) > search_bound or self.power(b, k) != x:
      return None
    return k

  def distortion_bound(self, b: tuple[int, ...], n: int) -> int | None:
    if self.is_identity(b):
      return None
    return n // self.word_length(b)


class Cyclic(GroupOracle):
  """Z_q on residues 0..q-1."""

  is_abelian = True
  is_finite = True
  closed_form_length = True

  def __init__(self, order: int):
    super().__init__()
    if order < 1:
      raise InputError(f"Cyclic order must be positive, got {order}")
    self.q = order

  @property
  def descriptor(self) -> str:
    return f"C:{self.q}"

  def identity(self) -> int:
    return 0

  def mul(self, a: int, b: int) -> int:
    return (self.check(a) + self.check(b)) % self.q

  def inv(self, a: int) -> int:
    return -self.check(a) % self.q

  def generators(self) -> list[int]:
    return [1] if self.q > 1 else []

  def contains(self, a: Element) -> bool:
    return type(a) is int and 0 <= a < self.q

  def parse(self, text: str) -> int:
    return parse_int(text) % self.q

  def format(self, a: int) -> str:
    return str(a)

  def sort_key(self, a: int) -> Any:
    return (a,)

  def word_length(self, a: int) -> int:
    self.check(a)
    return min(a, self.q - a)

  def order(self, a: int) -> int | None:
    return self.q // math.gcd(self.check(a), self.q)

  def diameter(self) -> int:
    return self.q // 2


_PERM_CYCLE = re.compile(r"\(([^()]*)\)")


class Perm3(GroupOracle):
  """The symmetric group on {1, 2, 3}, generated by (1 2) and (2 3).

  Permutations are stored as image tuples on {0, 1, 2}; products compose right to left,
  so (a * b)(i) = a(b(i)).
  """

  is_finite = True

  @property
  def descriptor(self) -> str:
    return "P3"

  def identity(self) -> tuple[int, ...]:
    return (0, 1, 2)

  def mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    self.check(a)
    self.check(b)
    return tuple(a[b[i]] for i in range(3))

  def inv(self, a: tuple[int, ...]) -> tuple[int, ...]:
    self.check(a)
    result = [0, 0, 0]
    for i, image in enumerate(a):
      result[image] = i
    return tuple(result)

  def generators(self) -> list[tuple[int, ...]]:
    return [(1, 0, 2), (0, 2, 1)]

  def contains(self, a: Element) -> bool:
    return isinstance(a, tuple) and sorted(a) == [0, 1, 2] and all(type(x) is int for x in a)

  def parse(self, text: str) -> tuple[int, ...]:
    stripped = text.strip()
    if stripped in ("e", "()", ""):
      return self.identity()
    cycles = _PERM_CYCLE.findall(stripped)
    if not cycles or _PERM_CYCLE.sub("", stripped).strip():
      raise InputError(f"Bad permutation literal {text!r}; expected cycle notation like (1 2 3)")
    result = self.identity()
    for cycle in cycles:
      points = [parse_int(p) for p in cycle.replace(",", " ").split()]
      if any(p not in (1, 2, 3) for p in points) or len(set(points)) != len(points):
        raise InputError(f"Bad cycle ({cycle}) in {text!r}")
      images = list(range(3))
      for pos, point in enumerate(points):
        images[point - 1] = points[(pos + 1) % len(points)] - 1
      result = self.mul(result, tuple(images))
    return result

  def format(self, a: tuple[int, ...]) -> str:
    self.check(a)
    seen: set[int] = set()
    cycles: list[str] = []
    for start in range(3):
      if start in seen or a[start] == start:
        continue
      cycle = [start]
      seen.add(start)
      nxt = a[start]
      while nxt != start:
        cycle.append(nxt)
        seen.add(nxt)
        nxt = a[nxt]
      cycles.append("(" + " ".join(str(p + 1) for p in cycle) + ")")
    return "".join(cycles) or "e"

  def clf_bound(self, n: int) -> int:
    return self.diameter()


# --- registry ---

_REGISTRY: dict[str, GroupOracle] = {}
_REGISTRY_LOCK = threading.Lock()


def intern(oracle: GroupOracle) -> Any:
  """Return the shared instance for this descriptor so ball caches are reused."""
  with _REGISTRY_LOCK:
    return _REGISTRY.setdefault(oracle.descriptor, oracle)


def _split_wreath(body: str) -> tuple[str, str]:
  if "~" not in body:
    raise InputError(f"Wreath spec must look like W:A~B, got W:{body}")
  top, base = body.split("~", 1)
  return top.strip(), base.strip()


def parse_group(spec: str) -> Any:
  """Parse a group spec string.

  Grammar: ``Z``, ``Z^r`` / ``Zr:r`` (free abelian), ``Zq`` / ``C:q`` (cyclic), ``P3``,
  ``S:r,d`` (free solvable), ``F:r`` (free), ``W:A~B`` (restricted wreath product A wr B).
  """
  from ._magnus import FreeSolvable
  from ._wreath import WreathProduct

  text = spec.strip()
  try:
    if text.startswith("W:"):
      top_spec, base_spec = _split_wreath(text[2:])
      if top_spec.startswith("W:") or base_spec.startswith("W:"):
        raise InputError("Iterated wreath products are not supported")
      return intern(WreathProduct(parse_group(top_spec), parse_group(base_spec)))
    if text == "Z":
      return intern(FreeAbelian(1))
    if text.startswith("Z^"):
      return intern(FreeAbelian(int(text[2:])))
    if text.startswith("Zr:"):
      return intern(FreeAbelian(int(text[3:])))
    if re.fullmatch(r"Z\d+", text):
      return intern(Cyclic(int(text[1:])))
    if text.startswith("C:"):
      return intern(Cyclic(int(text[2:])))
    if text == "P3":
      return intern(Perm3())
    if text.startswith("F:"):
      return intern(FreeGroup(int(text[2:])))
    if text.startswith("S:"):
      rank, depth = (int(part) for part in text[2:].split(","))
      return FreeSolvable.get(rank, depth)
  except ValueError as e:
    if isinstance(e, InputError):
      raise
    raise InputError(f"Bad group spec {spec!r}: {e}") from e
  raise InputError(f"Unknown group spec {spec!r}")


# --- module-level operations ---


def group_op(G: GroupOracle, kind: OpKind, a: Element = None, b: Element = None) -> Element:
  """Multiply, invert, or produce the identity in G."""
  if kind == "identity":
    return G.identity()
  if kind == "invert":
    return G.inv(G.check(a))
  if kind == "multiply":
    return G.mul(G.check(a), G.check(b))
  raise InputError(f"Unknown group operation {kind!r}")


def bfs_ball(G: GroupOracle, radius: int) -> dict[Element, int]:
  """Return every element within `radius` of the identity, mapped to its exact distance."""
  if radius < 0:
    raise InputError(f"Radius must be non-negative, got {radius}")
  return {g: k for k in range(radius + 1) for g in G.sphere(k)}


def word_length(G: GroupOracle, g: Element) -> int:
  return G.word_length(g)


def cyclic_power_solve(G: GroupOracle, b: Element, x: Element, search_bound: int) -> int | None:
  """Return k with b^k = x and |k| <= search_bound, or None.

  For finite-order b the search runs over 0..order-1 instead. When search_bound is at least
  G.membership_radius(x), None proves x is not in <b>.
  """
  G.check(b)
  G.check(x)
  k = G.solve_power(b, x, search_bound)
  if k is not None and G.power(b, k) != x:
    raise InternalError(f"Power search returned an unverifiable exponent {k}")
  return k
