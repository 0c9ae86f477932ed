"""The Magnus embedding and the free solvable tower S_{r,d} = F / F^(d).

S_{r,1} is Z^r. For d >= 2 an element of S_{r,d} is identified with its image under the geometric
Magnus embedding S_{r,d} -> Z^r wr S_{r,d-1}, which is computed by tracing the word's path through
the Cayley graph of S_{r,d-1} and netting the edge crossings. Equality in the tower is equality of
these images, so the whole tower is built recursively from Z^r.
"""

from __future__ import annotations

import functools
from typing import Any

from ._exceptions import InputError
from ._fox import GroupRingElement, QuotientMap, fox_star
from ._groups import Element, FreeAbelian, GroupOracle, intern
from ._utils import canonical_json, logger
from ._words import ReducedWord, parse_word
from ._wreath import FinSuppMap, WreathElement, wreath_inv, wreath_mul

_GEOMETRIC_CACHE_SIZE = 1 << 16


class SolvableElement:
  """An element of S_{r,d}: a representative word together with its normal form.

  The normal form is the abelianization vector for d = 1 and a WreathElement of Z^r wr S_{r,d-1}
  otherwise. Two elements are equal exactly when their normal forms are.
  """

  __slots__ = ("rank", "depth", "word", "nf", "_key")

  def __init__(self, rank: int, depth: int, word: ReducedWord, nf: tuple[int, ...] | WreathElement):
    self.rank = rank
    self.depth = depth
    self.word = word
    self.nf = nf
    self._key: Any = None

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, SolvableElement):
      return NotImplemented
    return self.rank == other.rank and self.depth == other.depth and self.nf == other.nf

  def __hash__(self) -> int:
    return hash(self.nf)

  def __repr__(self) -> str:
    return f"SolvableElement(S:{self.rank},{self.depth}, {self.word.format()!r})"

  def is_identity(self) -> bool:
    if self.depth == 1:
      return not any(self.nf)  # pyright: ignore[reportArgumentType]
    return self.nf.lamp.is_trivial() and self.nf.cursor.is_identity()  # pyright: ignore[reportAttributeAccessIssue]

  def sort_key(self) -> Any:
    """Total order by normal form, cached on the element."""
    if self._key is None:
      if self.depth == 1:
        self._key = self.nf
      else:
        nf: WreathElement = self.nf  # pyright: ignore[reportAssignmentType]
        self._key = (nf.cursor.sort_key(), tuple((k.sort_key(), v) for k, v in nf.lamp.sorted_items()))
    return self._key


class FreeSolvable(GroupOracle):
  """The free solvable group S_{r,d} with generators x_1..x_r."""

  def __init__(self, rank: int, depth: int):
    super().__init__()
    if rank < 1:
      raise InputError(f"Rank must be positive, got {rank}")
    if depth < 1:
      raise InputError(f"Derived length must be positive, got {depth}")
    self.rank = rank
    self.depth = depth
    self.is_abelian = depth == 1
    self.closed_form_length = depth == 1
    self._identity: SolvableElement | None = None
    self._gens: dict[int, SolvableElement] = {}

  @classmethod
  def get(cls, rank: int, depth: int) -> FreeSolvable:
    """Shared instance of S_{rank,depth}."""
    return intern(cls(rank, depth))

  @property
  def descriptor(self) -> str:
    return f"S:{self.rank},{self.depth}"

  @property
  def lamp_group(self) -> FreeAbelian:
    return intern(FreeAbelian(self.rank))

  def lower(self) -> FreeSolvable:
    """S_{r,d-1}, the cursor group of the normal form."""
    if self.depth == 1:
      raise InputError("S_{r,1} has no lower stage in the tower")
    return FreeSolvable.get(self.rank, self.depth - 1)

  # --- group law ---

  def identity(self) -> SolvableElement:
    if self._identity is None:
      word = ReducedWord.identity(self.rank)
      if self.depth == 1:
        nf: tuple[int, ...] | WreathElement = (0,) * self.rank
      else:
        lower = self.lower()
        nf = WreathElement(FinSuppMap._trusted(lower, self.lamp_group, {}), lower.identity())
      self._identity = SolvableElement(self.rank, self.depth, word, nf)
    return self._identity

  def generator(self, index: int, sign: int = 1) -> SolvableElement:
    letter = index if sign > 0 else -index
    cached = self._gens.get(letter)
    if cached is None:
      cached = self.from_word(ReducedWord(self.rank, (letter,)))
      self._gens[letter] = cached
    return cached

  def generators(self) -> list[SolvableElement]:
    return [self.generator(i) for i in range(1, self.rank + 1)]

  def symmetric_generators(self) -> list[SolvableElement]:
    return [self.generator(i, sign) for i in range(1, self.rank + 1) for sign in (1, -1)]

  def mul(self, a: SolvableElement, b: SolvableElement) -> SolvableElement:
    self.check(a)
    self.check(b)
    if b.is_identity():
      return a
    if a.is_identity():
      return b
    word = a.word * b.word
    if self.depth == 1:
      nf: tuple[int, ...] | WreathElement = tuple(x + y for x, y in zip(a.nf, b.nf))  # pyright: ignore[reportArgumentType]
    else:
      nf = wreath_mul(a.nf, b.nf)  # pyright: ignore[reportArgumentType]
    return SolvableElement(self.rank, self.depth, word, nf)

  def inv(self, a: SolvableElement) -> SolvableElement:
    self.check(a)
    if self.depth == 1:
      nf: tuple[int, ...] | WreathElement = tuple(-x for x in a.nf)  # pyright: ignore[reportGeneralTypeIssues]
    else:
      nf = wreath_inv(a.nf)  # pyright: ignore[reportArgumentType]
    return SolvableElement(self.rank, self.depth, a.word.inverse(), nf)

  def contains(self, a: Element) -> bool:
    return isinstance(a, SolvableElement) and a.rank == self.rank and a.depth == self.depth

  def is_identity(self, a: SolvableElement) -> bool:
    return self.check(a).is_identity()

  def sort_key(self, a: SolvableElement) -> Any:
    return a.sort_key()

  def parse(self, text: str) -> SolvableElement:
    return self.from_word(parse_word(text, self.rank))

  def format(self, a: SolvableElement) -> str:
    return self.check(a).word.format()

  def from_word(self, w: ReducedWord) -> SolvableElement:
    """The image of a word of F under F -> S_{r,d}."""
    if w.rank != self.rank:
      raise InputError(f"Word of rank {w.rank} does not map to {self.descriptor}")
    if self.depth == 1:
      return SolvableElement(self.rank, 1, w, self.lamp_group.from_word(w))
    return SolvableElement(self.rank, self.depth, w, magnus_geometric(w, self.rank, self.depth - 1))

  def quotient(self, a: SolvableElement) -> Element:
    """The image under S_{r,d} -> S_{r,d-1}; S_{r,0} is trivial and is represented by ()."""
    self.check(a)
    if self.depth == 1:
      return ()
    return a.nf.cursor  # pyright: ignore[reportAttributeAccessIssue]

  # --- metric and cyclic subgroups ---

  def word_length(self, a: SolvableElement) -> int:
    if self.depth == 1:
      return sum(abs(x) for x in self.check(a).nf)  # pyright: ignore[reportGeneralTypeIssues]
    return super().word_length(a)

  def order(self, a: SolvableElement) -> int | None:
    return 1 if self.check(a).is_identity() else None

  def membership_radius(self, x: SolvableElement) -> int:
    self.check(x)
    if self.depth == 1:
      return sum(abs(v) for v in x.nf)  # pyright: ignore[reportGeneralTypeIssues]
    return solvable_cyclic_distortion_bound(len(x.word))

  def solve_power(self, b: SolvableElement, x: SolvableElement, search_bound: int) -> int | None:
    if self.depth == 1:
      k = self.lamp_group.solve_power(b.nf, x.nf, search_bound)
      return k
    return super().solve_power(b, x, search_bound)

  def distortion_bound(self, b: SolvableElement, n: int) -> int | None:
    if self.check(b).is_identity():
      return None
    if self.depth == 1:
      return n // sum(abs(v) for v in b.nf)  # pyright: ignore[reportGeneralTypeIssues]
    return solvable_cyclic_distortion_bound(n)

  def clf_bound(self, n: int) -> int:
    if self.depth == 1:
      return 0
    return (16 * n * n + 8 * n) * (16 * n + 1)

  def conjugator(self, b: SolvableElement, c: SolvableElement) -> SolvableElement | None:
    if self.depth == 1:
      return self.identity() if b == c else None
    from ._conjugacy import solvable_conjugacy

    return solvable_conjugacy(b, c)


class MagnusImage:
  """The algebraic Magnus image (alpha(w), sum of d*w/dx_i t_i) of a word, over Z(S_{r,d})."""

  __slots__ = ("group", "quotient", "coordinates")

  def __init__(self, group: FreeSolvable, quotient: SolvableElement, coordinates: list[GroupRingElement]):
    if len(coordinates) != group.rank:
      raise InputError(f"Expected {group.rank} coordinates, got {len(coordinates)}")
    self.group = group
    self.quotient = quotient
    self.coordinates = coordinates

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, MagnusImage):
      return NotImplemented
    return self.group == other.group and self.quotient == other.quotient and self.coordinates == other.coordinates

  def __hash__(self) -> int:
    return hash((self.quotient, tuple(self.coordinates)))

  def __repr__(self) -> str:
    coords = ", ".join(c.format() for c in self.coordinates)
    return f"MagnusImage({self.group.format(self.quotient)}; {coords})"

  def is_identity(self) -> bool:
    return self.quotient.is_identity() and all(c.is_zero() for c in self.coordinates)

  def to_wreath(self) -> WreathElement:
    """Read the coordinates as a lamp configuration of Z^r wr S_{r,d}."""
    keys: set[SolvableElement] = set()
    for coordinate in self.coordinates:
      keys |= coordinate.support()
    lamps = {g: tuple(c.coefficient(g) for c in self.coordinates) for g in keys}
    return WreathElement(FinSuppMap(self.group, self.group.lamp_group, lamps), self.quotient)

  def satisfies_fundamental_formula(self) -> bool:
    """Check alpha(w) - 1 = sum of coordinate_i (alpha(x_i) - 1) in Z(S_{r,d})."""
    G = self.group
    one = GroupRingElement.one(G)
    total = GroupRingElement.zero(G)
    for i, coordinate in enumerate(self.coordinates, start=1):
      total = total + coordinate * (GroupRingElement.of(G, G.generator(i)) - one)
    return total == GroupRingElement.of(G, self.quotient) - one


def magnus_algebraic(w: ReducedWord, r: int, d: int) -> MagnusImage:
  """The Magnus image of w through Fox derivatives, with N = F^(d)."""
  if w.rank != r:
    raise InputError(f"Word of rank {w.rank} given for rank {r}")
  S = FreeSolvable.get(r, d)
  alpha = QuotientMap(S)
  return MagnusImage(S, alpha(w), [fox_star(w, i, S, alpha) for i in range(1, r + 1)])


def magnus_geometric(w: ReducedWord, r: int, d: int) -> WreathElement:
  """The geometric Magnus image of w in Z^r wr S_{r,d}.

  Traces the path of w from e through the Cayley graph of S_{r,d}: a letter x_i adds the unit
  vector e_i at the vertex it leaves, a letter X_i subtracts e_i at the vertex it arrives at.

  Args:
      w: A reduced word of rank r.
      r: Rank.
      d: Derived length of the cursor group.

  Returns:
      The lamp configuration of net edge crossings, with cursor alpha(w).
  """
  if w.rank != r:
    raise InputError(f"Word of rank {w.rank} given for rank {r}")
  if d < 1:
    raise InputError(f"Derived length must be positive, got {d}")
  return _geometric(w, d)


@functools.lru_cache(maxsize=_GEOMETRIC_CACHE_SIZE)
def _geometric(w: ReducedWord, d: int) -> WreathElement:
  S = FreeSolvable.get(w.rank, d)
  counts: dict[SolvableElement, list[int]] = {}
  current = S.identity()
  for letter in w.letters:
    i = abs(letter)
    if letter > 0:
      counts.setdefault(current, [0] * w.rank)[i - 1] += 1
      current = S.mul(current, S.generator(i))
    else:
      current = S.mul(current, S.generator(i, -1))
      counts.setdefault(current, [0] * w.rank)[i - 1] -= 1
  lamps = {g: tuple(v) for g, v in counts.items() if any(v)}
  return WreathElement(FinSuppMap._trusted(S, S.lamp_group, lamps), current)


def solvable_normal_form(w: ReducedWord, r: int, d: int) -> SolvableElement:
  if w.rank != r:
    raise InputError(f"Word of rank {w.rank} given for rank {r}")
  return FreeSolvable.get(r, d).from_word(w)


def normal_form_data(a: SolvableElement) -> Any:
  """JSON-ready normal form: an integer list for d = 1, nested wreath JSON objects above.

  At d = 2 positions are Z^r literals; higher up they are themselves nested objects.
  """
  if a.depth == 1:
    return list(a.nf)  # pyright: ignore[reportArgumentType]
  nf: WreathElement = a.nf  # pyright: ignore[reportAssignmentType]
  return {
    "base": _position(nf.cursor),
    "lamps": [{"at": _position(k), "val": nf.top.format(v)} for k, v in nf.lamp.sorted_items()],
  }


def _position(g: SolvableElement) -> Any:
  if g.depth == 1:
    return intern(FreeAbelian(g.rank)).format(g.nf)
  return normal_form_data(g)


def normal_form_json(a: SolvableElement) -> str:
  return canonical_json(normal_form_data(a))


def divergence(u: WreathElement) -> dict[Element, int]:
  """Net outflow of the lamp flow at every vertex: sum_i f_i(g) - sum_i f_i(g x_i^-1).

  The top group must be Z^r and the base must be generated by r elements x_1..x_r.
  """
  G = u.base
  gens = G.generators()
  top = u.top
  if not isinstance(top, FreeAbelian) or top.rank != len(gens):
    raise InputError(f"Divergence needs Z^r lamps over an r-generated base, got {top.descriptor} over {G.descriptor}")
  flow: dict[Element, int] = {}
  for g, vector in u.lamp.items():
    for x_i, value in zip(gens, vector):
      if value:
        flow[g] = flow.get(g, 0) + value
        head = G.mul(g, x_i)
        flow[head] = flow.get(head, 0) - value
  result = {g: value for g, value in flow.items() if value}
  logger.debug(f"divergence over {G.descriptor}: {len(result)} non-zero vertices")
  return result


def solvable_cyclic_distortion_bound(n: int) -> int:
  """Cyclic subgroups of free solvable groups are undistorted: |k| <= 2n whenever |b^k| <= n."""
  if n < 0:
    raise InputError(f"Length must be non-negative, got {n}")
  return 2 * n
