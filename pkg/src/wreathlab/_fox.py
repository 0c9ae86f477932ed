"""Integer group rings, Fox derivatives and the kernel decomposition.

Fox derivatives follow the left-derivation rule d(uv) = du + u dv, with
d(x_i)/dx_i = 1 and d(x_i^-1)/dx_i = -x_i^-1.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Any, Callable, Iterable, Iterator, Literal, Mapping

from ._exceptions import InputError, InternalError
from ._groups import Element, FreeGroup, GroupOracle, intern
from ._words import ReducedWord

RingOp = Literal["add", "subtract", "multiply", "scale"]


class GroupRingElement:
  """A finite integer combination of elements of one group."""

  __slots__ = ("oracle", "_terms", "_hash")

  def __init__(self, oracle: GroupOracle, terms: Mapping[Element, int] | Iterable[tuple[Element, int]] = ()):
    """Initializes the element, collecting repeated keys and dropping zero coefficients."""
    collected: dict[Element, int] = defaultdict(int)
    pairs = terms.items() if isinstance(terms, Mapping) else terms
    for g, c in pairs:
      collected[oracle.check(g)] += c
    self.oracle = oracle
    self._terms = {g: c for g, c in collected.items() if c}
    self._hash: int | None = None

  @classmethod
  def _trusted(cls, oracle: GroupOracle, terms: dict[Element, int]) -> GroupRingElement:
    instance = cls.__new__(cls)
    instance.oracle = oracle
    instance._terms = {g: c for g, c in terms.items() if c}
    instance._hash = None
    return instance

  @classmethod
  def of(cls, oracle: GroupOracle, g: Element, coefficient: int = 1) -> GroupRingElement:
    return cls(oracle, [(g, coefficient)])

  @classmethod
  def one(cls, oracle: GroupOracle) -> GroupRingElement:
    return cls.of(oracle, oracle.identity())

  @classmethod
  def zero(cls, oracle: GroupOracle) -> GroupRingElement:
    return cls(oracle)

  def coefficient(self, g: Element) -> int:
    return self._terms.get(g, 0)

  def terms(self) -> Iterator[tuple[Element, int]]:
    return iter(self._terms.items())

  def support(self) -> frozenset[Element]:
    return frozenset(self._terms)

  def is_zero(self) -> bool:
    return not self._terms

  def __len__(self) -> int:
    return len(self._terms)

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, GroupRingElement):
      return NotImplemented
    return self.oracle == other.oracle and self._terms == other._terms

  def __hash__(self) -> int:
    if self._hash is None:
      self._hash = hash(frozenset(self._terms.items()))
    return self._hash

  def __repr__(self) -> str:
    return f"GroupRingElement({self.oracle.descriptor}, {self.format()!r})"

  def _same_ring(self, other: GroupRingElement) -> None:
    if self.oracle != other.oracle:
      raise InputError(f"Ring elements over {self.oracle.descriptor} and {other.oracle.descriptor} cannot be combined")

  def __add__(self, other: GroupRingElement) -> GroupRingElement:
    self._same_ring(other)
    terms = dict(self._terms)
    for g, c in other._terms.items():
      terms[g] = terms.get(g, 0) + c
    return GroupRingElement._trusted(self.oracle, terms)

  def __neg__(self) -> GroupRingElement:
    return self.scale(-1)

  def __sub__(self, other: GroupRingElement) -> GroupRingElement:
    return self + (-other)

  def __mul__(self, other: GroupRingElement | int) -> GroupRingElement:
    if isinstance(other, int):
      return self.scale(other)
    self._same_ring(other)
    G = self.oracle
    terms: dict[Element, int] = defaultdict(int)
    for g, c in self._terms.items():
      for h, d in other._terms.items():
        terms[G.mul(g, h)] += c * d
    return GroupRingElement._trusted(G, terms)

  def __rmul__(self, other: int) -> GroupRingElement:
    return self.scale(other)

  def scale(self, k: int) -> GroupRingElement:
    return GroupRingElement._trusted(self.oracle, {g: k * c for g, c in self._terms.items()})

  def map_keys(self, fn: Callable[[Element], Element], target: GroupOracle) -> GroupRingElement:
    """Push every key through a homomorphism into `target` and collect coefficients."""
    return GroupRingElement(target, [(fn(g), c) for g, c in self._terms.items()])

  def format(self) -> str:
    """Text form: terms `c·<literal>` sorted by canonical key, or `0`."""
    if not self._terms:
      return "0"
    G = self.oracle
    ordered = sorted(self._terms.items(), key=lambda kv: G.sort_key(kv[0]))
    return " ".join(f"{c}·{G.format(g)}" for g, c in ordered)


def ring_combine(kind: RingOp, p: GroupRingElement, q: GroupRingElement | int) -> GroupRingElement:
  """Add, subtract, multiply or scale group ring elements."""
  if kind == "scale":
    if not isinstance(q, int):
      raise InputError("scale expects an integer factor")
    return p.scale(q)
  if isinstance(q, int):
    raise InputError(f"{kind} expects a ring element operand")
  if kind == "add":
    return p + q
  if kind == "subtract":
    return p - q
  if kind == "multiply":
    return p * q
  raise InputError(f"Unknown ring operation {kind!r}")


def augmentation(p: GroupRingElement) -> int:
  return sum(c for _, c in p.terms())


def _check_index(rank: int, i: int) -> None:
  if not 1 <= i <= rank:
    raise InputError(f"Generator index {i} outside 1..{rank}")


def fox_derive(w: ReducedWord, i: int) -> GroupRingElement:
  """Fox derivative of w with respect to x_i, as an element of Z(F)."""
  _check_index(w.rank, i)
  F = intern(FreeGroup(w.rank))
  terms: dict[Element, int] = defaultdict(int)
  letters = w.letters
  for k, letter in enumerate(letters):
    if letter == i:
      terms[ReducedWord(w.rank, letters[:k])] += 1
    elif letter == -i:
      terms[ReducedWord(w.rank, letters[: k + 1])] -= 1
  return GroupRingElement._trusted(F, terms)


def fox_derive_element(a: GroupRingElement, i: int) -> GroupRingElement:
  """Linear extension of fox_derive to Z(F)."""
  if not isinstance(a.oracle, FreeGroup):
    raise InputError(f"Fox derivatives are taken in Z(F), not Z({a.oracle.descriptor})")
  result = GroupRingElement.zero(a.oracle)
  for w, c in a.terms():
    result = result + fox_derive(w, i).scale(c)
  return result


class QuotientMap:
  """The quotient map F -> target for a target that can evaluate words (abelianization or S_{r,d})."""

  def __init__(self, target: GroupOracle):
    """Initializes the map; the target must provide `from_word`."""
    if not hasattr(target, "from_word"):
      raise InputError(f"{target.descriptor} is not a quotient of a free group")
    self.target = target

  def __call__(self, w: ReducedWord) -> Any:
    return self.target.from_word(w)  # pyright: ignore[reportAttributeAccessIssue]


def fox_star(w: ReducedWord, i: int, target: GroupOracle, alpha: QuotientMap | None = None) -> GroupRingElement:
  """Image of the Fox derivative of w in Z(target)."""
  rank = getattr(target, "rank", None)
  if rank != w.rank:
    raise InputError(f"Word of rank {w.rank} does not map to {target.descriptor}")
  alpha = alpha or QuotientMap(target)
  return fox_derive(w, i).map_keys(alpha, target)


def kernel_decompose(a: GroupRingElement, alpha_bar: Callable[[Element], Element] | None = None) -> list[tuple[Element, Element]]:
  """Write a kernel element of Z(F/N') -> Z(F/N) as a sum of r_j (h_j - 1) with h_j in N/N'.

  Terms are grouped by their image under alpha_bar. Inside a group the member x with the smallest
  canonical key is fixed and every other term b_g g becomes b_g x (x^-1 g - 1); a negative
  multiplicity is rewritten as g (g^-1 x - 1).

  Args:
      a: Element of the group ring of F/N'.
      alpha_bar: The quotient map F/N' -> F/N; defaults to the oracle's own `quotient`.

  Returns:
      Pairs (r_j, h_j), repeated according to multiplicity.
  """
  G = a.oracle
  if alpha_bar is None:
    if not hasattr(G, "quotient"):
      raise InputError(f"{G.descriptor} has no default quotient map")
    alpha_bar = G.quotient  # pyright: ignore[reportAttributeAccessIssue]
  assert alpha_bar is not None

  cosets: dict[Element, list[tuple[Element, int]]] = defaultdict(list)
  for g, c in a.terms():
    cosets[alpha_bar(g)].append((g, c))

  pairs: list[tuple[Element, Element]] = []
  groups = [sorted(members, key=lambda gc: G.sort_key(gc[0])) for members in cosets.values()]
  groups.sort(key=lambda members: G.sort_key(members[0][0]))
  for members in groups:
    total = sum(c for _, c in members)
    if total:
      image = alpha_bar(members[0][0])
      raise InputError(f"Element is not in the kernel: image coefficient {total} at {_format_any(image)}")
    x = members[0][0]
    x_inv = G.inv(x)
    for g, c in members[1:]:
      h = G.mul(x_inv, g)
      if c > 0:
        pairs.extend([(x, h)] * c)
      else:
        pairs.extend([(g, G.inv(h))] * (-c))

  one = GroupRingElement.one(G)
  rebuilt = GroupRingElement.zero(G)
  for r, h in pairs:
    rebuilt = rebuilt + GroupRingElement.of(G, r) * (GroupRingElement.of(G, h) - one)
  if rebuilt != a:
    raise InternalError("Kernel decomposition does not reconstruct its input")
  trivial = alpha_bar(G.identity())
  if any(alpha_bar(h) != trivial for _, h in pairs):
    raise InternalError("Kernel decomposition produced a factor outside the kernel")
  return pairs


def _format_any(value: Element) -> str:
  return value.format() if hasattr(value, "format") else repr(value)
