"""Freely reduced words over x1..xr and their inverses."""

from __future__ import annotations

import random
import re
from typing import Iterable, Iterator, Sequence

from ._exceptions import InputError

_TOKEN = re.compile(r"^([xX])(\d+)$")

Letter = int
"""A signed generator index: +i stands for x_i, -i for its inverse X_i."""


class ReducedWord:
  """A freely reduced word of the free group of a given rank.

  Words are immutable and hashable. Build them with `reduce`, `parse_word` or the group operations
  below; the constructor rejects letters that are out of range or cancel.
  """

  __slots__ = ("rank", "letters", "_hash")

  def __init__(self, rank: int, letters: Sequence[Letter] = ()):
    """Initializes a word and checks that it is freely reduced."""
    if rank < 1:
      raise InputError(f"Rank must be positive, got {rank}")
    word = tuple(letters)
    for pos, letter in enumerate(word):
      if letter == 0 or abs(letter) > rank:
        raise InputError(f"Generator index {abs(letter)} outside 1..{rank}")
      if pos and word[pos - 1] == -letter:
        raise InputError(f"Word is not freely reduced at position {pos}")
    self.rank = rank
    self.letters = word
    self._hash = hash((rank, word))

  @classmethod
  def identity(cls, rank: int) -> ReducedWord:
    return cls(rank)

  @classmethod
  def generator(cls, rank: int, index: int, sign: int = 1) -> ReducedWord:
    return cls(rank, (index if sign > 0 else -index,))

  def __len__(self) -> int:
    return len(self.letters)

  def __iter__(self) -> Iterator[Letter]:
    return iter(self.letters)

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, ReducedWord):
      return NotImplemented
    return self.rank == other.rank and self.letters == other.letters

  def __lt__(self, other: ReducedWord) -> bool:
    return self.sort_key() < other.sort_key()

  def __hash__(self) -> int:
    return self._hash

  def __repr__(self) -> str:
    return f"ReducedWord({self.rank}, {self.format()!r})"

  def __str__(self) -> str:
    return self.format()

  def __mul__(self, other: ReducedWord) -> ReducedWord:
    if self.rank != other.rank:
      raise InputError(f"Cannot multiply words of rank {self.rank} and {other.rank}")
    left = list(self.letters)
    right = other.letters
    k = 0
    while left and k < len(right) and left[-1] == -right[k]:
      left.pop()
      k += 1
    return ReducedWord(self.rank, (*left, *right[k:]))

  def __pow__(self, exponent: int) -> ReducedWord:
    base = self if exponent >= 0 else self.inverse()
    result = ReducedWord.identity(self.rank)
    for _ in range(abs(exponent)):
      result = result * base
    return result

  def inverse(self) -> ReducedWord:
    return ReducedWord(self.rank, tuple(-letter for letter in reversed(self.letters)))

  def is_identity(self) -> bool:
    return not self.letters

  def pairs(self) -> list[tuple[int, int]]:
    """Return the letters as (index, sign) pairs."""
    return [(abs(letter), 1 if letter > 0 else -1) for letter in self.letters]

  def sort_key(self) -> tuple[int, tuple[int, ...]]:
    """Shortlex key: length first, then x1 < X1 < x2 < X2 < ..."""
    return (len(self.letters), tuple(2 * abs(letter) - (letter > 0) for letter in self.letters))

  def format(self) -> str:
    if not self.letters:
      return "e"
    return " ".join(f"x{letter}" if letter > 0 else f"X{-letter}" for letter in self.letters)


def _tokenize(text: str) -> list[Letter]:
  stripped = text.strip()
  if stripped in ("", "e", "1"):
    return []
  letters: list[Letter] = []
  for token in stripped.split():
    match = _TOKEN.match(token)
    if not match:
      raise InputError(f"Bad word token {token!r}; expected x<i> or X<i>")
    index = int(match.group(2))
    if index < 1:
      raise InputError(f"Generator index must be at least 1 in {token!r}")
    letters.append(index if match.group(1) == "x" else -index)
  return letters


def reduce(rank: int, raw: Iterable[Letter | tuple[int, int]] | str) -> ReducedWord:
  """Freely reduce a sequence of signed generator indices.

  Args:
      rank: Rank of the free group.
      raw: Signed indices, (index, sign) pairs, or a word literal such as ``"x1 X2"``.

  Returns:
      The unique freely reduced word equal to the input.
  """
  items = _tokenize(raw) if isinstance(raw, str) else raw
  stack: list[Letter] = []
  for item in items:
    letter = item[0] * (1 if item[1] > 0 else -1) if isinstance(item, tuple) else item
    if letter == 0 or abs(letter) > rank:
      raise InputError(f"Generator index {abs(letter)} outside 1..{rank}")
    if stack and stack[-1] == -letter:
      stack.pop()
    else:
      stack.append(letter)
  return ReducedWord(rank, stack)


def parse_word(text: str, rank: int | None = None) -> ReducedWord:
  """Parse a word literal; the rank defaults to the largest index used (at least 1)."""
  letters = _tokenize(text)
  if rank is None:
    rank = max((abs(letter) for letter in letters), default=1)
  return reduce(rank, letters)


def commutator(u: ReducedWord, v: ReducedWord) -> ReducedWord:
  """Return [u, v] = u v u^-1 v^-1."""
  return u * v * u.inverse() * v.inverse()


def random_word(rng: random.Random, rank: int, max_length: int, min_length: int = 0) -> ReducedWord:
  """Draw a reduced word whose length is uniform in [min_length, max_length]."""
  length = rng.randint(min_length, max_length)
  letters: list[Letter] = []
  while len(letters) < length:
    letter = rng.choice([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)])
    if letters and letters[-1] == -letter:
      continue
    letters.append(letter)
  return ReducedWord(rank, letters)
