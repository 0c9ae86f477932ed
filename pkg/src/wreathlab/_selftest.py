"""Built-in consistency suites run by `wreathlab selftest`."""

from __future__ import annotations

import random
import time
from typing import Callable

from ._exceptions import InputError
from ._fox import GroupRingElement, augmentation, fox_derive, fox_derive_element
from ._groups import FreeGroup, intern
from ._magnus import FreeSolvable, magnus_algebraic, magnus_geometric
from ._telemetry import track
from ._utils import logger
from ._words import ReducedWord, random_word
from ._wreath import wreath_word_length
from .models import SuiteResult

_MAX_FAILURES = 5


class _Checks:
  def __init__(self, name: str):
    self.name = name
    self.checked = 0
    self.failures: list[str] = []
    self._start = time.monotonic()

  def expect(self, condition: bool, describe: Callable[[], str]) -> None:
    self.checked += 1
    if not condition and len(self.failures) < _MAX_FAILURES:
      self.failures.append(describe())

  def result(self) -> SuiteResult:
    elapsed = int((time.monotonic() - self._start) * 1000)
    passed = not self.failures
    logger.info(f"selftest {self.name}: {self.checked} checks, {'ok' if passed else 'FAILED'}")
    return SuiteResult(name=self.name, passed=passed, checked=self.checked, failures=self.failures, duration_ms=elapsed)


def _fox_expansion(a: GroupRingElement, rank: int) -> GroupRingElement:
  F = a.oracle
  one = GroupRingElement.one(F)
  total = GroupRingElement.zero(F)
  for i in range(1, rank + 1):
    x_i = GroupRingElement.of(F, ReducedWord.generator(rank, i))
    total = total + fox_derive_element(a, i) * (x_i - one)
  return total


@track("selftest_fundamental_formula")
def fundamental_formula_suite(seed: int = 0, words: int = 1000, combinations: int = 200) -> SuiteResult:
  """a - augmentation(a) 1 = sum_i da/dx_i (x_i - 1) over Z(F), for words and 3-term combinations."""
  rng = random.Random(seed)
  checks = _Checks("fundamental-formula")
  for _ in range(words):
    rank = rng.randint(1, 3)
    w = random_word(rng, rank, 12)
    F = intern(FreeGroup(rank))
    one = GroupRingElement.one(F)
    expansion = GroupRingElement.zero(F)
    for i in range(1, rank + 1):
      expansion = expansion + fox_derive(w, i) * (GroupRingElement.of(F, ReducedWord.generator(rank, i)) - one)
    checks.expect(expansion == GroupRingElement.of(F, w) - one, lambda w=w: f"word {w.format()}")
  for _ in range(combinations):
    rank = rng.randint(1, 3)
    F = intern(FreeGroup(rank))
    a = GroupRingElement(F, [(random_word(rng, rank, 12), rng.randint(-5, 5)) for _ in range(3)])
    lhs = a - GroupRingElement.one(F).scale(augmentation(a))
    checks.expect(lhs == _fox_expansion(a, rank), lambda a=a: f"ring element {a.format()}")
  return checks.result()


@track("selftest_embedding_equivalence")
def embedding_equivalence_suite(seed: int = 0, words: int = 500, rank: int = 2, depth: int = 1) -> SuiteResult:
  """The Fox-derivative and path-tracing Magnus images agree coefficient for coefficient."""
  rng = random.Random(seed)
  checks = _Checks("embedding-equivalence")
  for _ in range(words):
    w = random_word(rng, rank, 10)
    image = magnus_algebraic(w, rank, depth)
    checks.expect(image.to_wreath() == magnus_geometric(w, rank, depth), lambda w=w: f"images differ on {w.format()}")
    checks.expect(image.satisfies_fundamental_formula(), lambda w=w: f"fundamental formula fails on {w.format()}")
  return checks.result()


@track("selftest_bi_lipschitz")
def bi_lipschitz_suite(radius: int = 4, rank: int = 2) -> SuiteResult:
  """Every g of S_{r,2} with |g| <= radius satisfies |g|/2 <= |phi(g)| <= 2|g| in Z^r wr Z^r."""
  S = FreeSolvable.get(rank, 2)
  checks = _Checks("bi-lipschitz")
  for k in range(radius + 1):
    for g in S.sphere(k):
      image = wreath_word_length(g.nf)  # pyright: ignore[reportArgumentType]
      checks.expect(k <= 2 * image <= 4 * k, lambda g=g, image=image, k=k: f"{S.format(g)}: |g| = {k}, |phi(g)| = {image}")
  return checks.result()


SUITES: dict[str, Callable[[int], SuiteResult]] = {
  "fundamental-formula": lambda seed: fundamental_formula_suite(seed),
  "embedding-equivalence": lambda seed: embedding_equivalence_suite(seed),
  "bi-lipschitz": lambda seed: bi_lipschitz_suite(),
}


def run_selftest(names: list[str] | None = None, seed: int = 0) -> list[SuiteResult]:
  """Run the named suites (all by default) in a fixed order."""
  selected = list(SUITES) if not names else names
  unknown = [name for name in selected if name not in SUITES]
  if unknown:
    raise InputError(f"Unknown selftest suite {unknown[0]!r}; expected one of {', '.join(SUITES)}")
  return [SUITES[name](seed) for name in selected]
