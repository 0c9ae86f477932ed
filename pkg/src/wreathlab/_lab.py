"""Experiments on conjugator length: distortion, lower-bound witness families, exhaustive search and bounds."""

from __future__ import annotations

import asyncio
import csv
import io
import random
from typing import Any, Callable

from nanoid import generate

from ._conjugacy import base_conjugator, build_conjugator_h, coset_partition, oracle_of, verify_conjugator
from ._config import current_limits
from ._exceptions import InputError, ResourceError, WreathLabError
from ._groups import Element, FreeAbelian, GroupOracle, cyclic_power_solve, intern, parse_group
from ._magnus import FreeSolvable
from ._telemetry import track
from ._utils import ceil_div, logger
from ._wreath import FinSuppMap, WreathElement, WreathProduct, wreath_length_lower_bound, wreath_word_length
from .models import CSV_COLUMNS, BoundName, BoundParameters, DistortionRow, FamilyTag, ScanConfig, ScanRecord

# --- Distortion ---


class DistortionProfile:
  """Exact samples of delta(n) = max{m : |b^m| <= n} for n = 0..n_max."""

  def __init__(self, oracle: GroupOracle, b: Element, rows: list[DistortionRow]):
    self.oracle = oracle
    self.b = b
    self.rows = rows

  def __repr__(self) -> str:
    return f"DistortionProfile({self.oracle.descriptor}, {self.oracle.format(self.b)}, n_max={len(self.rows) - 1})"

  def delta(self, n: int) -> int:
    if not 0 <= n < len(self.rows):
      raise InputError(f"n = {n} outside the measured range 0..{len(self.rows) - 1}")
    return self.rows[n].delta

  def is_monotone(self) -> bool:
    return all(a.delta <= b.delta for a, b in zip(self.rows, self.rows[1:]))

  def violations(self) -> list[int]:
    """Every n whose measured delta(n) exceeds the group's proven bound."""
    return [row.n for row in self.rows if row.bound is not None and row.delta > row.bound]


def measure_distortion(G: GroupOracle, b: Element, n_max: int) -> DistortionProfile:
  """Measure the distortion of <b> in G up to n_max.

  Powers b^m are scanned upward, independently of any bound, and the scan stops once n_max + 1
  consecutive powers all lie outside the ball of radius n_max. The group's distortion bound is
  attached to each row afterwards and never limits the scan.

  Raises:
      InputError: If b has finite order or n_max is negative.
      ResourceError: If the scan passes the power_scan_cap limit.
  """
  G.check(b)
  if n_max < 0:
    raise InputError(f"n_max must be non-negative, got {n_max}")
  if G.order(b) is not None:
    raise InputError(f"{G.format(b)} has finite order; its distortion is unbounded")
  cap = current_limits().power_scan_cap
  lengths: list[tuple[int, int]] = []
  power, m, misses = G.identity(), 0, 0
  while misses <= n_max:
    m += 1
    if m > cap:
      raise ResourceError("power_scan_cap", cap, m, f"powers of {G.format(b)} in {G.descriptor}")
    power = G.mul(power, b)
    length = G.length_within(power, n_max)
    if length is None:
      misses += 1
    else:
      misses = 0
      lengths.append((m, length))
  rows = []
  for n in range(n_max + 1):
    delta = max((m for m, length in lengths if length <= n), default=0)
    rows.append(DistortionRow(n=n, delta=delta, bound=G.distortion_bound(b, n)))
  profile = DistortionProfile(G, b, rows)
  if profile.violations():
    logger.warning(f"{profile!r}: delta exceeds the distortion bound at n = {profile.violations()}")
  return profile


def centralizer_length(B: GroupOracle, x: Element, radius: int) -> tuple[Element, int] | None:
  """Shortest y with xy = yx and y^2 not in <x>, searched in the ball of the given radius."""
  if B.order(x) is not None:
    raise InputError(f"{B.format(x)} must have infinite order")
  for y in B.ordered_ball(radius):
    if not B.commutes(x, y):
      continue
    square = B.power(y, 2)
    if cyclic_power_solve(B, x, square, B.membership_radius(square)) is None:
      return y, B.word_length(y)
  return None


# --- Witness families ---


class WitnessFamily:
  """A pair u_n, v_n of conjugate wreath elements with a known conjugator and a proven lower bound."""

  def __init__(
    self,
    tag: FamilyTag,
    n: int,
    group: WreathProduct,
    u: WreathElement,
    v: WreathElement,
    conjugator: WreathElement,
    lower_bound: int,
    size_bounds: tuple[int, int] | None = None,
    extras: dict[str, int] | None = None,
  ):
    self.tag = tag
    self.n = n
    self.group = group
    self.u = u
    self.v = v
    self.conjugator = conjugator
    self.lower_bound = lower_bound
    self.size_bounds = size_bounds
    self.extras = extras or {}
    self.structured: list[tuple[int, int, int]] = []

  def __repr__(self) -> str:
    return f"WitnessFamily({self.tag}, n={self.n}, lower_bound={self.lower_bound})"

  def verified(self) -> bool:
    return verify_conjugator(self.u, self.v, self.conjugator, self.group)

  def conjugator_length(self) -> int:
    """Exact length of the known conjugator, or the certified counting bound for large supports."""
    return wreath_length_lower_bound(self.conjugator)[0]


def _require(condition: bool, message: str) -> None:
  if not condition:
    raise InputError(message)


def _not_in_cyclic(B: GroupOracle, x: Element, g: Element) -> bool:
  return cyclic_power_solve(B, x, g, B.membership_radius(g)) is None


def witness_centralizer(A: GroupOracle, B: GroupOracle, x: Element, y: Element, a: Element, n: int) -> WitnessFamily:
  """u_n = (f_n, x), v_n = (g_n, x) with Supp f_n = {e, y} and Supp g_n = {x^-delta, x^delta y}.

  Any conjugator needs a lamp supported on at least 2 delta(n) points, so its length is at least
  4 delta(n). The conjugator built here has cursor e.
  """
  B.check(x)
  B.check(y)
  A.check(a)
  _require(n >= 0, f"n must be non-negative, got {n}")
  _require(B.order(x) is None, f"{B.format(x)} must have infinite order")
  _require(B.commutes(x, y), "hypothesis y in Z_B(x), y^2 not in <x> fails: x and y do not commute")
  _require(_not_in_cyclic(B, x, B.power(y, 2)), "hypothesis y in Z_B(x), y^2 not in <x> fails: y^2 lies in <x>")

  W: WreathProduct = intern(WreathProduct(A, B))
  e = B.identity()
  delta = measure_distortion(B, x, n).delta(n)
  f = FinSuppMap(B, A, {e: a, y: a})
  g = FinSuppMap(B, A, {B.power(x, -delta): a, B.mul(B.power(x, delta), y): a})
  partition = coset_partition(f.support() | g.support(), x, B)
  h = build_conjugator_h(f, g, x, e, partition)

  shortest = centralizer_length(B, x, B.word_length(y))
  assert shortest is not None
  l_x = shortest[1]
  x_len = B.word_length(x)
  statement = 4 * (n + l_x + 1) + 2 * x_len
  proof = 4 * n + 4 * l_x + 2 * x_len + 4
  extras = {
    "delta": delta,
    "l_x": l_x,
    "support": len(h),
    "size_upper_statement": statement,
    "size_upper_proof": proof,
  }
  return WitnessFamily(
    "centralizer", n, W, WreathElement(f, x), WreathElement(g, x), WreathElement(h, e), 4 * delta, (n, proof), extras
  )


def witness_distortion(A: GroupOracle, B: GroupOracle, b: Element, a: Element, n: int) -> WitnessFamily:
  """The centralizer family for x = b^3 and y = b, recording the distortion of <b> itself.

  extras["argument"] is 4n + 4 + 10|b| and extras["distortion_lower"] is ceil((4 delta_b(n) - 12) / 3).
  """
  B.check(b)
  _require(B.order(b) is None, f"{B.format(b)} must have infinite order")
  family = witness_centralizer(A, B, B.power(b, 3), b, a, n)
  delta_b = measure_distortion(B, b, n).delta(n)
  family.tag = "distortion"
  family.extras["delta_b"] = delta_b
  family.extras["argument"] = 4 * n + 4 + 10 * B.word_length(b)
  family.extras["distortion_lower"] = bound_evaluate("distortion_lower", BoundParameters(n=n, delta=delta_b))
  return family


def witness_triangle(
  A: GroupOracle,
  B: GroupOracle,
  a: Element,
  n: int,
  x: Element | None = None,
  y: Element | None = None,
  k_range: int | None = None,
) -> WitnessFamily:
  """u_n = (f_n, y), v_n = (g_n, y) with f_n on x^-n..x^n and g_n on the diagonal x^i y^i.

  Every conjugator is (h, y^k) and h covers a triangle of at least n(n+1)/2 points, so conjugators
  have length at least n^2 + n. The structured conjugators for |k| <= k_range (default 2n) are
  built and recorded as (k, support size, length lower bound).
  """
  _require(n >= 0, f"n must be non-negative, got {n}")
  gens = B.generators()
  if x is None or y is None:
    _require(len(gens) >= 2, f"{B.descriptor} needs two generators to host Z^2")
    x = gens[0] if x is None else x
    y = gens[1] if y is None else y
  B.check(x)
  B.check(y)
  A.check(a)
  _require(B.commutes(x, y), "x and y must commute")
  _require(B.order(x) is None and B.order(y) is None, "x and y must have infinite order")
  _require(_not_in_cyclic(B, x, y) and _not_in_cyclic(B, y, x), "x and y must generate Z^2")

  W: WreathProduct = intern(WreathProduct(A, B))
  e = B.identity()
  f = FinSuppMap(B, A, {B.power(x, i): a for i in range(-n, n + 1)})
  g = FinSuppMap(B, A, {B.mul(B.power(x, i), B.power(y, i)): a for i in range(-n, n + 1)})
  partition = coset_partition(f.support() | g.support(), y, B)
  h = build_conjugator_h(f, g, y, e, partition)
  u, v = WreathElement(f, y), WreathElement(g, y)

  family = WitnessFamily(
    "triangle",
    n,
    W,
    u,
    v,
    WreathElement(h, e),
    n * n + n,
    (4 * n + 2, 4 * n * B.word_length(x) + B.word_length(y) + 2 * n + 1),
    {"support_lower": ceil_div(n * (n + 1), 2), "support": len(h)},
  )
  span = 2 * n if k_range is None else k_range
  for k in range(-span, span + 1):
    z = B.power(y, k)
    shifted = coset_partition(f.support() | {B.mul(z, p) for p in g.support()}, y, B)
    h_k = build_conjugator_h(f, g, y, z, shifted)
    family.structured.append((k, len(h_k), wreath_length_lower_bound(WreathElement(h_k, z))[0]))
  family.extras["min_structured_support"] = min(s for _, s, _ in family.structured)
  family.extras["min_structured_length"] = min(length for _, _, length in family.structured)
  return family


def witness_base(A: GroupOracle, B: GroupOracle, b: Element, c: Element) -> WitnessFamily:
  """u = (1, b), v = (1, c): a shortest wreath conjugator is (1, z) for a shortest B-conjugator z."""
  B.check(b)
  B.check(c)
  _require(B.order(b) is None, f"{B.format(b)} must have infinite order")
  z = base_conjugator(B, b, c)
  _require(z is not None, f"{B.format(b)} and {B.format(c)} are not conjugate in {B.descriptor}")
  W: WreathProduct = intern(WreathProduct(A, B))
  empty = FinSuppMap(B, A, {})
  shortest = min_conjugator_length(b, c, B.word_length(z), B)
  assert shortest is not None
  return WitnessFamily(
    "base",
    B.word_length(b) + B.word_length(c),
    W,
    WreathElement(empty, b),
    WreathElement(empty, c),
    WreathElement(empty, z),
    shortest,
    extras={"min_base_conj_len": shortest},
  )


# --- Exhaustive search ---


def _search_props(args: tuple[Any, ...], kwargs: dict[str, Any]) -> dict[str, Any]:
  cap = args[2] if len(args) > 2 else kwargs.get("cap")
  return {"cap": cap}


@track("min_conjugator_length", _search_props)
def min_conjugator_length(u: Element, v: Element, cap: int, group: GroupOracle | None = None) -> int | None:
  """Least |gamma| with u gamma = gamma v, or None when no conjugator has length <= cap."""
  G = group or oracle_of(u)
  G.check(u)
  G.check(v)
  if cap < 0:
    raise InputError(f"cap must be non-negative, got {cap}")
  for radius in range(cap + 1):
    sphere = G.sphere(radius)
    if not sphere:
      return None
    for gamma in sphere:
      if G.mul(u, gamma) == G.mul(gamma, v):
        return radius
  return None


# --- Bounds ---


def _need(params: BoundParameters, field: str) -> int:
  value = getattr(params, field)
  if value is None:
    raise InputError(f"Bound needs the parameter {field!r}")
  return value


def bound_evaluate(name: BoundName | str, params: BoundParameters) -> int:
  """Evaluate a closed-form conjugator length bound exactly.

  Every bound is 0 at n = 0, where the only instance is u = v = e.
  """
  n = params.n
  if name not in BOUND_NAMES:
    raise InputError(f"Unknown bound {name!r}; expected one of {', '.join(BOUND_NAMES)}")
  if n == 0:
    return 0
  P = params.radius()
  if name == "infinite_order":
    return (n + 1) * P * (2 * _need(params, "delta") + 1)
  if name == "finite_order":
    return P * (_need(params, "order") + 1) * (2 * n + params.clf_a + 1)
  if name == "wreath":
    return bound_evaluate("finite_order" if params.order is not None else "infinite_order", params)
  if name == "metabelian":
    return (16 * n * n + 8 * n) * (2 * _need(params, "cyclic_delta") + 1)
  if name == "free_solvable":
    return (16 * n * n + 8 * n) * (16 * n + 1)
  if name == "lattice_upper":
    return 7 * n * (n + 1) * (14 * n + 1)
  if name == "lattice_lower":
    return max(0, ceil_div((n + 14) * (n - 2), 256))
  if name == "centralizer_lower":
    return 4 * _need(params, "delta")
  if name == "distortion_lower":
    return max(0, ceil_div(4 * _need(params, "delta") - 12, 3))
  return 16 * n * n + 4 * n


BOUND_NAMES: tuple[str, ...] = (
  "infinite_order",
  "finite_order",
  "wreath",
  "metabelian",
  "free_solvable",
  "lattice_upper",
  "lattice_lower",
  "centralizer_lower",
  "distortion_lower",
  "torsion_free",
)


def upper_bounds(G: GroupOracle, u: Element, n: int) -> tuple[dict[str, int | None], int | None, int | None]:
  """Applicable upper bounds for an instance (u, v) with |u| + |v| = n, plus both radius variants."""
  if isinstance(G, WreathProduct):
    A, B = G.top, G.base
    b = u.cursor
    order = B.order(b)
    clf_b = B.clf_bound(n)
    p_support, p_trivializable = 2 * n, n + clf_b
    P = max(p_support, p_trivializable)
    params = BoundParameters(
      n=n,
      p=P,
      order=order,
      delta=B.distortion_bound(b, P) if order is None else None,
      clf_a=A.clf_bound(n),
      clf_b=clf_b,
    )
    bounds: dict[str, int | None] = {"finite_order" if order is not None else "infinite_order": None}
    for name in list(bounds) + ["wreath"]:
      bounds[name] = bound_evaluate(name, params)
    if isinstance(B, FreeAbelian) and B.rank >= 2:
      bounds["lattice_upper"] = bound_evaluate("lattice_upper", params)
    return bounds, p_support, p_trivializable
  if isinstance(G, FreeSolvable) and G.depth >= 2:
    cyclic_delta = 4 * n if G.depth == 2 else 8 * n
    params = BoundParameters(n=n, cyclic_delta=cyclic_delta)
    bounds = {"metabelian": bound_evaluate("metabelian", params), "free_solvable": bound_evaluate("free_solvable", params)}
    if G.quotient(u).is_identity():  # u lies in the torsion-free kernel
      bounds["torsion_free"] = bound_evaluate("torsion_free", params)
    return bounds, None, None
  return {}, None, None


# --- Scans ---


def random_element(G: GroupOracle, rng: random.Random, max_length: int) -> Element:
  """Product of a uniformly chosen number (0..max_length) of random symmetric generators."""
  gens = G.symmetric_generators()
  result = G.identity()
  for _ in range(rng.randint(0, max_length)):
    result = G.mul(result, rng.choice(gens))
  return result


_DRAW_ATTEMPTS = 256


def _infinite_order_element(B: GroupOracle, rng: random.Random, max_length: int) -> Element:
  for _ in range(_DRAW_ATTEMPTS):
    b = random_element(B, rng, max_length)
    if B.order(b) is None:
      return b
  raise InputError(f"No infinite-order element of length <= {max_length} drawn in {B.descriptor} after {_DRAW_ATTEMPTS} tries")


def _violates(record: ScanRecord) -> bool:
  found = record.min_conj_len
  if found is None:
    return False
  if any(bound is not None and found > bound for bound in record.bounds.values()):
    return True
  return record.lower_bound is not None and found < record.lower_bound


def _random_record(config: ScanConfig, G: GroupOracle, instance_id: str, seed: int) -> ScanRecord:
  rng = random.Random(seed)
  u = random_element(G, rng, config.max_length)
  gamma = random_element(G, rng, config.max_length)
  v = G.mul(G.mul(G.inv(gamma), u), gamma)
  u_len, v_len = G.word_length(u), G.word_length(v)
  n = u_len + v_len
  bounds, p_support, p_trivializable = upper_bounds(G, u, n)
  return ScanRecord(
    family="random",
    instance_id=instance_id,
    n=n,
    u_len=u_len,
    v_len=v_len,
    min_conj_len=min_conjugator_length(u, v, config.cap, G),
    cap=config.cap,
    bounds=bounds,
    known_conj_len=G.word_length(gamma),
    p_support=p_support,
    p_trivializable=p_trivializable,
  )


def _family_record(config: ScanConfig, family: WitnessFamily, instance_id: str) -> ScanRecord:
  W = family.group
  u_len, v_len = wreath_word_length(family.u), wreath_word_length(family.v)
  n = u_len + v_len
  bounds, p_support, p_trivializable = upper_bounds(W, family.u, n)
  extras = dict(family.extras)
  extras["index"] = family.n
  if not family.verified():
    raise InputError(f"{family.tag} family at n = {family.n} produced a non-conjugator")
  return ScanRecord(
    family=family.tag,
    instance_id=instance_id,
    n=n,
    u_len=u_len,
    v_len=v_len,
    min_conj_len=min_conjugator_length(family.u, family.v, config.cap, W),
    cap=config.cap,
    bounds=bounds,
    lower_bound=family.lower_bound,
    known_conj_len=family.conjugator_length(),
    p_support=p_support,
    p_trivializable=p_trivializable,
    extras=extras,
  )


def _wreath_group(config: ScanConfig) -> WreathProduct:
  G = parse_group(config.group)
  if not isinstance(G, WreathProduct):
    raise InputError(f"The {config.family} family needs a wreath product group, got {config.group}")
  return G


def _jobs(config: ScanConfig) -> list[tuple[str, Callable[[], ScanRecord]]]:
  rng = random.Random(config.seed)
  tag = config.family
  jobs: list[tuple[str, Callable[[], ScanRecord]]] = []
  if tag == "random":
    G = parse_group(config.group)
    for i in range(config.count):
      instance_id, seed = f"random-{i:04d}", rng.getrandbits(64)
      jobs.append((instance_id, lambda instance_id=instance_id, seed=seed: _random_record(config, G, instance_id, seed)))
    return jobs

  W = _wreath_group(config)
  A, B = W.top, W.base
  a = default_lamp(A)
  if tag == "base":
    _require(not B.is_finite, f"The base family needs an infinite base group, got {B.descriptor}")
    for i in range(config.count):
      instance_id, seed = f"base-{i:04d}", rng.getrandbits(64)

      def build(instance_id: str = instance_id, seed: int = seed) -> ScanRecord:
        local = random.Random(seed)
        b = _infinite_order_element(B, local, max(1, config.max_length))
        w = random_element(B, local, config.max_length)
        return _family_record(config, witness_base(A, B, b, B.mul(B.mul(B.inv(w), b), w)), instance_id)

      jobs.append((instance_id, build))
    return jobs

  for n in range(config.n_min, config.n_max + 1):
    instance_id = f"{tag}-{n:04d}"
    if tag == "centralizer":
      gens = B.generators()
      _require(len(gens) >= 2, f"The centralizer family needs two commuting generators in {B.descriptor}")
      build_family: Callable[[int], WitnessFamily] = lambda n: witness_centralizer(A, B, gens[0], gens[1], a, n)
    elif tag == "distortion":
      build_family = lambda n: witness_distortion(A, B, B.generators()[0], a, n)
    else:
      build_family = lambda n: witness_triangle(A, B, a, n, k_range=config.k_range)
    jobs.append((instance_id, lambda n=n, instance_id=instance_id, make=build_family: _family_record(config, make(n), instance_id)))
  return jobs


def _run_job(config: ScanConfig, instance_id: str, job: Callable[[], ScanRecord]) -> ScanRecord:
  logger.info(f"instance {instance_id}: start")
  try:
    record = job()
  except WreathLabError as e:
    logger.warning(f"instance {instance_id} failed: {e}")
    return ScanRecord(family=config.family, instance_id=instance_id, cap=config.cap, error=f"{type(e).__name__}: {e}")
  record.violation = _violates(record)
  if record.violation:
    logger.warning(f"instance {instance_id}: bound violation")
  logger.info(f"instance {instance_id}: done")
  return record


def _scan_props(args: tuple[Any, ...], kwargs: dict[str, Any]) -> dict[str, Any]:
  config = args[0] if args else kwargs.get("config")
  return {"family": config.family, "group": config.group} if isinstance(config, ScanConfig) else {}


@track("clf_scan", _scan_props)
async def clf_scan_async(config: ScanConfig, run_id: str | None = None) -> list[ScanRecord]:
  """Run a scan with up to config.workers instances in flight; records come back sorted by instance id."""
  run_id = run_id or generate()
  jobs = _jobs(config)
  logger.info(f"scan {run_id}: {len(jobs)} {config.family} instances in {config.group}")
  semaphore = asyncio.Semaphore(config.workers)

  async def run(instance_id: str, job: Callable[[], ScanRecord]) -> ScanRecord:
    async with semaphore:
      return await asyncio.to_thread(_run_job, config, instance_id, job)

  records = await asyncio.gather(*(run(instance_id, job) for instance_id, job in jobs))
  logger.info(f"scan {run_id}: finished")
  return sorted(records, key=lambda record: record.instance_id)


def clf_scan(config: ScanConfig, run_id: str | None = None) -> list[ScanRecord]:
  """Synchronous wrapper around clf_scan_async."""
  return asyncio.run(clf_scan_async(config, run_id))


def records_to_csv(records: list[ScanRecord]) -> str:
  buffer = io.StringIO()
  writer = csv.writer(buffer, lineterminator="\n")
  writer.writerow(CSV_COLUMNS)
  for record in records:
    writer.writerow(record.csv_row())
  return buffer.getvalue()


def default_lamp(A: GroupOracle) -> Element:
  """First generator of the lamp group, used as the value a of the witness families."""
  gens = A.generators()
  if not gens:
    raise InputError(f"{A.descriptor} is trivial")
  return gens[0]

