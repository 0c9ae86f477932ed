"""Conjugacy in wreath products and in free solvable groups.

For u = (f, b) and v = (g, c) in A wr B, a conjugator (h, z) with u (h, z) = (h, z) v must satisfy
bz = zc and f(x) h(b^-1 x) = h(x) g(z^-1 x) for every x. Along each right coset <b>t these equations
telescope, so u and v are conjugate exactly when the ordered lamp products along the cosets match.
The free solvable case embeds S_{r,d} into Z^r wr S_{r,d-1} and lifts the wreath conjugator back.
"""

from __future__ import annotations

from typing import Any, Iterable

from ._config import current_limits
from ._exceptions import InputError, InternalError, LogicError, ResourceError
from ._groups import Element, GroupOracle, cyclic_power_solve, intern
from ._magnus import FreeSolvable, SolvableElement
from ._telemetry import track
from ._utils import logger
from ._wreath import FinSuppMap, WreathElement, WreathProduct, wreath_inv, wreath_mul, wreath_word_length
from .models import Branch, CertificateModel, PiRow


class CosetPartition:
  """A finite point set of B split into right cosets <b>t_i, with x = b^j t_i recorded for every point."""

  __slots__ = ("group", "b", "order", "reps", "_assignment")

  def __init__(self, group: GroupOracle, b: Element, order: int | None, reps: list[Element], assignment: dict[Element, tuple[int, int]]):
    self.group = group
    self.b = b
    self.order = order
    self.reps = reps
    self._assignment = assignment

  def __len__(self) -> int:
    return len(self.reps)

  def __contains__(self, x: object) -> bool:
    return x in self._assignment

  def locate(self, x: Element) -> tuple[int, int]:
    """Return (i, j) with x = b^j t_i."""
    try:
      return self._assignment[x]
    except KeyError:
      raise LogicError(f"{self.group.format(x)} was not partitioned") from None

  def members(self, i: int) -> list[tuple[Element, int]]:
    """Points of the i-th coset with their exponents, in increasing exponent."""
    return sorted(((x, j) for x, (k, j) in self._assignment.items() if k == i), key=lambda xj: xj[1])


def coset_partition(points: Iterable[Element], b: Element, G: GroupOracle) -> CosetPartition:
  """Partition points into right <b>-cosets.

  Points are scanned in increasing (length, canonical key); a point starts a new coset when no
  existing representative t satisfies x t^-1 in <b>. Membership is decided by cyclic_power_solve
  with the group's membership radius, so the split is exact.

  Args:
      points: Finite set of elements of G.
      b: The cyclic generator.
      G: The ambient group.

  Returns:
      The partition, with exponents reduced modulo the order of b when it is finite.
  """
  G.check(b)
  order = G.order(b)
  ordered = sorted({G.check(x) for x in points}, key=lambda x: (G.word_length(x), G.sort_key(x)))
  reps: list[Element] = []
  rep_inverses: list[Element] = []
  assignment: dict[Element, tuple[int, int]] = {}
  for x in ordered:
    for i, t_inv in enumerate(rep_inverses):
      quotient = G.mul(x, t_inv)
      radius = 0 if order is not None else G.membership_radius(quotient)
      j = cyclic_power_solve(G, b, quotient, radius)
      if j is not None:
        assignment[x] = (i, j % order if order is not None else j)
        break
    else:
      assignment[x] = (len(reps), 0)
      reps.append(x)
      rep_inverses.append(G.inv(x))
  return CosetPartition(G, b, order, reps, assignment)


def _shifted(f: FinSuppMap, z: Element | None) -> Iterable[tuple[Element, Element]]:
  if z is None or f.base.is_identity(z):
    return f.items()
  B = f.base
  return ((B.mul(z, x), value) for x, value in f.items())


def _coset_values(f: FinSuppMap, partition: CosetPartition, z: Element | None = None) -> list[dict[int, Element]]:
  buckets: list[dict[int, Element]] = [{} for _ in partition.reps]
  for point, value in _shifted(f, z):
    i, j = partition.locate(point)
    buckets[i][j] = value
  return buckets


def _ordered_product(A: GroupOracle, values: dict[int, Element]) -> Element:
  product = A.identity()
  for j in sorted(values, reverse=True):
    product = A.mul(product, values[j])
  return product


def pi_product(f: FinSuppMap, partition: CosetPartition, i: int, z: Element | None = None) -> Element:
  """Ordered product of f(z^-1 b^j t_i) over the coset, highest j leftmost.

  The partition must contain z * Supp(f).
  """
  if not 0 <= i < len(partition):
    raise InputError(f"Coset index {i} outside 0..{len(partition) - 1}")
  return _ordered_product(f.top, _coset_values(f, partition, z)[i])


def pi_table(u: WreathElement) -> list[tuple[Element, Element]]:
  """(t_i, pi_{t_i}(f)) for u = (f, b), over the cosets of <b> meeting Supp(f)."""
  partition = coset_partition(u.lamp.support(), u.cursor, u.base)
  values = _coset_values(u.lamp, partition)
  return [(t, _ordered_product(u.top, values[i])) for i, t in enumerate(partition.reps)]


def conjugacy_branch(u: WreathElement) -> Branch:
  """'trivializable' when every pi-product of u vanishes, i.e. u is conjugate to (1, b)."""
  e = u.top.identity()
  return "trivializable" if all(p == e for _, p in pi_table(u)) else "support"


def build_conjugator_h(
  f: FinSuppMap,
  g: FinSuppMap,
  b: Element,
  z: Element,
  partition: CosetPartition,
  alphas: list[Element] | None = None,
) -> FinSuppMap:
  """Solve f h^b = h g^z coset by coset.

  With F_k = f_k ... f_jmin and G_k = g_k ... g_jmin (f_k = f(b^k t_i), g_k = g(z^-1 b^k t_i)) the
  solution is h(b^k t_i) = F_k G_k^-1 for infinite-order b, and F_k alpha_i G_k^-1 for k = 0..N-1
  when b has order N.

  Args:
      f: Lamp of u = (f, b).
      g: Lamp of v = (g, c) with c = z^-1 b z.
      b: Cursor of u.
      z: Cursor of the conjugator.
      partition: Partition of Supp(f) and z Supp(g) into <b>-cosets.
      alphas: Per-coset elements of A for finite-order b; identity when omitted.

  Returns:
      The lamp h of the conjugator (h, z), verified by multiplication.
  """
  B, A = f.base, f.top
  e_a = A.identity()
  order = partition.order
  f_values = _coset_values(f, partition)
  g_values = _coset_values(g, partition, z)
  entries: dict[Element, Element] = {}
  for i, rep in enumerate(partition.reps):
    fv, gv = f_values[i], g_values[i]
    if order is None:
      exponents = set(fv) | set(gv)
      if not exponents:
        continue
      low, high = min(exponents), max(exponents)
      point = B.mul(B.power(b, low), rep)
      F = G = e_a
      for k in range(low, high + 1):
        F = A.mul(fv.get(k, e_a), F)
        G = A.mul(gv.get(k, e_a), G)
        value = A.mul(F, A.inv(G))
        if value != e_a:
          entries[point] = value
        point = B.mul(b, point)
      if F != G:
        raise LogicError(f"pi-products differ on the coset of {B.format(rep)}: {A.format(F)} vs {A.format(G)}")
    else:
      alpha = alphas[i] if alphas is not None else e_a
      point = rep
      F = G = e_a
      for k in range(order):
        F = A.mul(fv.get(k, e_a), F)
        G = A.mul(gv.get(k, e_a), G)
        value = A.mul(A.mul(F, alpha), A.inv(G))
        if value != e_a:
          entries[point] = value
        point = B.mul(b, point)
      if A.mul(F, alpha) != A.mul(alpha, G):
        raise LogicError(f"alpha does not match the pi-products on the coset of {B.format(rep)}")
  h = FinSuppMap._trusted(B, A, entries)

  u = WreathElement(f, b)
  v = WreathElement(g, B.mul(B.inv(z), B.mul(b, z)))
  gamma = WreathElement(h, z)
  if wreath_mul(u, gamma) != wreath_mul(gamma, v):
    raise InternalError("Constructed lamp does not conjugate")
  return h


def trivialization_conjugator(f: FinSuppMap, b: Element, partition: CosetPartition) -> FinSuppMap | None:
  """h with (f, b)(h, e) = (h, e)(1, b), or None when some pi-product of f is non-trivial."""
  A = f.top
  e_a = A.identity()
  if any(_ordered_product(A, values) != e_a for values in _coset_values(f, partition)):
    return None
  empty = FinSuppMap._trusted(f.base, A, {})
  return build_conjugator_h(f, empty, b, f.base.identity(), partition)


class ConjugacyCertificate:
  """A conjugator together with the data that produced it."""

  __slots__ = ("conjugator", "z", "branch", "reps", "pi_f", "pi_g", "alphas", "verified")

  def __init__(
    self,
    conjugator: WreathElement | SolvableElement,
    z: Element,
    branch: Branch | None,
    reps: list[Element] | None = None,
    pi_f: list[Element] | None = None,
    pi_g: list[Element] | None = None,
    alphas: list[Element] | None = None,
    verified: bool = False,
  ):
    self.conjugator = conjugator
    self.z = z
    self.branch = branch
    self.reps = reps or []
    self.pi_f = pi_f or []
    self.pi_g = pi_g or []
    self.alphas = alphas
    self.verified = verified

  def __repr__(self) -> str:
    return f"ConjugacyCertificate(branch={self.branch}, verified={self.verified})"

  def to_model(self) -> CertificateModel:
    G = oracle_of(self.conjugator)
    if isinstance(self.conjugator, WreathElement):
      B, A = self.conjugator.base, self.conjugator.top
    elif G.depth > 1:
      B, A = G.lower(), G.lamp_group
    else:
      B = A = None
    rows = [
      PiRow(
        rep=B.format(t),
        pi_f=A.format(self.pi_f[i]),
        pi_g=A.format(self.pi_g[i]),
        alpha=A.format(self.alphas[i]) if self.alphas is not None else None,
      )
      for i, t in enumerate(self.reps)
      if B is not None and A is not None
    ]
    return CertificateModel(
      conjugator=G.format(self.conjugator),
      z=B.format(self.z) if B is not None else "e",
      branch=self.branch,
      pi_table=rows,
      verified=self.verified,
    )


def oracle_of(x: Any) -> Any:
  """The group an element of the richer element types belongs to."""
  if isinstance(x, WreathElement):
    return intern(WreathProduct(x.top, x.base))
  if isinstance(x, SolvableElement):
    return FreeSolvable.get(x.rank, x.depth)
  raise InputError(f"Cannot infer the group of {x!r}; pass it explicitly")


def verify_conjugator(u: Any, v: Any, gamma: Any, group: GroupOracle | None = None) -> bool:
  """Exact check of u gamma = gamma v."""
  G = group or oracle_of(u)
  for x in (u, v, gamma):
    if not G.contains(x):
      raise InputError(f"{x!r} is not an element of {G.descriptor}")
  return G.mul(u, gamma) == G.mul(gamma, v)


def base_conjugator(G: GroupOracle, b: Element, c: Element) -> Element | None:
  """z with bz = zc in the base group, verified."""
  z = G.conjugator(G.check(b), G.check(c))
  if z is not None and G.mul(b, z) != G.mul(z, c):
    raise InternalError(f"{G.descriptor} returned a non-conjugator")
  return z


def _find_alphas(A: GroupOracle, pi_f: list[Element], pi_g: list[Element], radius: int) -> list[Element] | None:
  alphas: list[Element] = []
  for p, q in zip(pi_f, pi_g):
    if p == q:
      alphas.append(A.identity())
      continue
    found = next((alpha for alpha in A.ordered_ball(radius) if A.mul(p, alpha) == A.mul(alpha, q)), None)
    if found is None:
      return None
    alphas.append(found)
  return alphas


def _wreath_props(args: tuple[Any, ...], kwargs: dict[str, Any]) -> dict[str, Any]:
  u = args[0] if args else kwargs.get("u")
  return {"group": f"W:{u.top.descriptor}~{u.base.descriptor}"} if isinstance(u, WreathElement) else {}


@track("wreath_conjugacy", _wreath_props)
def wreath_conjugacy(u: WreathElement, v: WreathElement) -> ConjugacyCertificate | None:
  """Decide whether u and v are conjugate in A wr B and return a verified certificate if so.

  When every pi-product of u vanishes, u ~ (1, b), and u ~ v exactly when the same holds for v and
  b ~ c in B. Otherwise a conjugator (h, z) exists only with |z| <= |u| + |v|, so the ball of that
  radius is scanned in canonical order and the first matching z is used.

  Args:
      u: Left element (f, b).
      v: Right element (g, c).

  Returns:
      A certificate, or None when u and v are not conjugate.

  Raises:
      ResourceError: A ball or path cap was hit; the answer is then unknown.
  """
  if u.base != v.base or u.top != v.top:
    raise InputError("Operands live in different wreath products")
  B, A = u.base, u.top
  f, b = u.lamp, u.cursor
  g, c = v.lamp, v.cursor

  if u == v:
    identity = WreathElement(FinSuppMap._trusted(B, A, {}), B.identity())
    return ConjugacyCertificate(identity, B.identity(), conjugacy_branch(u), verified=True)

  partition_f = coset_partition(f.support(), b, B)
  f_values = _coset_values(f, partition_f)
  pi_f = [_ordered_product(A, values) for values in f_values]
  e_a = A.identity()

  if all(p == e_a for p in pi_f):
    logger.debug(f"{B.descriptor}: trivializable branch")
    partition_g = coset_partition(g.support(), c, B)
    h_g = trivialization_conjugator(g, c, partition_g)
    if h_g is None:
      return None
    z = base_conjugator(B, b, c)
    if z is None:
      return None
    h_f = trivialization_conjugator(f, b, partition_f)
    assert h_f is not None
    e_b = B.identity()
    gamma = wreath_mul(
      wreath_mul(WreathElement(h_f, e_b), WreathElement(FinSuppMap._trusted(B, A, {}), z)),
      wreath_inv(WreathElement(h_g, e_b)),
    )
    verified = wreath_mul(u, gamma) == wreath_mul(gamma, v)
    if not verified:
      raise InternalError("Trivializable-branch conjugator failed verification")
    return ConjugacyCertificate(gamma, gamma.cursor, "trivializable", partition_f.reps, pi_f, [e_a] * len(pi_f), verified=True)

  if B.is_abelian and b != c:
    return None
  n = wreath_word_length(u) + wreath_word_length(v)
  alpha_radius = f.size() + g.size() + A.clf_bound(n)
  logger.debug(f"{B.descriptor}: support branch, scanning z up to length {n}")
  for z in B.ordered_ball(n):
    if B.mul(b, z) != B.mul(z, c):
      continue
    points = f.support() | {B.mul(z, y) for y in g.support()}
    partition = coset_partition(points, b, B)
    pis_f = [_ordered_product(A, values) for values in _coset_values(f, partition)]
    pis_g = [_ordered_product(A, values) for values in _coset_values(g, partition, z)]
    if partition.order is None:
      if pis_f != pis_g:
        continue
      alphas = None
    else:
      alphas = _find_alphas(A, pis_f, pis_g, alpha_radius)
      if alphas is None:
        continue
    h = build_conjugator_h(f, g, b, z, partition, alphas)
    logger.debug(f"{B.descriptor}: accepted z = {B.format(z)}")
    return ConjugacyCertificate(WreathElement(h, z), z, "support", partition.reps, pis_f, pis_g, alphas, verified=True)
  return None


def _solvable_props(args: tuple[Any, ...], kwargs: dict[str, Any]) -> dict[str, Any]:
  u = args[0] if args else kwargs.get("u")
  return {"group": f"S:{u.rank},{u.depth}"} if isinstance(u, SolvableElement) else {}


def solvable_certificate(u: SolvableElement, v: SolvableElement) -> ConjugacyCertificate | None:
  """Certificate for u ~ v in S_{r,d}: the lifted conjugator plus the wreath data of the Magnus images.

  Conjugacy is decided on the Magnus images in Z^r wr S_{r,d-1}. A wreath conjugator (h, z) can
  always be realized by an element of S_{r,d} with cursor z, so candidates w with that cursor are
  scanned in increasing length, starting with the lift of z's own word.

  Raises:
      ResourceError: No lift found within the lift radius cap.
  """
  if (u.rank, u.depth) != (v.rank, v.depth):
    raise InputError("Operands live in different free solvable groups")
  S = FreeSolvable.get(u.rank, u.depth)
  if S.depth == 1:
    return ConjugacyCertificate(S.identity(), (), None, verified=True) if u == v else None
  if u == v:
    return ConjugacyCertificate(S.identity(), S.lower().identity(), None, verified=True)
  certificate = wreath_conjugacy(u.nf, v.nf)  # pyright: ignore[reportArgumentType]
  if certificate is None:
    return None
  target = certificate.z

  def lifted(w: SolvableElement) -> ConjugacyCertificate:
    return ConjugacyCertificate(
      w, target, certificate.branch, certificate.reps, certificate.pi_f, certificate.pi_g, certificate.alphas, verified=True
    )

  candidate = S.from_word(target.word)
  if S.mul(u, candidate) == S.mul(candidate, v):
    logger.debug(f"{S.descriptor}: direct lift of z conjugates")
    return lifted(candidate)

  cap = current_limits().lift_radius_cap
  for radius in range(cap + 1):
    for w in S.sphere(radius):
      if w.nf.cursor == target and S.mul(u, w) == S.mul(w, v):  # pyright: ignore[reportAttributeAccessIssue]
        logger.debug(f"{S.descriptor}: lift found at radius {radius}")
        return lifted(w)
  raise ResourceError("lift_radius_cap", cap, cap + 1, f"no lift of the wreath conjugator in {S.descriptor}")


@track("solvable_conjugacy", _solvable_props)
def solvable_conjugacy(u: SolvableElement, v: SolvableElement) -> SolvableElement | None:
  """A conjugator w with u w = w v in S_{r,d}, or None when u and v are not conjugate."""
  certificate = solvable_certificate(u, v)
  return None if certificate is None else certificate.conjugator  # pyright: ignore[reportReturnType]
