"""Command-line interface for wreathlab."""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, NoReturn

from nanoid import generate
from pydantic import ValidationError

from wreathlab._config import use_limits
from wreathlab._conjugacy import ConjugacyCertificate, solvable_certificate, wreath_conjugacy
from wreathlab._exceptions import InputError, ResourceError, WreathLabError
from wreathlab._groups import Element, GroupOracle, parse_group
from wreathlab._lab import clf_scan, measure_distortion, min_conjugator_length, records_to_csv, upper_bounds
from wreathlab._magnus import FreeSolvable, SolvableElement, normal_form_data
from wreathlab._selftest import SUITES, run_selftest
from wreathlab._telemetry import Telemetry, span
from wreathlab._utils import canonical_json
from wreathlab._wreath import WreathProduct
from wreathlab.models import ConjugacyVerdict, ScanConfig

EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

GRAMMAR = """group specs:
  Z, Z^r, Zr:r        free abelian groups; elements (1,-2)
  Zq, C:q             cyclic group of order q; elements 0..q-1
  P3                  symmetric group on 3 points; elements in cycle notation, e.g. (1 2)
  F:r, S:r,d          free and free solvable groups; elements are words "x1 X2 x1" (X = inverse)
  W:A~B               restricted wreath product A wr B; elements are JSON
                      '{"base":"1","lamps":[{"at":"0","val":"1"}]}'

examples:
  wreathlab normalize S:2,2 "x1 X1"
  wreathlab conj-check W:Z2~Z '{"base":"1","lamps":[{"at":"0","val":"1"}]}' '{"base":"1","lamps":[{"at":"3","val":"1"}]}'
  wreathlab distortion S:2,2 x1 --nmax 4
  wreathlab clf-scan --group W:Z2~Z --family random --count 20 --seed 7
"""


def print_json(data: Any):
  """Print data as formatted JSON."""
  print(json.dumps(data, indent=2, default=str))


def print_success(message: str, data: dict[str, Any] | None = None):
  """Print success response as JSON."""
  result: dict[str, Any] = {"success": True, "message": message}
  if data:
    result.update(data)
  print_json(result)


def print_error(message: str, json_mode: bool = False, code: int = EXIT_FAILURE) -> NoReturn:
  """Print error message to stderr and exit with the given code."""
  if json_mode:
    print(json.dumps({"success": False, "error": message}, indent=2, default=str), file=sys.stderr)
  else:
    print(f"Error: {message}", file=sys.stderr)
  sys.exit(code)


def output_format(args: argparse.Namespace) -> str:
  return "json" if args.json else args.format


def _element(G: GroupOracle, text: str) -> Element:
  return G.check(G.parse(text))


def _element_data(G: GroupOracle, a: Element) -> Any:
  """JSON-ready form of an element: nested normal forms for free solvable groups, parsed wreath JSON."""
  if isinstance(a, SolvableElement):
    return normal_form_data(a)
  if isinstance(G, WreathProduct):
    return G.to_model(a).model_dump()
  return G.format(a)


def _emit_element(args: argparse.Namespace, G: GroupOracle, a: Element, message: str):
  data = _element_data(G, a)
  if output_format(args) == "json":
    print_success(message, {"group": G.descriptor, "element": G.format(a), "normal_form": data})
  else:
    print(data if isinstance(data, str) else canonical_json(data))


# --- Verbs ---


def normalize(args: argparse.Namespace):
  """Print the canonical form of an element."""
  G = parse_group(args.group)
  _emit_element(args, G, _element(G, args.element), "Element normalized")


def multiply(args: argparse.Namespace):
  """Multiply elements left to right."""
  G = parse_group(args.group)
  product = G.identity()
  for text in args.elements:
    product = G.mul(product, _element(G, text))
  _emit_element(args, G, product, f"Product of {len(args.elements)} element(s)")


def wordlen(args: argparse.Namespace):
  """Print the exact word length of an element."""
  G = parse_group(args.group)
  length = G.word_length(_element(G, args.element))
  if output_format(args) == "json":
    print_success("Word length computed", {"group": G.descriptor, "length": length})
  else:
    print(length)


def _certificate(G: GroupOracle, u: Element, v: Element) -> ConjugacyCertificate | None:
  if isinstance(G, WreathProduct):
    return wreath_conjugacy(u, v)
  if isinstance(G, FreeSolvable):
    return solvable_certificate(u, v)
  z = G.conjugator(u, v)
  return None if z is None else ConjugacyCertificate(z, z, None, verified=G.mul(u, z) == G.mul(z, v))


def _z_length(G: GroupOracle, certificate: ConjugacyCertificate) -> int:
  if isinstance(G, WreathProduct):
    return G.base.word_length(certificate.z)
  if isinstance(G, FreeSolvable):
    return G.lower().word_length(certificate.z) if G.depth > 1 else 0
  return G.word_length(certificate.z)


def conj_check(args: argparse.Namespace):
  """Decide conjugacy and print a verdict with certificate."""
  G = parse_group(args.group)
  u, v = _element(G, args.u), _element(G, args.v)
  n = G.word_length(u) + G.word_length(v)
  bounds, _, _ = upper_bounds(G, u, n)
  bound = bounds.get("wreath", bounds.get("free_solvable"))
  try:
    certificate = _certificate(G, u, v)
  except ResourceError as e:
    _emit_verdict(args, ConjugacyVerdict(conjugate="inconclusive", bound=bound, detail=str(e)))
    return
  if certificate is None:
    verdict = ConjugacyVerdict(conjugate=False, bound=bound)
  else:
    model = certificate.to_model() if isinstance(G, (WreathProduct, FreeSolvable)) else None
    verdict = ConjugacyVerdict(conjugate=True, certificate=model, z_length=_z_length(G, certificate), bound=bound)
  _emit_verdict(args, verdict)


def _emit_verdict(args: argparse.Namespace, verdict: ConjugacyVerdict):
  if output_format(args) == "json":
    print_json(verdict.model_dump(exclude_none=True))
  elif verdict.conjugate == "inconclusive":
    print(f"inconclusive: {verdict.detail}")
  elif verdict.conjugate:
    conjugator = verdict.certificate.conjugator if verdict.certificate else "e"
    print(f"conjugate: {conjugator}")
  else:
    print("not conjugate")


def conj_search(args: argparse.Namespace):
  """Exhaustive minimal conjugator length up to a cap."""
  G = parse_group(args.group)
  u, v = _element(G, args.u), _element(G, args.v)
  found = min_conjugator_length(u, v, args.cap, G)
  if output_format(args) == "json":
    print_success("Search finished", {"group": G.descriptor, "min_conj_len": found, "cap": args.cap})
  else:
    print(found if found is not None else f">={args.cap + 1}")


def distortion(args: argparse.Namespace):
  """Tabulate the distortion function of a cyclic subgroup."""
  G = parse_group(args.group)
  profile = measure_distortion(G, _element(G, args.element), args.nmax)
  fmt = output_format(args)
  if fmt == "json":
    print_success(
      "Distortion measured", {"group": G.descriptor, "element": args.element, "rows": [r.model_dump() for r in profile.rows]}
    )
  elif fmt == "csv":
    print("n,delta,bound")
    for row in profile.rows:
      print(f"{row.n},{row.delta},{'' if row.bound is None else row.bound}")
  else:
    for row in profile.rows:
      bound = "" if row.bound is None else f"  (bound {row.bound})"
      print(f"n={row.n}  delta={row.delta}{bound}")


_SCAN_FLAGS = ("group", "family", "count", "max_length", "n_min", "n_max", "cap", "seed", "workers", "k_range")


def scan_config(args: argparse.Namespace) -> ScanConfig:
  """Build the scan config from --config FILE, overridden by any flags given explicitly."""
  data: dict[str, Any] = {}
  if args.config:
    try:
      data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as e:
      raise InputError(f"Cannot read config {args.config}: {e}") from e
  for name in _SCAN_FLAGS:
    value = getattr(args, name, None)
    if value is not None:
      data[name] = value
  try:
    return ScanConfig.model_validate(data)
  except ValidationError as e:
    raise InputError(f"Invalid scan config: {e.errors()[0]['msg']}") from e


def clf_scan_command(args: argparse.Namespace):
  """Scan instances and compare minimal conjugator lengths against the bounds."""
  config = scan_config(args)
  run_id = generate()
  records = clf_scan(config, run_id)
  fmt = args.format if not args.json else "json"
  if fmt == "json":
    body = json.dumps(
      {"run_id": run_id, "config": config.model_dump(), "records": [r.model_dump() for r in records]}, indent=2
    )
  elif fmt == "csv":
    body = records_to_csv(records)
  else:
    violations = sum(r.violation for r in records)
    failures = sum(r.error is not None for r in records)
    body = f"run {run_id}: {len(records)} instance(s), {violations} violation(s), {failures} error(s)\n"
  if args.output:
    Path(args.output).write_text(body if body.endswith("\n") else body + "\n")
  else:
    print(body, end="" if body.endswith("\n") else "\n")


def selftest(args: argparse.Namespace):
  """Run the consistency suites; exit 0 iff all pass."""
  results = run_selftest(args.suite, args.seed or 0)
  if output_format(args) == "json":
    print_json([r.model_dump() for r in results])
  else:
    for r in results:
      status = "ok" if r.passed else "FAILED"
      print(f"{r.name}: {status} ({r.checked} checks, {r.duration_ms} ms)")
      for failure in r.failures:
        print(f"  {failure}")
  if not all(r.passed for r in results):
    sys.exit(EXIT_FAILURE)


# --- Entry point ---


def _exit_code(error: WreathLabError) -> int:
  if isinstance(error, InputError):
    return EXIT_INPUT
  if isinstance(error, ResourceError):
    return EXIT_RESOURCE
  return EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
  common = argparse.ArgumentParser(add_help=False)
  common.add_argument("--json", action="store_true", help="Output as JSON (same as --format json)")
  common.add_argument("--format", choices=["text", "json", "csv"], default="text", help="Output format (default: text)")
  common.add_argument("--seed", type=int, help="Seed of the random generators")
  common.add_argument("--bfs-cap", type=int, help="Largest BFS radius")
  common.add_argument("--ball-cap", type=int, help="Largest cached ball size")
  common.add_argument("--path-cap", type=int, help="Largest support for the exact visiting-path solver")
  common.add_argument("--lift-cap", type=int, help="Largest radius of the free solvable lift search")

  parser = argparse.ArgumentParser(
    prog="wreathlab",
    description="Conjugacy, word metrics and conjugator length experiments in wreath products and free solvable groups",
    epilog=GRAMMAR,
    formatter_class=argparse.RawDescriptionHelpFormatter,
  )
  subparsers = parser.add_subparsers(dest="command", help="Available commands")

  # normalize command
  normalize_parser = subparsers.add_parser("normalize", parents=[common], help="Print the canonical form of an element")
  normalize_parser.add_argument("group", help="Group spec")
  normalize_parser.add_argument("element", help="Element literal")
  normalize_parser.set_defaults(func=normalize, format="text")

  # mul command
  mul_parser = subparsers.add_parser("mul", parents=[common], help="Multiply elements")
  mul_parser.add_argument("group", help="Group spec")
  mul_parser.add_argument("elements", nargs="+", help="Element literals, multiplied left to right")
  mul_parser.set_defaults(func=multiply, format="text")

  # wordlen command
  wordlen_parser = subparsers.add_parser("wordlen", parents=[common], help="Exact word length")
  wordlen_parser.add_argument("group", help="Group spec")
  wordlen_parser.add_argument("element", help="Element literal")
  wordlen_parser.set_defaults(func=wordlen, format="text")

  # conj-check command
  check_parser = subparsers.add_parser("conj-check", parents=[common], help="Decide conjugacy with a certificate")
  check_parser.add_argument("group", help="Group spec (wreath, free solvable, abelian or finite)")
  check_parser.add_argument("u", help="First element")
  check_parser.add_argument("v", help="Second element")
  check_parser.set_defaults(func=conj_check, format="json")

  # conj-search command
  search_parser = subparsers.add_parser("conj-search", parents=[common], help="Exhaustive minimal conjugator length")
  search_parser.add_argument("group", help="Group spec")
  search_parser.add_argument("u", help="First element")
  search_parser.add_argument("v", help="Second element")
  search_parser.add_argument("--cap", type=int, default=6, help="Search radius (default: 6)")
  search_parser.set_defaults(func=conj_search, format="text")

  # distortion command
  distortion_parser = subparsers.add_parser("distortion", parents=[common], help="Distortion of a cyclic subgroup")
  distortion_parser.add_argument("group", help="Group spec")
  distortion_parser.add_argument("element", help="Generator b of the cyclic subgroup")
  distortion_parser.add_argument("--nmax", type=int, default=4, help="Largest length budget (default: 4)")
  distortion_parser.set_defaults(func=distortion, format="text")

  # clf-scan command
  scan_parser = subparsers.add_parser("clf-scan", parents=[common], help="Scan conjugator lengths against the bounds")
  scan_parser.add_argument("--config", help="JSON file with a scan config; flags override its keys")
  scan_parser.add_argument("--output", help="Write the result to this file instead of stdout")
  scan_parser.add_argument("--group", help="Group spec (default: W:Z2~Z)")
  scan_parser.add_argument(
    "--family", choices=["random", "centralizer", "distortion", "triangle", "base"], help="Instance generator"
  )
  scan_parser.add_argument("--count", type=int, help="Number of random instances")
  scan_parser.add_argument("--max-length", type=int, help="Word length of random elements")
  scan_parser.add_argument("--n-min", type=int, help="First witness family index")
  scan_parser.add_argument("--n-max", type=int, help="Last witness family index")
  scan_parser.add_argument("--cap", type=int, help="Radius of the minimal conjugator search")
  scan_parser.add_argument("--workers", type=int, help="Concurrent instances")
  scan_parser.add_argument("--k-range", type=int, help="Shift range of the structured triangle conjugators")
  scan_parser.set_defaults(func=clf_scan_command, format="csv")

  # selftest command
  selftest_parser = subparsers.add_parser("selftest", parents=[common], help="Run the built-in consistency suites")
  selftest_parser.add_argument("--suite", action="append", choices=list(SUITES), help="Suite to run (repeatable)")
  selftest_parser.set_defaults(func=selftest, format="text")

  return parser


def main(argv: list[str] | None = None):
  """Main CLI entry point."""
  parser = build_parser()
  args = parser.parse_args(argv)

  if not args.command:
    parser.print_help()
    sys.exit(EXIT_INPUT)

  json_mode = output_format(args) == "json"
  try:
    with (
      span(f"cli.{args.command}", {"group": getattr(args, "group", None)}),
      use_limits(
        bfs_radius_cap=args.bfs_cap, ball_size_cap=args.ball_cap, path_cap=args.path_cap, lift_radius_cap=args.lift_cap
      ),
    ):
      args.func(args)
  except WreathLabError as e:
    print_error(str(e), json_mode=json_mode, code=_exit_code(e))
  finally:
    Telemetry.get().flush()


if __name__ == "__main__":
  main()
