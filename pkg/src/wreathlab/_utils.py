import json
import logging
import os
import re
from typing import Any

from ._exceptions import InputError

# Configure logging
logger = logging.getLogger("wreathlab")
logger.setLevel(os.getenv("WREATHLAB_LOG_LEVEL", "WARNING").upper())

_INT_TUPLE = re.compile(r"^\(\s*(-?\d+(\s*,\s*-?\d+)*)?\s*,?\s*\)$")


def canonical_json(data: Any) -> str:
  """Serialize data deterministically (sorted keys, no whitespace)."""
  return json.dumps(data, sort_keys=True, separators=(",", ":"))


def parse_int_tuple(text: str, length: int | None = None) -> tuple[int, ...]:
  """Parse a parenthesised comma-separated integer literal such as ``(3,-2)``.

  Args:
      text: The literal.
      length: Required number of entries, if any.

  Returns:
      The integers as a tuple.
  """
  stripped = text.strip()
  if not _INT_TUPLE.match(stripped):
    raise InputError(f"Expected an integer vector like (1,0), got {text!r}")
  inner = stripped[1:-1].strip().rstrip(",")
  values = tuple(int(part) for part in inner.split(",")) if inner else ()
  if length is not None and len(values) != length:
    raise InputError(f"Expected {length} coordinates, got {len(values)} in {text!r}")
  return values


def parse_int(text: str) -> int:
  try:
    return int(text.strip())
  except ValueError as e:
    raise InputError(f"Expected an integer, got {text!r}") from e


def ceil_div(a: int, b: int) -> int:
  return -(-a // b)
