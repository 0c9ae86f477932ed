class WreathLabError(Exception):
  """Base class for every error raised by wreathlab."""

  pass


class InputError(WreathLabError, ValueError):
  """Custom exception for malformed or inconsistent inputs."""

  pass


class ResourceError(WreathLabError):
  """Custom exception for searches that hit a configured cap."""

  def __init__(self, cap: str, limit: int, attempted: int | None = None, detail: str | None = None):
    """Initializes the resource error."""
    self.cap = cap
    self.limit = limit
    self.attempted = attempted
    self.detail = detail
    message = f"Resource cap '{cap}' exceeded (limit {limit}"
    if attempted is not None:
      message += f", attempted {attempted}"
    message += ")"
    if detail:
      message += f": {detail}"
    super().__init__(message)


class LogicError(WreathLabError):
  """Custom exception for violated preconditions of a construction."""

  pass


class InternalError(WreathLabError):
  """Custom exception for failed self-verification."""

  pass
