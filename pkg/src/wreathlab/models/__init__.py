"""wreathlab serialized shapes: element JSON, verdicts, scan configs and records."""

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

# --- Aliases ---

FamilyTag = Literal["random", "centralizer", "distortion", "triangle", "base"]
BoundName = Literal[
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
]
OutputFormat = Literal["text", "json", "csv"]
Branch = Literal["trivializable", "support"]

# Fixed external column names, in order, with the bound each one carries.
CSV_BOUND_COLUMNS: dict[str, BoundName] = {
  "bound_L15": "infinite_order",
  "bound_L17": "finite_order",
  "bound_T18": "wreath",
  "bound_T210": "metabelian",
  "bound_C211": "free_solvable",
}

CSV_COLUMNS = ["family", "instance_id", "n", "u_len", "v_len", "min_conj_len", *CSV_BOUND_COLUMNS, "violation"]

# --- Element JSON ---


class LampModel(BaseModel):
  """One non-identity lamp of a wreath element."""

  model_config = ConfigDict(extra="forbid")

  at: str = Field(description="Base-group literal of the lamp position.")
  val: str = Field(description="Top-group literal of the lamp value.")


class WreathElementModel(BaseModel):
  """Wire form of a wreath element; lamps are sorted by the canonical order of their position."""

  model_config = ConfigDict(extra="forbid")

  base: str = Field(description="Base-group literal of the cursor.")
  lamps: list[LampModel] = Field(default_factory=list, description="The support of the lamp configuration.")


# --- Conjugacy verdicts ---


class PiRow(BaseModel):
  """Per-coset pi-products recorded in a certificate."""

  rep: str = Field(description="Coset representative literal.")
  pi_f: str = Field(description="Ordered product of the left element's lamps along the coset.")
  pi_g: str = Field(description="Ordered product of the shifted right element's lamps along the coset.")
  alpha: str | None = Field(default=None, description="Top-group element matching the two products (finite-order cursor).")


class CertificateModel(BaseModel):
  """A conjugator together with the data that produced it."""

  conjugator: str = Field(description="The conjugator literal.")
  z: str = Field(description="Cursor part of the conjugator.")
  branch: Branch | None = Field(default=None, description="Which branch of the decision procedure produced it.")
  pi_table: list[PiRow] = Field(default_factory=list, description="Per-coset pi-products.")
  verified: bool = Field(description="Whether u*conjugator == conjugator*v was checked exactly.")


class ConjugacyVerdict(BaseModel):
  """JSON verdict printed by conj-check."""

  conjugate: bool | Literal["inconclusive"] = Field(description="Decision, or 'inconclusive' when a cap was hit.")
  certificate: CertificateModel | None = Field(default=None, description="Certificate when conjugate.")
  z_length: int | None = Field(default=None, description="Base-group length of the certificate's cursor part.")
  bound: int | None = Field(default=None, description="Applicable upper bound on the minimal conjugator length.")
  detail: str | None = Field(default=None, description="Cap that was hit, for inconclusive verdicts.")


# --- Bounds ---


class BoundParameters(BaseModel):
  """Inputs of the closed-form conjugator length bounds."""

  n: int = Field(ge=0, description="Total length |u| + |v|.")
  p: int | None = Field(default=None, ge=0, description="Radius P; defaults to max(2n, n + clf_b).")
  order: int | None = Field(default=None, ge=1, description="Order N of the cursor, None if infinite.")
  delta: int | None = Field(default=None, ge=0, description="Distortion of <b> evaluated at P (or at n for lower bounds).")
  cyclic_delta: int | None = Field(default=None, ge=0, description="Cyclic distortion function evaluated at 4n.")
  clf_a: int = Field(default=0, ge=0, description="Conjugacy length bound of the top group at n.")
  clf_b: int = Field(default=0, ge=0, description="Conjugacy length bound of the base group at n.")

  def radius(self) -> int:
    return self.p if self.p is not None else max(2 * self.n, self.n + self.clf_b)


# --- Scans ---


class ScanConfig(BaseModel):
  """Configuration of a conjugator-length scan."""

  model_config = ConfigDict(extra="forbid")

  group: str = Field(default="W:Z2~Z", description="Group spec the instances live in.")
  family: FamilyTag = Field(default="random", description="Instance generator.")
  count: int = Field(default=20, ge=0, description="Number of random instances.")
  max_length: int = Field(default=3, ge=0, description="Maximal word length of random elements and conjugators.")
  n_min: int = Field(default=0, ge=0, description="First index of a witness family.")
  n_max: int = Field(default=3, ge=0, description="Last index of a witness family.")
  cap: int = Field(default=6, ge=0, description="Radius cap of the exhaustive minimal-conjugator search.")
  seed: int = Field(default=0, ge=0, lt=2**64, description="64-bit seed of the instance generator.")
  workers: int = Field(default=4, ge=1, description="Concurrent instance workers.")
  k_range: int | None = Field(default=None, ge=0, description="Shift range for structured conjugators; defaults to 2n.")

  @model_validator(mode="after")
  def _check_range(self) -> "ScanConfig":
    if self.n_min > self.n_max:
      raise ValueError("n_min must not exceed n_max")
    return self


class ScanRecord(BaseModel):
  """One scanned instance."""

  family: FamilyTag = Field(description="Instance generator tag.")
  instance_id: str = Field(description="Deterministic instance id; scans are sorted by it.")
  n: int | None = Field(default=None, description="|u| + |v|.")
  u_len: int | None = Field(default=None, description="|u|.")
  v_len: int | None = Field(default=None, description="|v|.")
  min_conj_len: int | None = Field(default=None, description="Exact minimal conjugator length, None when above the cap.")
  cap: int = Field(description="Cap used by the minimal-conjugator search.")
  bounds: dict[str, int | None] = Field(default_factory=dict, description="Upper bounds keyed by bound name.")
  lower_bound: int | None = Field(default=None, description="Proven lower bound for witness families.")
  known_conj_len: int | None = Field(default=None, description="Length (or certified lower estimate) of the constructed conjugator.")
  p_support: int | None = Field(default=None, description="Radius variant P = 2n.")
  p_trivializable: int | None = Field(default=None, description="Radius variant P = n + CLF_B(n).")
  extras: dict[str, int] = Field(default_factory=dict, description="Family-specific integers (size brackets, argument values).")
  violation: bool = Field(default=False, description="A measured length contradicts a bound.")
  error: str | None = Field(default=None, description="Error raised while scanning this instance.")

  def min_conj_cell(self) -> str:
    if self.min_conj_len is not None:
      return str(self.min_conj_len)
    if self.error is not None:
      return ""
    return f">={self.cap + 1}"

  def csv_row(self) -> list[str]:
    def cell(value: Any) -> str:
      return "" if value is None else str(value)

    return [
      self.family,
      self.instance_id,
      cell(self.n),
      cell(self.u_len),
      cell(self.v_len),
      self.min_conj_cell(),
      *(cell(self.bounds.get(name)) for name in CSV_BOUND_COLUMNS.values()),
      "1" if self.violation else "0",
    ]


class DistortionRow(BaseModel):
  """One sample of a distortion profile."""

  n: int = Field(description="Length budget.")
  delta: int = Field(description="max{m : |b^m| <= n}.")
  bound: int | None = Field(default=None, description="Proven upper bound at n, if any.")


class SuiteResult(BaseModel):
  """Outcome of one selftest suite."""

  name: str = Field(description="Suite name.")
  passed: bool = Field(description="Whether every check held.")
  checked: int = Field(description="Number of checks performed.")
  failures: list[str] = Field(default_factory=list, description="First few failing cases.")
  duration_ms: int = Field(default=0, description="Wall time of the suite.")


# --- Telemetry ---


class OperationEvent(BaseModel):
  """One timed call of a tracked operation."""

  model_config = ConfigDict(frozen=True)

  operation: str = Field(description="Tracked operation name, e.g. wreath_conjugacy or cli.clf-scan.")
  at: str = Field(description="UTC ISO timestamp of the call's end.")
  duration_ms: int | None = Field(default=None, description="Wall time of the call.")
  error_type: str | None = Field(default=None, description="Exception class name when the call raised.")
  error: str | None = Field(default=None, description="Exception message when the call raised.")
  props: dict[str, Any] = Field(default_factory=dict, description="Operation-specific fields, such as the group descriptor.")

  @property
  def failed(self) -> bool:
    return self.error_type is not None
