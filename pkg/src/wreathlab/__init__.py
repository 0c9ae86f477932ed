# pyright: reportPrivateUsage=false
"""wreathlab: conjugacy and conjugator length in wreath products and free solvable groups."""

from ._config import VERSION, Limits, current_limits, use_limits
from ._conjugacy import (
  ConjugacyCertificate,
  CosetPartition,
  base_conjugator,
  build_conjugator_h,
  conjugacy_branch,
  coset_partition,
  pi_product,
  pi_table,
  solvable_certificate,
  solvable_conjugacy,
  trivialization_conjugator,
  verify_conjugator,
  wreath_conjugacy,
)
from ._exceptions import InputError, InternalError, LogicError, ResourceError, WreathLabError
from ._fox import GroupRingElement, QuotientMap, augmentation, fox_derive, fox_derive_element, fox_star, kernel_decompose, ring_combine
from ._groups import (
  Cyclic,
  FreeAbelian,
  FreeGroup,
  GroupOracle,
  Perm3,
  bfs_ball,
  cyclic_power_solve,
  group_op,
  parse_group,
  word_length,
)
from ._lab import (
  DistortionProfile,
  WitnessFamily,
  bound_evaluate,
  centralizer_length,
  clf_scan,
  clf_scan_async,
  measure_distortion,
  min_conjugator_length,
  witness_base,
  witness_centralizer,
  witness_distortion,
  witness_triangle,
)
from ._magnus import (
  FreeSolvable,
  MagnusImage,
  SolvableElement,
  divergence,
  magnus_algebraic,
  magnus_geometric,
  solvable_cyclic_distortion_bound,
  solvable_normal_form,
)
from ._selftest import run_selftest
from ._words import ReducedWord, commutator, parse_word, random_word, reduce
from ._wreath import (
  FinSuppMap,
  WreathElement,
  WreathProduct,
  visiting_path_length,
  wreath_inv,
  wreath_length_lower_bound,
  wreath_mul,
  wreath_word_length,
)
from .models import BoundParameters, ConjugacyVerdict, DistortionRow, OperationEvent, ScanConfig, ScanRecord, SuiteResult

# Export public API
__all__ = [
  "VERSION",
  "Limits",
  "current_limits",
  "use_limits",
  "WreathLabError",
  "InputError",
  "ResourceError",
  "LogicError",
  "InternalError",
  "ReducedWord",
  "reduce",
  "parse_word",
  "commutator",
  "random_word",
  "GroupOracle",
  "FreeGroup",
  "FreeAbelian",
  "Cyclic",
  "Perm3",
  "parse_group",
  "group_op",
  "bfs_ball",
  "word_length",
  "cyclic_power_solve",
  "FinSuppMap",
  "WreathElement",
  "WreathProduct",
  "wreath_mul",
  "wreath_inv",
  "visiting_path_length",
  "wreath_word_length",
  "wreath_length_lower_bound",
  "GroupRingElement",
  "QuotientMap",
  "ring_combine",
  "augmentation",
  "fox_derive",
  "fox_derive_element",
  "fox_star",
  "kernel_decompose",
  "FreeSolvable",
  "SolvableElement",
  "MagnusImage",
  "magnus_algebraic",
  "magnus_geometric",
  "solvable_normal_form",
  "divergence",
  "solvable_cyclic_distortion_bound",
  "CosetPartition",
  "ConjugacyCertificate",
  "coset_partition",
  "pi_product",
  "pi_table",
  "conjugacy_branch",
  "build_conjugator_h",
  "trivialization_conjugator",
  "base_conjugator",
  "verify_conjugator",
  "wreath_conjugacy",
  "solvable_certificate",
  "solvable_conjugacy",
  "DistortionProfile",
  "WitnessFamily",
  "measure_distortion",
  "centralizer_length",
  "witness_centralizer",
  "witness_distortion",
  "witness_triangle",
  "witness_base",
  "min_conjugator_length",
  "bound_evaluate",
  "clf_scan",
  "clf_scan_async",
  "run_selftest",
  "BoundParameters",
  "ConjugacyVerdict",
  "DistortionRow",
  "OperationEvent",
  "ScanConfig",
  "ScanRecord",
  "SuiteResult",
]
