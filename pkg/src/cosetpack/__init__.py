"""cosetpack: word metrics, coset distances, and packing experiments.

The library computes, with exact integer/rational arithmetic throughout:

* word lengths and balls in finitely generated groups (``get_group``),
* distances between left cosets of registered subgroups, both as witnessed
  upper bounds and exact values (``coset_distance_upper`` /
  ``coset_distance_exact``),
* lower bounds on packing numbers via explicit pairwise-close coset families
  (``build_packing_instance``), and
* upper bounds certified through finite quotients (``certify_packing_upper``).

Everything is deterministic; searches that run out of budget answer
``UNKNOWN`` rather than guessing.
"""

from .core import (
    DEFAULT_NODE_CAP,
    Ball,
    BfsCache,
    BudgetExceededError,
    ElementFormatError,
    GeneratingSet,
    Group,
    MixedElementError,
    UNKNOWN,
    ball_with_gens,
    word_length_with_gens,
)
from .zoo import (
    base_of_rat,
    get_group,
    group_keys,
    position_of_prime,
    prime_at,
    rat_of_base,
    two_transitive_witness,
)
from .subgroups import SubgroupDesc, subgroup, subgroup_names
from .clique import greedy_clique, max_clique
from .cosets import (
    PackingInstance,
    SearchBudget,
    Witness,
    build_packing_instance,
    coset_distance_exact,
    coset_distance_upper,
    coset_eq,
    dedupe_cosets,
    packing_lower_bound,
    two_transitive_coset_family,
)
from .certificates import (
    Attempt,
    Certificate,
    CertificationOutcome,
    FiniteQuotient,
    SeparationSet,
    bs12_mod,
    build_separation_set,
    certify_packing_upper,
    counterexample_congruence,
    heisenberg_mod_k,
    lamplighter_congruence,
    modk_certificate,
    split_mod_k,
    standard_quotients,
    zn_mod_k,
)
from .report import CSV_HEADER, ReportRow, emit_report
from .scenarios import (
    ConfigError,
    ScenarioConfig,
    ScenarioResult,
    parse_config,
    run_scenario,
    run_scenario_full,
    scenario_names,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_NODE_CAP", "Ball", "BfsCache", "BudgetExceededError",
    "ElementFormatError", "GeneratingSet", "Group", "MixedElementError",
    "UNKNOWN", "ball_with_gens", "word_length_with_gens",
    "base_of_rat", "get_group", "group_keys", "position_of_prime",
    "prime_at", "rat_of_base", "two_transitive_witness",
    "SubgroupDesc", "subgroup", "subgroup_names",
    "greedy_clique", "max_clique",
    "PackingInstance", "SearchBudget", "Witness", "build_packing_instance",
    "coset_distance_exact", "coset_distance_upper", "coset_eq",
    "dedupe_cosets", "packing_lower_bound", "two_transitive_coset_family",
    "Attempt", "Certificate", "CertificationOutcome", "FiniteQuotient",
    "SeparationSet", "bs12_mod", "build_separation_set",
    "certify_packing_upper", "counterexample_congruence",
    "heisenberg_mod_k", "lamplighter_congruence", "modk_certificate",
    "split_mod_k", "standard_quotients", "zn_mod_k",
    "CSV_HEADER", "ReportRow", "emit_report",
    "ConfigError", "ScenarioConfig", "ScenarioResult", "parse_config",
    "run_scenario", "run_scenario_full", "scenario_names",
    "__version__",
]
