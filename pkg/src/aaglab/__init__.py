"""Toolkit for group-based key exchange and its cryptanalysis.

Free-group and right-angled-Artin platforms for commutator key exchange,
exact subgroup/conjugacy solvers, length-based and quotient attacks, and a
Monte-Carlo lab for measuring how often the attacks' success conditions
hold at random.
"""

__version__ = "0.1.0"

from .words import (  # noqa: E402
    IDENTITY,
    Word,
    ball_size,
    ball_word,
    format_word,
    make_rng,
    parse_word,
    random_tuple,
    sphere_size,
    sphere_word,
    word,
    words_to_flat,
)
from .errors import (  # noqa: E402
    AaglabError,
    AlphabetMismatch,
    GraphComplete,
    IdentityInput,
    NotConjugate,
    NotFreePlatform,
    NotMember,
    SchemaError,
)
from .subgroups import (  # noqa: E402
    SubgroupGraph,
    evaluate_expression,
    has_free_basis,
    lambda_condition,
    quarter_condition,
)
from .conjugacy import (  # noqa: E402
    Coset,
    NoSolution,
    SolutionSet,
    Unique,
    are_conjugate,
    centralizer_generator,
    conjugator,
    meet_cosets,
    primitive_root,
    solve_system,
    solve_system_in_subgroup,
)
from .raag import (  # noqa: E402
    CommutationGraph,
    choose_projection,
    equal_in_group,
    geodesic_length,
    is_trivial,
    msp_heuristic,
    normal_form,
    project,
    reduce_word,
)
from .aag import (  # noqa: E402
    AagInstance,
    AagParams,
    AagPrivate,
    FreePlatform,
    Platform,
    RaagPlatform,
    aag_to_scsp,
    commutator,
    conjugacy_system,
    evaluate_factors,
    keygen,
    recover_key,
    shared_key_alice,
    shared_key_bob,
)
from .attacks import (  # noqa: E402
    AmbientLength,
    AttackReport,
    InnerLength,
    LbaResult,
    ProjectedLength,
    SideResult,
    exact_attack,
    inner_length,
    lba_attack,
    lba_best_descend,
    lba_solve_scsp_star,
    make_objective,
    quotient_attack,
    run_attack,
)
from .lab import (  # noqa: E402
    CSV_HEADER,
    PROPERTY_IDS,
    DensityEstimate,
    DistortionEstimate,
    ExperimentConfig,
    SweepRow,
    attack_success_sweep,
    conjugation_growth_probe,
    density_rows,
    distortion_probe,
    estimate_density,
    fb_density_via_quotient,
    format_row,
    write_csv,
)

__all__ = [
    "__version__",
    # words
    "IDENTITY", "Word", "word", "parse_word", "format_word", "make_rng",
    "random_tuple", "sphere_word", "ball_word", "sphere_size", "ball_size",
    "words_to_flat",
    # errors
    "AaglabError", "AlphabetMismatch", "GraphComplete", "IdentityInput",
    "NotConjugate", "NotFreePlatform", "NotMember", "SchemaError",
    # subgroups
    "SubgroupGraph", "evaluate_expression", "has_free_basis",
    "lambda_condition", "quarter_condition",
    # conjugacy
    "Coset", "NoSolution", "SolutionSet", "Unique", "are_conjugate",
    "centralizer_generator",
    "conjugator", "meet_cosets", "primitive_root", "solve_system",
    "solve_system_in_subgroup",
    # raag
    "CommutationGraph", "choose_projection", "equal_in_group",
    "geodesic_length", "is_trivial", "msp_heuristic", "normal_form",
    "project", "reduce_word",
    # aag
    "AagInstance", "AagParams", "AagPrivate", "FreePlatform", "Platform",
    "RaagPlatform", "aag_to_scsp", "commutator", "conjugacy_system",
    "evaluate_factors", "keygen", "recover_key", "shared_key_alice",
    "shared_key_bob",
    # attacks
    "AmbientLength", "AttackReport", "InnerLength", "LbaResult",
    "ProjectedLength", "SideResult", "exact_attack", "inner_length", "lba_attack",
    "lba_best_descend", "lba_solve_scsp_star", "make_objective",
    "quotient_attack", "run_attack",
    # lab
    "DensityEstimate", "DistortionEstimate", "ExperimentConfig", "SweepRow",
    "PROPERTY_IDS", "CSV_HEADER",
    "attack_success_sweep", "conjugation_growth_probe", "distortion_probe",
    "density_rows", "estimate_density", "fb_density_via_quotient",
    "format_row", "write_csv",
]
