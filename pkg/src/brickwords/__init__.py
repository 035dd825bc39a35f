"""brickwords: simultaneous coding of two substitution fixed points.

Code two fixed points with a brick alphabet, infer the substitution
fixing the index word, verify the projection and joining certificates,
and certify letter dominance, which proves the absence of an initial
balanced pair.
"""

from .balance import (
    AlgorithmOutcome,
    BalancedPair,
    all_seed_pairs,
    balanced_pair_algorithm,
    default_seeds,
    find_initial_balanced_pair,
    is_balanced,
    minimal_decomposition,
)
from .bricks import (
    Brick,
    SimultaneousCoding,
    joins_with,
    next_offset,
    offset_range,
    place_bricks,
    render_diagram,
    simultaneous_coding,
    tau,
)
from .certify import DominanceCertificate, scan_prefix_counts, verify_letter_dominance
from .config import RunConfig, format_run_config, parse_run_config
from .errors import (
    BrickwordsError,
    DomainError,
    InconclusiveError,
    OffsetBoundExceeded,
    ParseError,
    RefutationError,
)
from .inference import (
    CandidateSubstitution,
    CorrectionMaps,
    FactorSet,
    Verdict,
    derive_correction_maps,
    derived_coding,
    factor_closure,
    infer_fixing_substitution,
    infer_substitution_for_word,
    return_words,
    verify_joins,
    verify_projection,
)
from .pipeline import pipeline
from .words import (
    Alphabet,
    Morphism,
    Word,
    apply,
    compose,
    fixed_point_prefix,
    incidence_matrix,
    is_primitive,
    iter_fixed_point,
    parikh,
    parse_morphism,
    parse_word,
    power,
    prolongable_seeds,
)

__version__ = "0.1.0"
