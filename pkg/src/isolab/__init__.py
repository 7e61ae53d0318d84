"""Maximum common induced subgraph and induced subgraph isomorphism for random graphs."""
from .graph_core import (
    DimacsError,
    Graph,
    Seed,
    complement,
    gnp_sample,
    induced_subgraph,
    is_induced_isomorphism,
    rado_prefix,
    read_dimacs,
    write_dimacs,
)
from .mcis import SearchBudget, SolveResult, brute_force_mcis, decision_common, max_common_induced_subgraph
from .sis import SisResult, brute_force_sis, contains_induced, count_induced_embeddings
from .theory import (
    alon_window,
    first_moment_bound_sis,
    lcs_threshold,
    log2_expected_embeddings,
    log2_expected_pairs,
    phi_bound_witness,
    phi_exact,
    sis_threshold,
)
from .experiments import run_lcs_trials, run_sis_trials, sweep_sis_window

__version__ = "0.1.0"
