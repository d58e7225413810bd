"""ddsopt: derivative-free directional direct-search optimization.

Three drivers share one framework: exclusion-region simple decrease,
mesh-restricted simple decrease, and forcing-function sufficient decrease,
with extreme-barrier constraint handling, a quadratic-model search step, a
subprocess blackbox adapter, builtin benchmark suites, and a data-profile
harness.
"""

from .benchmarks import (Instance, SUITE_NAMES, feasible_lhs_starts,
                         latin_hypercube_starts, manifest, suite,
                         write_manifest)
from .geometry import (MeshSpec, PollDirections, VisitedSet,
                       householder_directions)
from .harness import export, load_histories, profile_report, run_campaign
from .history import (EvalRecord, IterationStats, RunHistory,
                      read_history_csv, read_history_jsonl, records_equal,
                      write_history_csv, write_history_jsonl)
from .models import (QuadraticModel, build_quadratic_model,
                     build_quadratic_models, minimize_model, n_model_points,
                     quadratic_search, select_fit_points)
from .problem import (Evaluation, Problem, evaluate_barrier,
                      subprocess_blackbox)
from .profiles import (ProfileCurve, best_known, compute_profiles,
                       data_profile, default_alpha_grid, evals_to_solve,
                       read_profile_csv, write_profile_csv)
from .solvers import (ALGORITHMS, EquivalenceParams, EvaluationCache,
                      ForcingFunction, IterationOutcome, SolverState,
                      ads_as_orthomads_update, ads_iteration, compute_mu,
                      equivalence_report, mads_iteration, rational_tau, run,
                      run_equivalence_pair, run_orthomads_instance,
                      sdds_accept, sdds_iteration, start_run, update_ads,
                      update_mads)
from .testproblems import (RESIDUAL_BASES, available_problems,
                           builtin_problem, residual_problem)

__version__ = "0.1.0"
