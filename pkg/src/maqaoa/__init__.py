"""maqaoa: multi-angle QAOA toolkit for MaxCut.

Closed-form and statevector expectation values, multi-start BFGS angle
optimization, zero-angle pruning statistics, a gate-error fidelity
model for comparing circuit families by measurement cost, and an
ensemble experiment harness with a CLI front end.
"""

__version__ = "0.1.0"

from .angles import (
    BETA_PERIOD,
    GAMMA_PERIOD,
    AngleAssignment,
    assignment_from_vector,
    count_zero_angles,
    random_assignment,
    shared_assignment,
    zero_assignment,
)
from .analytic import (
    gradient_terms,
    ma_edge_expectation_tf,
    ma_gradient_tf,
    ma_total_expectation_tf,
    qaoa1_edge_expectation,
    qaoa1_edge_expectations,
    qaoa1_total_expectation,
    reset_gradient_terms,
    star_qaoa1_limit,
)
from .graph import (
    EXHAUSTIVE_LIMIT,
    Graph,
    GenerationError,
    GraphParseError,
    all_cut_values,
    component_count,
    cut_value,
    graph_metadata,
    is_connected,
    make_graph,
    maxcut_bruteforce,
    maxcut_local_search,
    parse_edge_list,
    random_gnp_connected,
    random_gnp_triangle_stripped,
    random_regular_triangle_free,
    star_graph,
    triangle_count,
    triangles_through_edge,
    write_edge_list,
)
from .harness import (
    AGGREGATE_COLUMNS,
    ExperimentSpec,
    RunRecord,
    aggregate_records,
    generate_ensemble,
    load_graph_dir,
    parse_ansatz,
    parse_generator_spec,
    report_ar_distribution,
    report_convergence,
    report_fidelity_table,
    report_gap_table,
    run_ensemble,
    write_aggregate_csv,
    write_rows_csv,
)
from .noise import (
    BENCHMARK_FAMILIES,
    STOCK_DEPTHS,
    STOCK_NOISE_MODELS,
    BenchmarkFamily,
    CircuitProfile,
    NoiseModel,
    expected_measurements,
    fidelity,
    mean_pruned_profile,
    measurement_ratio,
    measurement_ratio_grid,
    pruned_profile,
    qaoa_profile,
    write_ratio_csv,
)
from .optimize import (
    NonFiniteObjective,
    OptimizationResult,
    OptimizerConfig,
    bfgs_maximize,
    optimize_ma_qaoa,
    optimize_qaoa,
    pad_layers,
    warm_start_from_qaoa,
)
from .statevector import (
    QUBIT_LIMIT,
    apply_cost_layer,
    apply_mixer_layer,
    edge_expectations,
    expectation_cut,
    prepare_state,
    read_state_dump,
    sample_bitstrings,
    uniform_state,
    write_state_dump,
)
