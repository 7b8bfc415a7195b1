"""groupstab: half-graph censuses, pattern counting and box covers for
relations on Cartesian powers of finite groups."""

__version__ = "0.1.0"

from .errors import (
    ArityMismatch,
    ArityUnsupported,
    AxiomViolation,
    BudgetExceeded,
    CarrierMismatch,
    CrossGroupElement,
    EmptyCarrier,
    IndexOutOfRange,
    NonAbelianGroup,
    PairOutsideCarrier,
    ToolkitError,
)
from .groups import (
    FiniteGroup,
    GroupElement,
    Subgroup,
    builtin_catalogue,
    cyclic,
    dihedral,
    evaluate,
    exponent_and_orders,
    format_cayley_table,
    from_cayley_table,
    heisenberg,
    left_cosets,
    load_cayley_table,
    make_group,
    product,
    subgroup,
    subgroups_up_to_index,
)
from .relations import (
    CarrierSet,
    Relation,
    build_relation,
    cayley_graph,
    density,
    dump_relation,
    load_relation,
    parse_relation,
    relation_algebra,
    save_relation,
    translate_relation,
)
from .halfgraph import (
    HalfGraphReport,
    count_halfgraphs_exact,
    enumerate_halfgraphs,
    is_halfgraph,
    sample_halfgraphs,
    theta_profile,
)
from .patterns import (
    CoverageReport,
    PatternCensus,
    ap_census,
    comparability_defect,
    corner_census,
    lshape_census,
    rect23_census,
    sidelength_coverage,
    square_census,
)
from .boxcover import BoxCover, box_union_stability_check, cover_error, greedy_box_cover
from .genlab import (
    GeneratorSpec,
    coset_box_set,
    instantiate_generator,
    linear_order_relation,
    perturb_relation,
    random_dense,
    sidon_set,
)
from .cli import ExperimentConfig, run_experiment, run_family_trend
