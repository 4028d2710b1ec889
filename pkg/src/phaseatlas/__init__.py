"""Topological phase classification of configurations on discretized tori."""
from .cohomology import (
    AbelianGroup,
    CWComplex,
    IntMatrix,
    cohomology_group,
    parse_cw,
    reduced_k0,
    smith_normal_form,
    torus_cw,
)
from .configspace import (
    GeneralConfiguration,
    Homotopy,
    ParameterGrid,
    admissibility_check,
    from_hamiltonian,
    homotopy_interpolate,
    is_localizable,
)
from .ensemble import MeasureOnGrid, ensemble_eval, path_equivalence_certify
from .invariants import (
    PhaseClass,
    chern_number_fhs,
    chern_vector,
    classify,
    degree_matrix,
    same_phase,
    winding_number,
)
from .numkernel import eigh, lowest_band_projector
from .states import (
    INFINITY,
    PureStatePoint,
    UnitalizedElement,
    lift_eval,
    product_state_eval,
    tau_eval,
    unitalized_eval,
    weak_escape_probe,
)

__version__ = "0.1.0"
