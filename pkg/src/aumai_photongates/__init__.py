"""aumai-photongates: linear-optics Toffoli and Fredkin gate design and simulation."""

__version__ = "0.1.0"

from aumai_photongates.circuits import (  # noqa: E402
    DegeneratePivotError,
    ModeRegister,
    Submatrix43,
    beam_splitter,
    complete_to_unitary,
    compose,
    embed,
    is_embeddable,
    phase_shifter,
)
from aumai_photongates.decorators import ClaimContext, acceptance_claim  # noqa: E402
from aumai_photongates.fock import (  # noqa: E402
    CoherenceError,
    ContractViolation,
    ModeUnitary,
    PhotonicsError,
    PureState,
    apply_unitary,
    permanent,
    post_select,
    transition_amplitude,
)
from aumai_photongates.fredkin import (  # noqa: E402
    BlockConditionError,
    analytic_submatrix,
    parity_check,
    simulate_fredkin,
    solve_for_rows,
    x_coeffs,
    y_coeffs,
)
from aumai_photongates.models import (  # noqa: E402
    AppConfig,
    CPhaseDesign,
    DetectionPattern,
    FockState,
    FredkinSolution,
    OptimizerConfig,
    ReproReport,
)
from aumai_photongates.optimize import (  # noqa: E402
    max_q,
    optimize_analytic_family,
    optimize_global,
)
from aumai_photongates.runlog import RunLog  # noqa: E402
from aumai_photongates.toffoli import (  # noqa: E402
    DesignDomainError,
    DesignInconsistencyError,
    design_cphase,
    effective_gate,
)
from aumai_photongates.verify import ClaimNotFoundError, ReproSuite  # noqa: E402

__all__ = [
    "AppConfig",
    "BlockConditionError",
    "CPhaseDesign",
    "ClaimContext",
    "ClaimNotFoundError",
    "CoherenceError",
    "ContractViolation",
    "DegeneratePivotError",
    "DesignDomainError",
    "DesignInconsistencyError",
    "DetectionPattern",
    "FockState",
    "FredkinSolution",
    "ModeRegister",
    "ModeUnitary",
    "OptimizerConfig",
    "PhotonicsError",
    "PureState",
    "ReproReport",
    "ReproSuite",
    "RunLog",
    "Submatrix43",
    "acceptance_claim",
    "analytic_submatrix",
    "apply_unitary",
    "beam_splitter",
    "complete_to_unitary",
    "compose",
    "design_cphase",
    "effective_gate",
    "embed",
    "is_embeddable",
    "max_q",
    "optimize_analytic_family",
    "optimize_global",
    "parity_check",
    "permanent",
    "phase_shifter",
    "post_select",
    "simulate_fredkin",
    "solve_for_rows",
    "transition_amplitude",
    "x_coeffs",
    "y_coeffs",
]
