"""qsim: a state-vector quantum simulator with Shor, Grover, QFT and repetition-code QEC."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CapacityError,
    ContractViolation,
    DegenerateStateError,
    DomainError,
    NoFactorFound,
    QsimError,
)
from .state import (  # noqa: E402
    MeasurementOutcome,
    QubitRange,
    StateVector,
    apply_1q,
    apply_controlled,
    measure_range,
    new_basis_state,
    sample_counts,
)
