"""General parameter-shift rules, reconstructions and derived tools for
parametrized quantum circuits on a dense statevector simulator."""

from .circuit import (
    CachedCost,
    Circuit,
    FixedGate,
    Generator,
    Observable,
    ParamGate,
    PauliTerm,
    cost_function,
    dump_circuit,
    expectation,
    load_circuit,
    overlap_sq,
    restrict,
    simulate,
)
from .derivatives import (
    DerivativeEngine,
    DerivativeReport,
    decompose,
    gradient,
    gradient_and_hessian,
    gradient_and_hessian_diagonal,
    hessian,
    hessian_diagonal,
    metric_tensor,
    simultaneous_frequency_count,
)
from .errors import InputError, NumericalError, ShiftkitError
from .optimizers import (
    QADModel,
    OptTrace,
    qad_build,
    qad_eval,
    qad_gradient,
    qad_minimize,
    rotosolve,
    rotosolve_step,
)
from .qaoa import Graph, analytic_bound, maxcut_hamiltonian, qaoa_circuit, qaoa_eval_counts
from .reconstruction import (
    TrigPoly,
    full_reconstruct_equidistant,
    kernel,
    reconstruct_nonuniform,
    reconstruct_odd,
    reconstruct_even,
)
from .resources import ResourceQuery, coeff_norm, hessian_shot_budgets, metric_neval, neval
from .resources import shot_budget_univariate
from .rules import (
    GaussLegendre,
    MonteCarlo,
    ShiftRule,
    apply_rule,
    arbitrary_rule,
    first_order_rule,
    second_order_rule,
    stochastic_derivative,
)
from .spectrum import Spectrum, circuit_spectra, generator_spectrum, param_spectrum

__version__ = "0.1.0"
