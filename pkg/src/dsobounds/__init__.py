"""Noise thresholds and source-operator certificates for bipartite quantum states."""

from .errors import DomainError
from .inequalities import (
    ExtendedChshCoefficients,
    bell_check,
    chsh_max_seesaw,
    chsh_max_two_qubit,
    chsh_value,
    check_pointwise_bound,
    extended_chsh_value,
)
from .observables import Observable, QubitObservableParams, correlation, qubit_observable
from .source_ops import (
    build_bell,
    build_left,
    build_right,
    certify,
    minimal_positive_beta,
)
from .states import (
    BipartiteState,
    bell_state,
    mix_with_white_noise,
    phased_max_entangled,
    reduced_states,
)
from .thresholds import beta_bell, beta_chsh, gamma, threshold_report

__version__ = "0.1.0"
