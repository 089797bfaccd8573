"""Grassmann-algebra symbol calculus for qubit logic gates and automata."""

from .grassmann import (
    GeneratorId,
    GeneratorPool,
    GrassmannElement,
    PoolMismatchError,
    UnpairedGeneratorError,
    ZERO_TOLERANCE,
    berezin_integrate,
    grassmann_exp,
    grassmann_log,
    involution,
    left_derivative,
    max_abs_diff,
    multiply,
    parity_split,
    render_element,
    substitute,
)
from .fock import (
    BasisIndex,
    FockOperator,
    FockVector,
    annihilation,
    basis_state,
    creation,
    dual_pairing,
    gate_matrix,
    hermitian_evolution,
    pauli_string_identity_checks,
)
from .symbols import (
    CoherentVector,
    FBOperator,
    SymbolExpr,
    apply_symbol,
    canonical_coeffs,
    coherent_bra,
    coherent_ket,
    convolve,
    covariant_symbol,
    fb_apply,
    matrix_symbol,
    overlap,
    projected_fb_operator,
    render_symbol,
    resolution_of_identity_check,
    scalar_product,
    state_symbol,
    symbol_max_dev,
    to_fb_operator,
)
from .gates import Gate, GateConsistencyError, deutsch_prime, gate_arity, gate_names, make_gate
from .compose import (
    CircuitNode,
    CompositionError,
    Wire,
    build_circuit,
    fb_compose,
    plug_input,
    serial,
)
from .automaton import (
    DiscreteAction,
    EvolutionReport,
    Letter,
    Word,
    autonomous_evolve,
    evolve_word,
    word_matrix,
    word_symbol_convolution,
    word_symbol_path_integral,
)
from .parser import ParseError, parse_circuit_text, parse_text, parse_word_text, render_circuit

__version__ = "0.1.0"
