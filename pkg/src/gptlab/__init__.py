"""gptlab: exact simulations of operational probabilistic theories.

Exact-rational substrate (vectors, rank, LP feasibility), finitely-generated
theories with principle checkers, the Boxworld parity box, a one-bit
communication protocol with classical oracles for contrast, and circuits that
decide languages from box advice.
"""

from .exactmath import RMatrix, Rational, RVector, cone_feasible, rank, solve_linear, tensor
from .gptcore import (
    Effect,
    Measurement,
    State,
    SystemType,
    TheoryInstance,
    Transformation,
    check_bit_symmetry,
    check_causality,
    check_tomographic_locality,
    coarse_grain,
    compose_effects,
    compose_states,
    is_completely_mixed,
    is_pure,
    pairing,
    perfectly_distinguishable,
)
from .boxworld import (
    Behavior,
    TruthTable,
    behavior_to_vector,
    gbit_theory,
    is_no_signalling,
    make_f_box,
    sample_local_measurement,
    vector_to_behavior,
)
from .zoo import classical_bit_theory, qubit_sampled_theory, rebit_theory
from .commcc import (
    CommTask,
    ProtocolTranscript,
    det_cc,
    equality_task,
    inner_product_task,
    one_way_cc,
    van_dam_run,
    verify_van_dam_all,
)
from .advice import (
    AdviceCircuit,
    AdviceState,
    LanguageSlice,
    acceptance_probability,
    build_boxworld_advice,
    decide_slice,
    uniform_coin_advice,
)

__version__ = "0.1.0"
