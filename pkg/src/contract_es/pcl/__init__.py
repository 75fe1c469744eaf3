"""Contract logic: formulas, the contract encoding and a sequent prover."""

from .formula import (
    Atom,
    CImpl,
    Conj,
    Formula,
    FormulaSyntaxError,
    Impl,
    Says,
    TRUTH,
    Truth,
    conj,
    encode,
    is_1n_pcl,
    parse_formula,
    says_atom,
)
from .prover import (
    DEFAULT_BUDGET,
    Proof,
    ProofResult,
    Sequent,
    Status,
    check_proof,
    prove,
    provable_atom,
    semantic_provable,
)
