"""Contract event structures with circular enablings.

Decision procedures for configurations, reachability, agreements and
duties, an encoding into propositional contract logic with a sequent
prover, and a simulated contract broker.
"""

from .agreement import (
    AgreementResult,
    Classification,
    DutyReport,
    check_theorem3,
    duties,
    duty_report,
    find_agreement,
    perform,
)
from .broker import SessionLog, Strategy, Verdict, find_agreeing_subset, run_session
from .cli import cli_main
from .configurations import (
    Justification,
    OrderingWitness,
    enumerate_configurations,
    is_configuration,
    is_x_configuration,
    maximal_configuration,
    reachable_events,
    reachable_with_credit,
)
from .model import (
    Clause,
    Contract,
    ContractError,
    ContractSyntaxError,
    Diagnostic,
    DuplicateDeclarationError,
    GoalSet,
    Kind,
    OwnershipClashError,
    UndeclaredError,
    build_contract,
    compose,
    compose_all,
    enables,
    load_contract,
    ok,
    parse_contract,
    render,
    validate,
)

__version__ = "0.1.0"
