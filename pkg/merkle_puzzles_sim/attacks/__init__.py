"""
Eavesdropper attacks
"""

from .base import DEFAULT_GAMMA, AttackConfig, EveOracle, EveOutcome, EveView, grade_outcome
from .brute_force import brute_force_attack
from .consistent import ConstraintSet, sample_consistent_permutation
from .intersection import intersection_informed_guess, simulate_alice_key
from .repeat_bob import repeat_bob_attack
from ..exceptions import InvalidParameterError

ATTACK_NAMES = ('repeat_bob', 'brute_force', 'intersection_informed')


def run_attack(name: str, view: EveView, config: AttackConfig = AttackConfig(), budget: int = 0) -> EveOutcome:
    """Run a query-making attack by name"""
    if name == 'repeat_bob':
        return repeat_bob_attack(view, config)
    elif name == 'brute_force':
        return brute_force_attack(view, budget)
    else:
        raise InvalidParameterError(f"Unknown query attack: {name}")


__all__ = [
    'ATTACK_NAMES', 'DEFAULT_GAMMA', 'AttackConfig', 'ConstraintSet', 'EveOracle', 'EveOutcome', 'EveView',
    'brute_force_attack', 'grade_outcome', 'intersection_informed_guess', 'repeat_bob_attack', 'run_attack',
    'sample_consistent_permutation', 'simulate_alice_key',
]
