"""
Permutation samplers for the random permutation oracle
"""

from .fisher_yates import FisherYatesPermutation
from .swap_or_not import SwapOrNotPermutation
from ..exceptions import InvalidParameterError

# Above this domain size the oracle answers lazily instead of building a table
EAGER_LIMIT = 2 ** 20

SAMPLERS = ('auto', 'fisher_yates', 'swap_or_not')


def build_permutation(n: int, seed: int, sampler: str = 'auto'):
    """Build the permutation backend for the requested sampler"""
    if sampler == 'auto':
        sampler = 'fisher_yates' if n <= EAGER_LIMIT else 'swap_or_not'

    if sampler == 'fisher_yates':
        return FisherYatesPermutation(n, seed)
    elif sampler == 'swap_or_not':
        return SwapOrNotPermutation(n, seed)
    else:
        raise InvalidParameterError(f"Unknown sampler: {sampler}")


__all__ = ['build_permutation', 'FisherYatesPermutation', 'SwapOrNotPermutation', 'EAGER_LIMIT', 'SAMPLERS']
