"""
Key agreement protocols
"""

from .base import AliceState, BobState, KeyAgreementProtocol, ProtocolOutcome, ceil_sqrt, run_key_agreement
from .merkle import MerklePuzzleProtocol
from .transcript import (
    ABORT_TOKEN, Transcript, decode_key, encode_key, key_length, parse_transcript, serialize_transcript,
    validate_alice_message,
)
from ..exceptions import InvalidParameterError

PROTOCOL_NAMES = ('merkle',)


def get_protocol(name: str = 'merkle', n: int = 1, a=None, b=None) -> KeyAgreementProtocol:
    """Instantiate a protocol by name"""
    if name == 'merkle':
        return MerklePuzzleProtocol(n, a, b)
    else:
        raise InvalidParameterError(f"Unknown protocol: {name}")


__all__ = [
    'ABORT_TOKEN', 'PROTOCOL_NAMES', 'AliceState', 'BobState', 'KeyAgreementProtocol', 'MerklePuzzleProtocol',
    'ProtocolOutcome', 'Transcript', 'ceil_sqrt', 'decode_key', 'encode_key', 'get_protocol', 'key_length',
    'parse_transcript', 'run_key_agreement', 'serialize_transcript', 'validate_alice_message',
]
