"""
Public transcript of a one-round key agreement and its line format

    cA: v1,v2,...,va
    cB: v | ABORT
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from ..exceptions import ProtocolViolationError

ABORT_TOKEN = 'ABORT'


def validate_alice_message(c_a: Iterable[int], expected_length: int, n: int) -> Tuple[int, ...]:
    """
    Check that c_A is the canonical encoding of an image set

    Args:
        c_a: Alice's message
        expected_length: a, the number of images Alice publishes
        n: Oracle domain size

    Returns:
        c_A as a tuple of ints
    """
    values = tuple(int(v) for v in c_a)
    if len(values) != expected_length:
        raise ProtocolViolationError(f"c_A has {len(values)} images, expected {expected_length}")
    if any(later <= earlier for earlier, later in zip(values, values[1:])):
        raise ProtocolViolationError(f"c_A is not strictly increasing: {list(values)}")
    if values and not (1 <= values[0] and values[-1] <= n):
        raise ProtocolViolationError(f"c_A contains images outside 1..{n}")
    return values


@dataclass(frozen=True)
class Transcript:
    """Messages c = (c_A, c_B); c_b of None is the abort marker"""
    c_a: Tuple[int, ...]
    c_b: Optional[int] = None

    def __post_init__(self):
        if any(later <= earlier for earlier, later in zip(self.c_a, self.c_a[1:])):
            raise ProtocolViolationError(f"c_A is not strictly increasing: {list(self.c_a)}")
        if self.c_b is not None and self.c_b not in self.c_a:
            raise ProtocolViolationError(f"c_B={self.c_b} does not identify an image in c_A")

    @property
    def aborted(self) -> bool:
        return self.c_b is None


def serialize_transcript(transcript: Transcript) -> str:
    c_a = ','.join(str(v) for v in transcript.c_a)
    c_b = ABORT_TOKEN if transcript.aborted else str(transcript.c_b)
    return f"cA: {c_a}\ncB: {c_b}\n"


def parse_transcript(text: str) -> Transcript:
    """Inverse of serialize_transcript"""
    fields = {}
    for line in text.strip().splitlines():
        label, sep, value = line.partition(':')
        if not sep or label.strip() not in ('cA', 'cB'):
            raise ProtocolViolationError(f"Malformed transcript line: {line!r}")
        if label.strip() in fields:
            raise ProtocolViolationError(f"Repeated {label.strip()} line in transcript")
        fields[label.strip()] = value.strip()

    if set(fields) != {'cA', 'cB'}:
        raise ProtocolViolationError("Transcript needs exactly one cA and one cB line")

    try:
        c_a = tuple(int(v) for v in fields['cA'].split(',')) if fields['cA'] else ()
        c_b = None if fields['cB'] == ABORT_TOKEN else int(fields['cB'])
    except ValueError as e:
        raise ProtocolViolationError(f"Non-integer value in transcript: {e}") from e
    return Transcript(c_a, c_b)


def key_length(n: int) -> int:
    """Key length in bits, ceil(log2 n)"""
    return (n - 1).bit_length()


def encode_key(key: int, n: int) -> str:
    """Fixed-width binary form of a key in {1..n}"""
    if not 1 <= key <= n:
        raise ProtocolViolationError(f"Key {key} outside 1..{n}")
    width = key_length(n)
    return format(key - 1, f'0{width}b') if width else ''


def decode_key(bits: str, n: int) -> int:
    if len(bits) != key_length(n):
        raise ProtocolViolationError(f"Key encoding must have {key_length(n)} bits, got {len(bits)}")
    if set(bits) - {'0', '1'}:
        raise ProtocolViolationError(f"Key encoding must be binary, got {bits!r}")
    key = (int(bits, 2) if bits else 0) + 1
    if key > n:
        raise ProtocolViolationError(f"Decoded key {key} outside 1..{n}")
    return key
