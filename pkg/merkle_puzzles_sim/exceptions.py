"""
Custom exceptions for Merkle Puzzles Sim
Provides meaningful exceptions that allow clients to make informed decisions
about error handling. Each class carries the process exit code the CLI uses.
"""


class MerklePuzzlesError(Exception):
    """Base exception for all Merkle Puzzles Sim errors"""
    exit_code = 1


class InvalidDomainError(MerklePuzzlesError):
    """Raised when an oracle domain size is not a positive integer"""
    pass


class OutOfRangeError(MerklePuzzlesError):
    """Raised when a query position falls outside 1..n"""
    pass


class OracleAccessError(MerklePuzzlesError):
    """Raised when test-only oracle access is used outside verification mode"""
    pass


class InvalidParameterError(MerklePuzzlesError):
    """Raised when protocol or analysis parameters are out of range"""
    pass


class ProtocolViolationError(MerklePuzzlesError):
    """Raised when a message or state breaks the protocol contract"""
    exit_code = 2


class InconsistentConstraintsError(MerklePuzzlesError):
    """Raised when a partial permutation repeats a position or an image"""
    pass


class ConfigurationError(MerklePuzzlesError):
    """Raised when configuration is invalid or missing"""
    pass


class UsageError(MerklePuzzlesError):
    """Raised when a command is invoked with an unsupported option value"""
    pass


class FileOperationError(MerklePuzzlesError):
    """Raised when file operations fail"""
    pass


class InvariantViolationError(MerklePuzzlesError):
    """Raised when an accounting or verification invariant does not hold"""
    exit_code = 2
