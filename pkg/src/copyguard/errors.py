"""Exception taxonomy shared by all modules.

Exit-code convention for the CLI: 2 = input error, 3 = external-service
error, 4 = internal invariant violation.
"""

from __future__ import annotations


class CopyguardError(Exception):
    """Base class; `exit_code` drives the CLI's process exit status."""

    exit_code = 4


class InputError(CopyguardError):
    exit_code = 2


class MalformedRow(InputError):
    def __init__(self, row_number: int, message: str):
        super().__init__(f"row {row_number}: {message}")
        self.row_number = row_number


class DuplicateCreate(InputError):
    def __init__(self, coin: str, row_number: int):
        super().__init__(f"coin {coin!r}: duplicate create record at row {row_number}")
        self.coin = coin
        self.row_number = row_number


class DuplicateOrderingKey(InputError):
    def __init__(self, coin: str, key: tuple[int, int], row_number: int):
        super().__init__(
            f"coin {coin!r}: duplicate ordering key (block={key[0]}, index={key[1]}) at row {row_number}"
        )
        self.coin = coin
        self.key = key


class MissingInput(InputError):
    def __init__(self, path: str, hint: str = ""):
        msg = f"missing input file: {path}"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)
        self.path = path


class SchemaMismatch(InputError):
    pass


class ConfigError(InputError):
    pass


class CreatorUnknown(CopyguardError):
    exit_code = 2


class EmptyLedger(CopyguardError):
    exit_code = 2


class InfeasibleTrade(CopyguardError):
    exit_code = 2


class InfeasibleForCopier(CopyguardError):
    def __init__(self, trade_index: int, message: str = ""):
        detail = message or "reserve too thin for one-to-one replication (Y <= 2q)"
        super().__init__(f"trade {trade_index}: {detail}")
        self.trade_index = trade_index


class InvalidTradeSequence(CopyguardError):
    exit_code = 2


class DomainError(CopyguardError):
    exit_code = 2


class InfeasibleSpec(InputError):
    pass


class ClassifierUnavailable(CopyguardError):
    exit_code = 3


class TransportError(CopyguardError):
    exit_code = 3


class MalformedReply(CopyguardError):
    exit_code = 3


class LogprobsUnavailable(CopyguardError):
    exit_code = 3


class DegenerateTrainingSet(CopyguardError):
    pass


class SingleClassValidation(CopyguardError):
    pass


class NoSelections(CopyguardError):
    pass
