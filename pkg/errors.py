"""
Error types
Shared exception hierarchy for the HUOSP mining engine
"""


class HuospError(Exception):
    """Base class for every error raised by the engine"""


class ValidationError(HuospError, ValueError):
    """Bad input: thresholds, parameters, files. The CLI exits with 2 on these."""


class InvalidThresholds(ValidationError):
    pass


class InvalidParams(ValidationError):
    pass


class LimitsExceeded(ValidationError):
    pass


class UnknownItem(ValidationError, KeyError):
    """Item missing from the external utility table (strict mode)"""

    def __init__(self, item):
        self.item = item
        super().__init__(f"Item '{item}' has no external utility")

    def __str__(self):
        return self.args[0]


class ParseError(ValidationError):
    def __init__(self, line, column, reason):
        self.line = line
        self.column = column
        self.reason = reason
        super().__init__(f"line {line}, column {column}: {reason}")


class UtilityMismatch(ValidationError):
    def __init__(self, sid, declared, computed):
        self.sid = sid
        self.declared = declared
        self.computed = computed
        super().__init__(
            f"sequence {sid}: declared SUtility {declared} but computed {computed}"
        )


class NoOccurrence(HuospError, LookupError):
    """The pattern does not occur where it was required to"""


class ZeroUtilitySequence(HuospError, ValueError):
    pass


class PositionOutOfRange(HuospError, IndexError):
    pass


class NotAGenerator(HuospError, ValueError):
    """The pattern is not a one-item extension of the given generator"""


class IllegalExtension(HuospError, ValueError):
    pass
