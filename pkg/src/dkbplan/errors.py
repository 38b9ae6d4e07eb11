"""Exception hierarchy shared by every module of the package."""


class DKBError(Exception):
    """Base class for all errors raised by dkbplan."""


class MalformedAxiom(DKBError):
    pass


class ParseError(DKBError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ValidationError(DKBError):
    pass


class MissingGoal(ValidationError):
    pass


class IllFormedAction(ValidationError):
    """Action effect predicate clashes with a simple-join conclusion."""


class InconsistentState(DKBError):
    pass


class NonGroundEffect(DKBError):
    pass


class InvalidParams(DKBError):
    pass


class InvalidRepetitions(DKBError):
    pass


class GenerationExhausted(DKBError):
    pass
