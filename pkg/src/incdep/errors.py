"""Exception hierarchy shared by every module of the package."""


class IncdepError(Exception):
    """Base class for all errors raised by this package."""


class ProblemError(IncdepError, ValueError):
    """A problem file or atom is malformed."""


class ParseError(ProblemError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ArityError(ProblemError):
    pass


class DialectError(ProblemError):
    pass


class MissingQuery(ProblemError):
    pass


class DuplicateQuery(ProblemError):
    pass


class UnknownVariable(IncdepError, KeyError):
    def __str__(self):
        return f"variable {self.args[0]!r} is not in the team's universe"


class PreconditionViolated(IncdepError, ValueError):
    pass


class CapExceeded(IncdepError):
    """An exhaustive search or saturation would exceed its configured budget."""


class WitnessVerificationFailed(IncdepError):
    """No team separates the assumptions from a query the rules do not derive.

    The last witness attempt is a complete search, so this means the query
    holds in every two-valued model of the assumptions while the rules
    cannot derive it.  ``query`` is the atom in question.
    """

    def __init__(self, message, query=None):
        super().__init__(message)
        self.query = query


class CoverageComplete(IncdepError):
    """Every consistent constant tuple is covered, so no forbidden value exists."""


class CatalogueGap(IncdepError):
    """No catalogue team refutes a candidate consequence."""
