EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_SCHEMA = 2
EXIT_INSUFFICIENT = 3


class AuditError(Exception):
    """ base class for every error the toolkit raises on purpose """

    exit_code = EXIT_FAILURE


class SchemaError(AuditError):

    exit_code = EXIT_SCHEMA

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class ParseError(AuditError):

    exit_code = EXIT_SCHEMA

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class ValidationError(AuditError):

    exit_code = EXIT_SCHEMA

    def __init__(self, message, rows=()):
        super().__init__(message)
        self.rows = list(rows)


class DomainError(AuditError):
    """ an argument is outside the domain of the operation """

    exit_code = EXIT_SCHEMA


class DegenerateInputError(DomainError):
    pass


class InsufficientDataError(AuditError):

    exit_code = EXIT_INSUFFICIENT

    def __init__(self, message, label=None, n=None, required=None):
        super().__init__(message)
        self.label = label
        self.n = n
        self.required = required


class NumericalError(AuditError):
    pass


class DegenerateLandmarkError(DomainError):
    pass


class InsufficientRegionError(InsufficientDataError):
    pass
