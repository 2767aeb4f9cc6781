# Exceptions raised by the language front end and the runtime.
# Logical failure of a computation is never an exception (it is the Fail value).


class LanguageError(Exception):
    pass


class ParseError(LanguageError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super(ParseError, self).__init__(message)


class ResolveError(LanguageError):
    pass


class FunctionalPatternError(LanguageError):
    pass


class UnsupportedPatternError(LanguageError):
    pass


class ValidationError(LanguageError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super(ValidationError, self).__init__("\n".join(self.diagnostics))


class EvalError(LanguageError):
    pass


class StoreError(Exception):
    pass


class StepLimitExceeded(Exception):
    pass
