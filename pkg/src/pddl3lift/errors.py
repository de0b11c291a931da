"""Exception hierarchy."""


class PDDLError(Exception):
    """Base class for every error raised by this package."""


class PDDLSyntaxError(PDDLError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f'{message} (line {line}, column {column})' if line else message)


class UnsupportedFeatureError(PDDLError):
    """Input uses a PDDL construct outside the supported fragment."""

    def __init__(self, construct: str, detail: str = ''):
        self.construct = construct
        msg = f'unsupported PDDL feature: {construct}'
        super().__init__(f'{msg} ({detail})' if detail else msg)


class UndeclaredSymbolError(PDDLError):
    pass


class TypeMismatchError(PDDLError):
    pass


class ResourceLimitError(PDDLError):
    pass


class PlanFormatError(PDDLError):
    pass


class InapplicableActionError(PDDLError):
    def __init__(self, index: int, step: str = ''):
        self.index = index
        super().__init__(f'action {index} {step} is not applicable'.replace('  ', ' '))
