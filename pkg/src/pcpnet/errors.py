"""Exception hierarchy shared by every module of the package."""


class PCPNetError(Exception):
    """Base class for all errors raised by pcpnet."""


class CycleDetected(PCPNetError):
    pass


class IncompatibleStructure(PCPNetError):
    pass


class StructureMismatch(PCPNetError):
    pass


class NotAForest(PCPNetError):
    pass


class IncompleteTable(PCPNetError):
    pass


class NotASwapPair(PCPNetError):
    pass


class EmptyPopulation(PCPNetError):
    pass


class TooLargeForOracle(PCPNetError):
    """A brute-force query exceeded its size guard."""


class TooLarge(TooLargeForOracle):
    pass


class ParseError(PCPNetError):
    def __init__(self, line, column, message):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class SemanticError(PCPNetError):
    def __init__(self, slot, message, line=None):
        self.slot = slot
        self.message = message
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{slot}: {message}" if slot is not None else f"{where}{message}")
