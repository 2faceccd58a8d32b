"""Exception hierarchy shared by every stage of the pipeline."""


class UamSimError(Exception):
    pass


class ScenarioError(UamSimError):
    """Raised for anything that stops a scenario from being ingested."""


class MissingFile(ScenarioError):
    def __init__(self, path):
        super().__init__(f"missing input file: {path}")
        self.path = path


class SchemaViolation(ScenarioError):
    def __init__(self, file, row, column, message):
        super().__init__(f"{file}: row {row}, column {column!r}: {message}")
        self.file = file
        self.row = row
        self.column = column


class DanglingReference(ScenarioError):
    def __init__(self, ref, where=""):
        msg = f"unresolved reference {ref!r}"
        if where:
            msg += f" in {where}"
        super().__init__(msg)
        self.ref = ref


class InvariantViolation(ScenarioError):
    pass


class InvalidDimension(ScenarioError):
    pass


class UnreachablePair(UamSimError):
    def __init__(self, origin, destination):
        super().__init__(f"no path from {origin!r} to {destination!r}")
        self.origin = origin
        self.destination = destination


class NonPositiveRate(UamSimError):
    pass


class NegativeDistance(UamSimError):
    pass


class NoSuitableAircraft(UamSimError):
    pass


class NoFeasiblePair(UamSimError):
    pass


class NoFeasibleType(UamSimError):
    pass


class Infeasible(UamSimError):
    pass


class NonConvergence(UamSimError):
    """Iteration cap reached before the switching fraction fell below tolerance."""
