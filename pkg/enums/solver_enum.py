from enum import Enum


class SolverStatus(str, Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    INFEASIBLE = "Infeasible"
    NUMERICAL_FAILURE = "NumericalFailure"
    SEARCH_FAILED = "SearchFailed"


class SolverKind(str, Enum):
    GAS = "gas"
    BA = "ba"


class ProblemKind(str, Enum):
    BERNOULLI = "bernoulli"
    GAUSSIAN = "gaussian"
    CONSTANT_SLOPE = "constant-slope"
    EMPIRICAL = "empirical"


class OracleModel(str, Enum):
    BERNOULLI = "bernoulli"
    GAUSSIAN = "gaussian"
    CONSTANT_SLOPE = "constant-slope"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class InfoUnits(str, Enum):
    NATS = "nats"
    BITS = "bits"
