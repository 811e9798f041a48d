from enum import Enum


class ErrorCode(Enum):
    VALIDATION_ERROR = "Dataset validation error"
    CONFIG_ERROR = "Invalid configuration"
    UNKNOWN_ENTITY = "Unknown entity"
    FEATURE_MISMATCH = "Feature names do not match the model"
    EMPTY_INPUT = "Empty input"
    NUMERICAL_FAILURE = "Numerical failure"
    MODEL_FORMAT_ERROR = "Model file error"
    INFEASIBLE_CONFIG = "Infeasible generator configuration"
    UNKNOWN_ERROR = "Unknown error"


class ExitCode(Enum):
    SUCCESS = 0
    INPUT_ERROR = 1
    NUMERICAL_ERROR = 2
