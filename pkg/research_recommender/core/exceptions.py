from typing import TYPE_CHECKING

from research_recommender.core.exit_code import ErrorCode, ExitCode

if TYPE_CHECKING:
    from research_recommender.components.ingest.schemas import ValidationReport


class RecommenderException(Exception):
    """The base exception class for recommender errors."""

    error_code: str = ErrorCode.UNKNOWN_ERROR.name
    exit_code: int = ExitCode.INPUT_ERROR.value
    message: str = ErrorCode.UNKNOWN_ERROR.value
    meta_data: dict = {}

    def __init__(self, detail: str | None = None, **meta_data):
        self.meta_data = dict(meta_data)
        if detail:
            self.meta_data["detail"] = detail
        super().__init__(self.__str__())

    def __repr__(self):
        return "{}(error_code: {}, exit_code: {}, message: {}, meta_data: {})".format(
            self.__class__.__name__,
            self.error_code,
            self.exit_code,
            self.message,
            self.meta_data,
        )

    def __str__(self):
        detail = self.meta_data.get("detail")
        return f"{self.message}: {detail}" if detail else self.message


class DatasetValidationException(RecommenderException):
    error_code = ErrorCode.VALIDATION_ERROR.name
    message = ErrorCode.VALIDATION_ERROR.value

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(f"{len(report.errors)} error(s)")


class ConfigException(RecommenderException):
    error_code = ErrorCode.CONFIG_ERROR.name
    message = ErrorCode.CONFIG_ERROR.value


class UnknownEntityException(RecommenderException):
    error_code = ErrorCode.UNKNOWN_ENTITY.name
    message = ErrorCode.UNKNOWN_ENTITY.value


class FeatureMismatchException(RecommenderException):
    error_code = ErrorCode.FEATURE_MISMATCH.name
    message = ErrorCode.FEATURE_MISMATCH.value


class EmptyInputException(RecommenderException):
    error_code = ErrorCode.EMPTY_INPUT.name
    message = ErrorCode.EMPTY_INPUT.value


class NumericalFailureException(RecommenderException):
    error_code = ErrorCode.NUMERICAL_FAILURE.name
    exit_code = ExitCode.NUMERICAL_ERROR.value
    message = ErrorCode.NUMERICAL_FAILURE.value


class ModelFormatException(RecommenderException):
    error_code = ErrorCode.MODEL_FORMAT_ERROR.name
    message = ErrorCode.MODEL_FORMAT_ERROR.value


class InfeasibleConfigException(RecommenderException):
    error_code = ErrorCode.INFEASIBLE_CONFIG.name
    message = ErrorCode.INFEASIBLE_CONFIG.value
