from enum import Enum


class Task(int, Enum):
    """1: will the student apply at all, 2: which opportunities they apply to"""

    APPLICANT = 1
    OPPORTUNITY = 2


class Phase(str, Enum):
    TRAIN = "train"
    TEST = "test"


class FeatureLevel(str, Enum):
    """Cumulative feature sets, each level adds one feature to the previous"""

    BASE = "base"
    BASE_PLUS = "base_plus"
    BASE_PLUS_PLUS = "base_plus_plus"

    @classmethod
    def all_levels(cls) -> list["FeatureLevel"]:
        return [level for level in cls]

    @property
    def depth(self) -> int:
        return FeatureLevel.all_levels().index(self) + 1


class Method(str, Enum):
    """Classifier families selectable in a run config"""

    BASELINE = "baseline"
    LOGREG = "logreg"
    GBT = "gbt"
    SVM = "svm"

    @classmethod
    def learned_methods(cls) -> list["Method"]:
        """Methods that fit parameters to the training examples"""
        return [cls.LOGREG, cls.GBT, cls.SVM]

    @classmethod
    def all_methods(cls) -> list["Method"]:
        return [method for method in cls]


class ModelKind(str, Enum):
    CONSTANT = "constant"
    LOGREG = "logreg"
    GBT = "gbt"
    SVM = "svm"

    @classmethod
    def probabilistic_kinds(cls) -> list["ModelKind"]:
        """Kinds whose score is a probability; the rest emit margins or constants"""
        return [cls.LOGREG, cls.GBT]


class BaselineMode(str, Enum):
    MAJORITY_CLASS = "majority_class"
    ALWAYS_POSITIVE = "always_positive"
