import math

from pydantic import BaseModel, ConfigDict, model_validator


class Vocabulary(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: dict[str, int]
    document_frequency: tuple[int, ...]
    n_documents: int

    @model_validator(mode="after")
    def dense_indices(self) -> "Vocabulary":
        if sorted(self.index.values()) != list(range(len(self.index))):
            raise ValueError("vocabulary indices must be dense")
        if len(self.document_frequency) != len(self.index):
            raise ValueError("one document frequency per term")
        if any(df < 1 for df in self.document_frequency):
            raise ValueError("document frequency must be at least 1")
        return self

    def __len__(self):
        return len(self.index)

    def idf(self, term_index: int) -> float:
        return math.log((1 + self.n_documents) / (1 + self.document_frequency[term_index])) + 1.0


class SparseVector(BaseModel):
    """Sorted (index, weight) pairs without explicit zeros"""

    model_config = ConfigDict(frozen=True)

    indices: tuple[int, ...] = ()
    weights: tuple[float, ...] = ()

    @model_validator(mode="after")
    def well_formed(self) -> "SparseVector":
        if len(self.indices) != len(self.weights):
            raise ValueError("indices and weights differ in length")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("indices must be strictly increasing")
        if any(not math.isfinite(w) or w == 0.0 for w in self.weights):
            raise ValueError("weights must be finite and nonzero")
        return self

    @classmethod
    def from_pairs(cls, pairs: dict[int, float]) -> "SparseVector":
        items = sorted((i, w) for i, w in pairs.items() if w != 0.0)
        return cls(indices=tuple(i for i, _ in items), weights=tuple(w for _, w in items))

    def scaled(self, factor: float) -> "SparseVector":
        return SparseVector(indices=self.indices, weights=tuple(w * factor for w in self.weights))

    @property
    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights))
