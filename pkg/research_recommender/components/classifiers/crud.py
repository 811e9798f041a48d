import json
from pathlib import Path

from pydantic import ValidationError

from research_recommender.components.classifiers.schemas import TrainedModel
from research_recommender.core.config import MODEL_FORMAT_VERSION
from research_recommender.core.enums import ModelKind
from research_recommender.core.exceptions import ModelFormatException
from research_recommender.core.log import logger


MODEL_MAGIC = "RESEARCH-RECOMMENDER-MODEL"


class TrainedModelCRUD:
    """
    Model files are UTF-8 text:

        RESEARCH-RECOMMENDER-MODEL
        version 1
        {...TrainedModel as JSON...}

    JSON floats are written with shortest round-trip repr, so reloading is lossless.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def save(self, model: TrainedModel):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        body = model.model_dump_json()
        self.path.write_text(f"{MODEL_MAGIC}\nversion {MODEL_FORMAT_VERSION}\n{body}\n", encoding="utf-8")
        logger.info(f"Saved {model.kind.value} model to {self.path}")

    def load(self) -> TrainedModel:
        if not self.path.is_file():
            raise ModelFormatException(f"model file not found: {self.path}")

        try:
            text = self.path.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            raise ModelFormatException(f"{self.path} is not a model file")

        lines = text.split("\n", 2)
        if len(lines) < 3 or lines[0] != MODEL_MAGIC:
            raise ModelFormatException(f"{self.path} is not a model file (bad magic line)")

        version_line = lines[1].split()
        if len(version_line) != 2 or version_line[0] != "version" or not version_line[1].isdigit():
            raise ModelFormatException(f"{self.path} has a malformed version line")
        version = int(version_line[1])
        if version != MODEL_FORMAT_VERSION:
            raise ModelFormatException(
                f"{self.path} has format version {version}, expected {MODEL_FORMAT_VERSION}"
            )

        try:
            payload = json.loads(lines[2])
        except json.JSONDecodeError as e:
            raise ModelFormatException(f"{self.path} is corrupt: {e}")

        kind = payload.get("kind") if isinstance(payload, dict) else None
        if kind not in {k.value for k in ModelKind}:
            raise ModelFormatException(f"{self.path} has unknown model kind {kind!r}")

        try:
            return TrainedModel.model_validate(payload)
        except ValidationError as e:
            raise ModelFormatException(f"{self.path} is corrupt: {e.error_count()} invalid field(s)")
