from pathlib import Path
from typing import Optional

import typer

from research_recommender.components.classifiers.crud import TrainedModelCRUD
from research_recommender.components.domain.schemas import Term
from research_recommender.components.evaluation.controller import rank_candidates
from research_recommender.components.features.controller import FeaturesController, temporal_split
from research_recommender.components.features.schemas import TASK2_FEATURES, FeatureSetId
from research_recommender.components.ingest.controller import IngestController, dataset_digest
from research_recommender.components.text.controller import TextContext
from research_recommender.core.config import DEFAULT_CUTOFF, DEFAULT_MIN_DF
from research_recommender.core.enums import FeatureLevel, Task
from research_recommender.core.exceptions import FeatureMismatchException, UnknownEntityException
from research_recommender.core.utils import format_float, write_manifest
from research_recommender.middlewares.exceptions import exit_on_error


@exit_on_error
def recommend(
    model: Path = typer.Option(..., "--model", help="A Task-2 model file"),
    dataset: Path = typer.Option(..., "--dataset", help="Dataset directory"),
    student: str = typer.Option(..., "--student", help="student_id to recommend for"),
    k: int = typer.Option(10, "--k", min=1, help="List size"),
    cutoff: Optional[str] = typer.Option(None, "--cutoff", help="Defaults to the model's training cutoff"),
    out: Optional[Path] = typer.Option(None, "--out", help="Also write the list and a manifest here"),
):
    """Print the top-k opportunities for one student, tab-separated, best first."""
    trained = TrainedModelCRUD(model).load()
    names = tuple(trained.feature_names)
    if names != TASK2_FEATURES[: len(names)] or not names:
        raise FeatureMismatchException(f"{model} is not a Task-2 model (features {list(names)})")
    feature_set = FeatureSetId(task=Task.OPPORTUNITY, level=FeatureLevel.all_levels()[len(names) - 1])

    loaded = IngestController().load_dataset_or_raise(dataset)
    if loaded.student(student) is None:
        raise UnknownEntityException(f"student {student}")

    cutoff_term = Term.parse(cutoff or trained.metadata.get("cutoff") or DEFAULT_CUTOFF)
    min_df = int(trained.metadata.get("min_df") or DEFAULT_MIN_DF)
    stopwords = frozenset(trained.metadata.get("stopwords", "").split())
    any_term = trained.metadata.get("had_teacher_any_term") == "true"

    _, test_view = temporal_split(loaded, cutoff_term)
    text_ctx = TextContext.build(loaded, cutoff_term, min_df=min_df, stopwords=stopwords)
    features = FeaturesController(loaded, text_ctx, any_term)
    candidates = [o.opportunity_id for o in test_view.candidate_opportunities()]

    ranked = rank_candidates(trained, student, candidates, test_view, feature_set, features, k)
    lines = [f"{opportunity_id}\t{format_float(score)}" for opportunity_id, score in ranked.items]
    for line in lines:
        typer.echo(line)

    if out:
        out.mkdir(parents=True, exist_ok=True)
        (out / "recommendations.tsv").write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
        write_manifest(
            out,
            "recommend",
            {"model": str(model), "dataset": str(dataset), "student": student, "k": k, "cutoff": str(cutoff_term)},
            [],
            dataset_digest(dataset),
            ["recommendations.tsv"],
        )
