import json
from pathlib import Path
from typing import Optional

import typer

from research_recommender.components.domain.schemas import Term
from research_recommender.components.features.controller import temporal_split
from research_recommender.components.ingest.controller import (
    IngestController,
    dataset_digest,
    summarize as summarize_dataset,
    summary_frame,
)
from research_recommender.core.utils import write_manifest
from research_recommender.middlewares.exceptions import exit_on_error


@exit_on_error
def summarize(
    dataset: Path = typer.Option(..., "--dataset", help="Dataset directory"),
    cutoff: Optional[str] = typer.Option(None, "--cutoff", help="Also summarize the periods before and from this term"),
    out: Optional[Path] = typer.Option(None, "--out", help="Also write summary.csv and a manifest here"),
):
    """Print dataset counts and rates as JSON."""
    loaded = IngestController().load_dataset_or_raise(dataset)
    summaries = {"all": summarize_dataset(loaded)}

    if cutoff:
        train_view, test_view = temporal_split(loaded, Term.parse(cutoff))
        for scope, view in (("train", train_view), ("test", test_view)):
            summaries[scope] = summarize_dataset(
                loaded, applications=view.applications(), opportunities=view.candidate_opportunities()
            )

    typer.echo(json.dumps({scope: summary.model_dump() for scope, summary in summaries.items()}, indent=2))

    if out:
        out.mkdir(parents=True, exist_ok=True)
        summary_frame(summaries).to_csv(out / "summary.csv", index=False, lineterminator="\n", na_rep="")
        write_manifest(
            out,
            "summarize",
            {"dataset": str(dataset), "cutoff": cutoff},
            [],
            dataset_digest(dataset),
            ["summary.csv"],
        )
