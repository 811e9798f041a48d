from pathlib import Path
from typing import Optional

import typer

from research_recommender.components.ingest.controller import IngestController, dataset_digest
from research_recommender.core.enums import FeatureLevel, Method
from research_recommender.core.exceptions import ConfigException
from research_recommender.core.utils import write_manifest
from research_recommender.flows.schemas import RunConfig
from research_recommender.flows.train_models_flow import TrainModelsFlow
from research_recommender.middlewares.exceptions import exit_on_error


@exit_on_error
def train(
    config: Optional[Path] = typer.Option(None, "--config", help="Run config (TOML) or a manifest"),
    dataset: Optional[Path] = typer.Option(None, "--dataset", help="Dataset directory"),
    out: Optional[Path] = typer.Option(None, "--out", help="Run directory; models go to <out>/models"),
    cutoff: Optional[str] = typer.Option(None, "--cutoff", help="First test term, YEAR.HALF"),
    task: Optional[int] = typer.Option(None, "--task", help="1 or 2"),
    method: Optional[Method] = typer.Option(None, "--method"),
    features: Optional[FeatureLevel] = typer.Option(None, "--features"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    dump_examples: bool = typer.Option(False, "--dump-examples", help="Also write the labelled example tables"),
):
    """Train one model per (task, method, feature set)."""
    run_config = RunConfig.from_file(
        config,
        dataset=str(dataset) if dataset else None,
        out=str(out) if out else None,
        cutoff=cutoff,
        tasks=[task] if task is not None else None,
        methods=[method] if method else None,
        feature_sets=[features] if features else None,
        seeds=[seed] if seed is not None else None,
        dump_examples=dump_examples or None,
    )
    if not run_config.dataset:
        raise ConfigException("no dataset given (--dataset or `dataset` in the config)")

    loaded = IngestController().load_dataset_or_raise(run_config.dataset)
    digest = dataset_digest(run_config.dataset)

    flow = TrainModelsFlow(run_config, loaded, digest)
    written = flow.train_all()

    out_dir = Path(run_config.out)
    outputs = [str(path) for path in written]
    if run_config.dump_examples:
        outputs += [str(path) for path in flow.dump_examples(out_dir / "examples")]

    write_manifest(out_dir, "train", run_config.model_dump(mode="json"), run_config.seeds, digest, outputs)
    for path in written:
        typer.echo(str(path))
