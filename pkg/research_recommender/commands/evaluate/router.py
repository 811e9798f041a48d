from pathlib import Path
from typing import Optional

import typer

from research_recommender.components.ingest.controller import IngestController, dataset_digest
from research_recommender.core.enums import FeatureLevel, Method
from research_recommender.core.exceptions import ConfigException
from research_recommender.flows.run_experiment_flow import run_experiment
from research_recommender.flows.schemas import RunConfig
from research_recommender.middlewares.exceptions import exit_on_error


@exit_on_error
def evaluate(
    config: Optional[Path] = typer.Option(None, "--config", help="Run config (TOML) or a manifest"),
    dataset: Optional[Path] = typer.Option(None, "--dataset", help="Dataset directory"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory receiving the reports"),
    cutoff: Optional[str] = typer.Option(None, "--cutoff", help="First test term, YEAR.HALF"),
    task: Optional[int] = typer.Option(None, "--task", help="1 or 2"),
    method: Optional[Method] = typer.Option(None, "--method"),
    features: Optional[FeatureLevel] = typer.Option(None, "--features"),
    k: Optional[int] = typer.Option(None, "--k", help="Evaluate a single list size"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    models: Optional[Path] = typer.Option(None, "--models", help="Score saved models from this directory"),
    dump_examples: bool = typer.Option(False, "--dump-examples", help="Also write the labelled example tables"),
):
    """Run the Task-1 and Task-2 evaluation sweeps and write the reports."""
    run_config = RunConfig.from_file(
        config,
        dataset=str(dataset) if dataset else None,
        out=str(out) if out else None,
        cutoff=cutoff,
        tasks=[task] if task is not None else None,
        methods=[method] if method else None,
        feature_sets=[features] if features else None,
        k_grid=[k] if k is not None else None,
        seeds=[seed] if seed is not None else None,
        models_dir=str(models) if models else None,
        train_on_the_fly=False if models else None,
        dump_examples=dump_examples or None,
    )
    if not run_config.dataset:
        raise ConfigException("no dataset given (--dataset or `dataset` in the config)")

    loaded = IngestController().load_dataset_or_raise(run_config.dataset)
    report = run_experiment(loaded, run_config, dataset_digest(run_config.dataset))

    if report.task1:
        typer.echo(report.task1_frame().to_string(index=False))
    if report.task2:
        typer.echo(report.task2_frame().to_string(index=False))
