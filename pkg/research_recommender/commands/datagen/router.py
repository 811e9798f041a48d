from pathlib import Path
from typing import Optional

import typer

from research_recommender.components.datagen.controller import describe_generative_model, generate
from research_recommender.components.datagen.schemas import GenConfig
from research_recommender.components.ingest.controller import IngestController, dataset_digest
from research_recommender.components.ingest.crud import TABLES
from research_recommender.core.exceptions import ConfigException
from research_recommender.core.log import logger
from research_recommender.core.utils import write_manifest
from research_recommender.middlewares.exceptions import exit_on_error


@exit_on_error
def datagen(
    config: Optional[Path] = typer.Option(None, "--config", help="Generator config (TOML) or a datagen manifest"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory receiving the seven CSV files"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Overrides the config seed"),
    describe: bool = typer.Option(False, "--describe", help="Print the generative model and exit"),
):
    """Generate a synthetic dataset with planted application signal."""
    if describe:
        typer.echo(describe_generative_model(), nl=False)
        return
    if out is None:
        raise ConfigException("--out is required")

    gen_config = GenConfig.from_file(config) if config else GenConfig()
    if seed is not None:
        gen_config = GenConfig.model_validate({**gen_config.model_dump(), "seed": seed})

    dataset = generate(gen_config)
    IngestController().write_dataset(dataset, out)

    digest = dataset_digest(out)
    write_manifest(out, "datagen", gen_config.model_dump(mode="json"), [gen_config.seed], digest, list(TABLES))
    logger.info(f"Wrote dataset {digest[:12]} to {out}")
