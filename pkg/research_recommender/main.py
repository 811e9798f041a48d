import typer

from research_recommender.core.log import configure_logging

from research_recommender.commands.datagen.router import datagen
from research_recommender.commands.evaluate.router import evaluate
from research_recommender.commands.recommend.router import recommend
from research_recommender.commands.summarize.router import summarize
from research_recommender.commands.train.router import train


configure_logging()
app = typer.Typer(no_args_is_help=True, add_completion=False, help="Research opportunity recommender toolkit.")


# Register commands
app.command("datagen")(datagen)
app.command("train")(train)
app.command("eval")(evaluate)
app.command("recommend")(recommend)
app.command("summarize")(summarize)


if __name__ == "__main__":
    app()
