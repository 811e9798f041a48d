import functools
from typing import Callable

import typer
from pydantic import ValidationError

from research_recommender.core.exceptions import DatasetValidationException, RecommenderException
from research_recommender.core.exit_code import ExitCode
from research_recommender.core.log import logger


def exit_on_error(command: Callable) -> Callable:
    """Maps exceptions raised by a command to a message on stderr and its exit code"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)

        except DatasetValidationException as e:
            for issue in e.report.errors:
                typer.echo(str(issue), err=True)
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(e.exit_code)

        except RecommenderException as e:
            logger.debug(repr(e))
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(e.exit_code)

        except ValidationError as e:
            typer.echo(f"error: invalid input: {e}", err=True)
            raise typer.Exit(ExitCode.INPUT_ERROR.value)

        except typer.Exit:
            raise

        except Exception as e:
            logger.exception(e)
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(ExitCode.INPUT_ERROR.value)

    return wrapper
