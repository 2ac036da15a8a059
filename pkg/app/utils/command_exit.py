import typer

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
error_logger = LoggerFactory.get_error_logger()

def fail_command(caller: str, message: str, code: int):
    """
    Reports a failed command on stderr and leaves with its exit code.
    """
    error_logger.error(f"{caller} | exit_code = {code} | error = {message}")
    typer.echo(f"error: {message}", err=True)
    raise typer.Exit(code=code)
