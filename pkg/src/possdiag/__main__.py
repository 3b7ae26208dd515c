"""Run the command line interface via ``python -m possdiag``."""

from .cli import main

main(prog_name="possdiag")
