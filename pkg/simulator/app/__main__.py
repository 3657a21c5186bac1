import sys

from app.main import cli_dispatch

sys.exit(cli_dispatch())
