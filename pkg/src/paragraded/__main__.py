import sys

from .circuit_cli.cli import main

sys.exit(main())
