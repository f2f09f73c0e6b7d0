"""Entry point for `python -m reduced_osd`."""

import sys

from .cli import main

sys.exit(main())
