"""Module runner: python -m specedge ..."""

import sys

from .cli import main

sys.exit(main())
