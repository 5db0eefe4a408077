"""Allow ``python -m perturbcross``."""

import sys

from perturbcross.cli import main

sys.exit(main())
