import sys

from .cli_harness import main

sys.exit(main())
