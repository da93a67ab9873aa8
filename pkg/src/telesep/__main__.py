import sys

from telesep.cli import main

sys.exit(main())
