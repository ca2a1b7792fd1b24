import sys

from ndlt.cli import main

sys.exit(main())
