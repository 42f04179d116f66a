import sys

from gfagraph.cli import main

sys.exit(main())
