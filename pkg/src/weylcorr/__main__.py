import sys

from weylcorr.cli import main

sys.exit(main())
