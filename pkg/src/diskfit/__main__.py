import sys

from diskfit.cli import main

sys.exit(main())
