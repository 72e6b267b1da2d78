import sys

from towerlab.cli import main

sys.exit(main())
