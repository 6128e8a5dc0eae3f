import sys

from taumod.cli import main

sys.exit(main())
