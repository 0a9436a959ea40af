import sys

from qtoda.cli import main

sys.exit(main())
