import sys

from clutterplan.cli import main

sys.exit(main())
