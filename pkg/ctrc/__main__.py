import sys

from ctrc.cli import main

sys.exit(main())
