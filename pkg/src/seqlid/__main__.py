import sys

from seqlid.cli import main

sys.exit(main())
