import sys

from da_sfft.cli import main

sys.exit(main())
