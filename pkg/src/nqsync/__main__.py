import sys

from nqsync.cli import main

sys.exit(main())
