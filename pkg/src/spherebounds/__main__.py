import sys

from spherebounds.cli import main

sys.exit(main())
