import sys

from platial.cli import main

sys.exit(main())
