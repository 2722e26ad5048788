import sys

from kanon.cli import main

sys.exit(main())
