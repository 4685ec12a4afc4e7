import sys

from cyclotome.cli import main

sys.exit(main())
