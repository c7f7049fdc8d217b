import sys

from nonlocalhopf.cli import main

sys.exit(main())
