import sys

from qminiaes.cli import main

sys.exit(main())
