import sys

from shadowban.cli.main import main

sys.exit(main())
