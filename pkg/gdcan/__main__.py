import sys

import gdcan.cli

sys.exit(gdcan.cli.main())
