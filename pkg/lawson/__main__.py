import sys

from lawson.report_cli import main

sys.exit(main())
