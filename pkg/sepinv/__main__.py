import sys

from sepinv.main import main

sys.exit(main())
