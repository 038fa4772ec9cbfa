# main.py

import sys

from persuade_net.cli.app import main

# --- Entry Point ---
# `python main.py policy --config configs/example1.json` is equivalent to the
# installed `persuade-net` console script.
if __name__ == "__main__":
    sys.exit(main())
