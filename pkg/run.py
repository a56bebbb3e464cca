import sys

from src.driftflux import main

if __name__ == '__main__':
    sys.exit(main())
