import sys

from src.routes.cli import main

# Entry point of the application.

if __name__ == "__main__":
    sys.exit(main())
