"""Allow ``python3 -m lexknap``."""
from lexknap.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
