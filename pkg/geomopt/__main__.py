"""Entry point for python -m geomopt."""

from .cli import main

raise SystemExit(main())
