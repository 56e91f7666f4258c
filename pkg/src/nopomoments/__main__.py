#!/usr/bin/env python3
"""Run the Nopomoments command line tool with python -m nopomoments

S.D.G."""

import sys

from .cli import main

sys.exit(main())
