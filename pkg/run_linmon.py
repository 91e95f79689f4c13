#!/usr/bin/env python3
"""
Main entry point for the linearizability monitor.
Run this file with `check`, `generate` or `bench`.
"""
import sys
from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
