#!/usr/bin/env python3
"""
atma CLI Entry Point
Runs the click group from cli.py.
"""

from .cli import cli

if __name__ == "__main__":
    cli()
