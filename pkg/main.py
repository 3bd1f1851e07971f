#!/usr/bin/env python3
"""
Groupoid Univalence Toolkit - Main Application Entry Point

Runs the command-line interface. The library itself lives in ``src`` and can
be imported directly, e.g. ``from src.fibrations import set_universe``.
"""

from src.cli import cli
from src.fibrations import identity_fibration, is_univalent_fibration, set_universe
from src.groupoid import discrete


def example_checks() -> dict:
    """The two standard fibrations: π over U1 is univalent, id on discrete(2) is not."""
    u1 = set_universe(1)
    p0 = identity_fibration(discrete(2, name="B0"))
    return {
        "pi_U1": is_univalent_fibration(u1.pi),
        "p0": is_univalent_fibration(p0),
    }


def main():
    """Main function - runs the CLI interface."""
    cli()


if __name__ == "__main__":
    main()
