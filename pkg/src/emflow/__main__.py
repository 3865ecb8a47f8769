"""Allow ``python -m emflow`` to behave like the installed entry point."""

from .cli import entry

if __name__ == "__main__":
    entry()
