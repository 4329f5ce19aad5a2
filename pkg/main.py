"""Entry point: ``python main.py analyze --catalog ex2.5`` or ``python main.py serve``."""
from cli import cli

if __name__ == "__main__":
    cli()
