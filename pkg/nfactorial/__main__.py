"""Entry point for python -m nfactorial"""

from nfactorial.cli import cli

if __name__ == '__main__':
    cli()
