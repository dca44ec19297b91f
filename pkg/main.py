"""
Dissimilarity-tree K-means - Main Entry Point

=== HOW TO RUN ===

1. Install dependencies: pip install -r requirements.txt
2. Optionally create a .env file (see utils.py for the variables)
3. Run a subcommand, for example:
   python main.py mst --input tests/data/table1.csv --k 4 --range-override 3=8
   python main.py export --name iris --output iris.csv
   python main.py bench --input iris.csv --label-col 5 --k 3 --runs 10 --format json
"""

import sys

from cli import run


def main() -> None:
    """Main entry point for the command-line tool."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
