"""The main execution script for this package for testing."""
from base_pc._app.cli import main


# execute the main entry point of the CLI
main()
