"""climpanel command-line interface."""
