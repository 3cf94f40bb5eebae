"""Value objects shared by the numerical core and the CLI."""
