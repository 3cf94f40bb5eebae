"""Utilities: logging, console output and artifact exporters."""
