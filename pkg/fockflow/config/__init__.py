"""Configuration package for fockflow."""
