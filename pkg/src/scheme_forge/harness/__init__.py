"""Invariant checks, configuration and the command line."""
