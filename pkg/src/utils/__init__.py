"""Utility functions for logging, configuration files and table output."""
