"""Verification workflow nodes."""
