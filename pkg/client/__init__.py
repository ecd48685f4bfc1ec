"""Command-line client for the travelling-wave engine."""
