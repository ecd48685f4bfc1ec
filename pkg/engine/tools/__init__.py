"""File exports."""
