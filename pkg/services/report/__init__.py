"""Report export package."""
