"""Utility modules for climpanel."""
