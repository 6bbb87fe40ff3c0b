"""Test suite for climpanel."""
