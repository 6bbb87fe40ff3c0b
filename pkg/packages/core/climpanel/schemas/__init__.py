"""Pydantic schemas for climpanel.

These models define the I/O contracts for the app service layer.
Response schemas have a ``from_domain()`` classmethod that converts the
domain dataclasses without replacing them.
"""
