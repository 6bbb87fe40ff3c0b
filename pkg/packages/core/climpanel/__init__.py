"""climpanel - climate-growth panel econometrics and impact projection."""

__version__ = "1.0.0"
