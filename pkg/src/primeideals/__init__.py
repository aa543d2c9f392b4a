"""Prime-ideal decomposition in number fields via higher-order Newton polygons."""

__version__ = "0.1.0"
