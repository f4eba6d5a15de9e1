"""Tools for homogeneity questions about finite graphs and coloured structures."""

__version__ = "0.1.0"
