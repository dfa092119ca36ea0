"""Two-photon coherent beat laser simulation package."""

__version__ = "0.3.0"
