"""Classification calculus for Kodaira-dimension-zero symplectic sums along tori."""

__version__ = "0.1.0"
