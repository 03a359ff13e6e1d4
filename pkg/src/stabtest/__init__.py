"""Single-copy stabilizer testing and Clifford-commutant numerics."""

__version__ = "0.1.0"
