"""Numerical special geometry: projective special Kähler bases, the one-loop
deformed Ferrara-Sabharwal metric, and curvature/completeness probes."""

__version__ = "0.1.0"
