"""Support functions, Wulff shapes, cone-volume measures and the logarithmic
Minkowski inequality for origin-symmetric polytopes in dimensions 1-3."""

__version__ = "0.1.0"
