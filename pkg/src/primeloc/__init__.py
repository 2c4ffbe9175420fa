"""Prime points on random hypersurfaces: local solubility, local densities and lattice statistics."""

__version__ = "0.1.0"

SCHEMA_VERSION = "primeloc.report/1"
