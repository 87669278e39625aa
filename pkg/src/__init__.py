"""city-viz-forge - information-visualization prototypes in 3D city models"""

__version__ = "1.0.0"
