"""nfactorial - exact verification of n!-dimension statements for diagonal harmonics"""

__version__ = "1.0.0"
__author__ = "nfactorial developers"
__license__ = "MIT"

# Part of every cache key; bump when a computation changes its results
ENGINE_VERSION = "1.0.0"

__all__ = ["ENGINE_VERSION", "__version__"]
