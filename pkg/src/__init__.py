"""
Phase tropical isotopy package.
"""

__version__ = "1.0.0"
__author__ = "Phase Tropical Isotopy Team"
