"""Root package for the segmentation toolkit.

No functions are exposed at the package level to avoid namespace pollution;
instead, submodules such as ``separability`` or ``prediction`` should be
imported directly.
"""

__all__ = []
