"""Build hook for the optional compiled geometry kernels.

The package works without the extension (a pure-Python fallback is selected at
import time), so any failure here degrades to a source-only install. Set
POSGRAPH_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("POSGRAPH_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "posgraph.kernels._fastgeom",
        ["src/posgraph/kernels/_fastgeom.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
