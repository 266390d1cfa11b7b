"""Build script for the optional compiled dynamics kernel.

The package is fully functional without the extension: cartwin.dynamics
falls back to a pure-Python kernel at import time. Any failure here
(no Cython, no C compiler) therefore downgrades to a warning instead of
aborting the install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; installing without the compiled kernel")
        return []
    from setuptools import Extension

    ext = Extension(
        "cartwin.dynamics._core",
        ["src/cartwin/dynamics/_core.pyx"],
    )
    return cythonize([ext], language_level="3")


class OptionalBuildExt(build_ext):
    """Build the extension if possible, otherwise continue without it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"compiled kernel build failed ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernel build failed ({exc}); using pure-Python fallback")


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
