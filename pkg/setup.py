"""Build script for the optional compiled wavelet kernels.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes `csipose preprocess` faster on long
recordings.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "csipose.wavelet._kernels",
        sources=["src/csipose/wavelet/_kernels.pyx"],
    )
]

if cythonize is not None:
    ext_modules = cythonize(
        extensions,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": 3,
        },
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
