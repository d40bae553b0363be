"""Build script for the optional compiled clustering kernels.

The Cython extension is optional: when Cython is missing or compilation
fails, the package installs without it and falls back to the numpy
kernels at import time.
"""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "learnerclust.fuzzyclust._ckernels",
                ["src/learnerclust/fuzzyclust/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
