"""Builds the compiled search kernels.

The extension is a performance twin of clustercert.kernels._pure; the package
works without it (pure fallback is selected at import time).
"""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off: the pure backend must produce bit-identical floats, so
# the compiler may not fuse multiply-adds.
extensions = [
    Extension(
        "clustercert.kernels._native",
        ["src/clustercert/kernels/_native.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
