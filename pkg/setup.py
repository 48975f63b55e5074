"""Build script for the optional Cython sampling kernels.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time); building it makes the Monte Carlo
engines roughly two orders of magnitude faster.
"""

import os

import numpy as np
from setuptools import setup
from setuptools.extension import Extension

from Cython.Build import cythonize

numpy_dir = os.path.dirname(os.path.dirname(np.get_include()))
npyrandom_dir = os.path.join(numpy_dir, "random", "lib")

extensions = [
    Extension(
        "resetfpa.mc._kernels",
        ["src/resetfpa/mc/_kernels.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[npyrandom_dir],
        libraries=["npyrandom"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
