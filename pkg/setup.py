"""Build script: compiles the optional Cython kernels.

The compiled extension is optional; the package falls back to pure-Python
kernels when it is absent.  Set DAGKIT_NO_EXT=1 to skip the build, e.g. on
platforms without a C compiler:

    DAGKIT_NO_EXT=1 pip install -e . --no-build-isolation
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DAGKIT_NO_EXT"):
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "dagkit._kernels",
                sources=["src/dagkit/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )

setup(ext_modules=ext_modules)
