import numpy as np
from setuptools import Extension, setup

# The compiled kernel module is optional: if Cython or a C compiler is
# missing the package falls back to the numpy kernels at import time.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "mario._kernels_cy",
                ["src/mario/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
