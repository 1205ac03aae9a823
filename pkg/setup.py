import os

import numpy as np
from setuptools import Extension, setup
from Cython.Build import cythonize

# libnpyrandom provides the C implementations declared in
# numpy/random/c_distributions.pxd (ziggurat normal sampler).
_npyrandom_lib = os.path.join(os.path.dirname(np.random.__file__), "lib")

# -ffp-contract=off keeps the compiled kernels bit-identical to the
# pure-numpy fallback (no FMA contraction of a*b+c).
extensions = [
    Extension(
        "exitbounds._kernels._core",
        ["src/exitbounds/_kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[_npyrandom_lib],
        libraries=["npyrandom"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
)
