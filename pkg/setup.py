"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time); set CPDP_BENCH_SKIP_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CPDP_BENCH_SKIP_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "cpdp_bench.kernels._ckernels",
                    sources=["src/cpdp_bench/kernels/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    # -ffp-contract=off: no FMA contraction, so squared-distance
                    # accumulation rounds exactly like the numpy fallback.
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "initializedcheck": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
