import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("OSCINT_NO_EXT") != "1":
    from Cython.Build import cythonize

    # no -march=native / -ffast-math: FMA contraction would break bit-equality
    # with the numpy fallback
    ext_modules = cythonize(
        [
            Extension(
                "oscint._kernels",
                ["src/oscint/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
