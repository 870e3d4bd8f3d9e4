import os

import numpy
from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("INTERPSCHED_SKIP_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "interpsched._kernel",
                ["src/interpsched/_kernel.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
