"""Builds the optional compiled playout kernel. If Cython or a compiler is missing the
package still installs and runs on the pure-Python path."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("LOTRSIM_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("lotrsim._kernel", ["src/lotrsim/_kernel.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": 3},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
