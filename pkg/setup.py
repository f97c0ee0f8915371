"""Build script: compiles the optional polynomial kernel.

The package works without the extension (a pure-Python twin is selected at
import time), so any failure to cythonize degrades gracefully to a pure build.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("qhecke._kernel", ["src/qhecke/_kernel.pyx"])],
        language_level=3,
    )
except Exception:
    pass

setup(ext_modules=ext_modules)
