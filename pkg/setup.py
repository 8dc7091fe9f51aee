"""Build script: compiles the optional search-kernel extension.

The package works without the extension (nsdcolor._search_py is a drop-in
twin); the compiled module just makes the exact solver much faster.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("nsdcolor._search", ["src/nsdcolor/_search.pyx"])],
        language_level=3,
    )
except ImportError:
    sys.stderr.write("Cython unavailable: installing with the pure-Python search core only\n")

setup(ext_modules=ext_modules)
