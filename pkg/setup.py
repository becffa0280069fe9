"""Build script: compiles the optional accumulator kernel extension.

The package works without the extension (a pure-Python kernel is selected
at import time); building it just makes bulk simulation much faster.
A missing compiler or Cython therefore downgrades the build instead of
failing it.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/bdspell/_kernel/_fastloop.pyx"],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
