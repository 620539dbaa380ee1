"""Build script: compiles the optional C kernel extension.

The package is fully functional without the extension (pure-Python
fallback selected at import time). Set VERITAB_PURE_PYTHON=1 to skip
compilation entirely.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("VERITAB_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("veritab._ckernels", ["src/veritab/_ckernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
