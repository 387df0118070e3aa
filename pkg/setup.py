"""Builds the optional Cython kernels; the package falls back to pure Python without them."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HIG_NO_EXTENSION"):
    try:
        from Cython.Build import cythonize
        ext_modules = cythonize(["src/hig/_ckernels.pyx"], language_level=3, quiet=True)
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
