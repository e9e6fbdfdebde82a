"""Build script: compiles the optional Cython flow kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so any build failure here downgrades to a warning.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/bagconsist/_fastflow.pyx"],
        language_level=3,
    )
except Exception as exc:  # noqa: BLE001 - fall back to pure Python
    print("warning: skipping compiled flow kernel (%s)" % exc, file=sys.stderr)

setup(ext_modules=ext_modules)
