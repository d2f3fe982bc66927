"""Build script: compiles the optional Cython kernel extension.

Set UCF_NO_EXTENSION=1 to skip the extension entirely; the package then
falls back to the pure-Python kernels at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("UCF_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("ucf._kernels_c", ["src/ucf/_kernels_c.pyx"])],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
