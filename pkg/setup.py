"""Build hook: compile the hot-kernel extension when Cython is available.

The package is fully functional without the extension (the NumPy fallback
in h8.kernels._py is selected at import time), so a missing compiler or
Cython never blocks installation.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "h8.kernels._ext",
                ["src/h8/kernels/_ext.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
