import os

from setuptools import setup

ext_modules = []
if not os.environ.get("QMONTY_SKIP_NATIVE"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        # the C-level random generators live in numpy's static helper libs
        _np_root = os.path.dirname(np.__file__)
        _lib_dirs = [os.path.join(_np_root, "random", "lib"),
                     os.path.abspath(os.path.join(np.get_include(), "..",
                                                  "lib"))]
        ext = Extension(
            "qmonty.kernels._native",
            ["src/qmonty/kernels/_native.pyx"],
            include_dirs=[np.get_include()],
            library_dirs=[d for d in _lib_dirs if os.path.isdir(d)],
            libraries=["npyrandom", "npymath"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            # fused multiply-adds would change rounding and break the
            # bit-identical-backends contract
            extra_compile_args=["-O3", "-ffp-contract=off"],
        )
        ext_modules = cythonize(
            [ext],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "cdivision": True,
                "wraparound": False,
            },
        )
    except ImportError:
        # Pure-Python kernels are selected at import time when the
        # extension is unavailable; nothing else changes.
        ext_modules = []

setup(ext_modules=ext_modules)
