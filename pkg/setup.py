import os

from setuptools import setup

ext_modules = []
if os.environ.get("OSPLAB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
        import numpy as np

        ext = Extension(
            "osplab._ckernels",
            ["src/osplab/_ckernels.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3", "-ffp-contract=off"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
        ext_modules = cythonize(
            [ext],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
