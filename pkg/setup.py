import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    print("Cython/numpy unavailable; installing pure-Python backend only", file=sys.stderr)
else:
    ext_modules = cythonize(
        [
            Extension(
                "cdd_swap._history_ext",
                ["src/cdd_swap/_history_ext.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-fcx-limited-range", "-fopenmp"],
                extra_link_args=["-fopenmp"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
