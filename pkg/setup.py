"""Build script: compiles the optional fast-kernel extension when Cython is available.

The package works without the extension; pomlab._kernels falls back to the
pure-Python twin at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "pomlab._kernels._fast",
                sources=["src/pomlab/_kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
