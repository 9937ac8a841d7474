"""Build script: compiles the optional SGD hot-loop kernel.

The extension is marked optional -- if no C compiler (or Cython) is
available the install still succeeds and the package falls back to the
pure-Python kernel at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "guidegraph.classifier.kernels._hinge",
                ["src/guidegraph/classifier/kernels/_hinge.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
