"""Builds the optional compiled kernels; the package works without them."""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    # a missing compiler leaves the pure-Python kernels in charge
    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"skipping compiled kernels: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"skipping {ext.name}: {exc}")


ext_modules = []
if os.environ.get("MODEQ_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            ["src/modeq/_ckernels.pyx"],
            compiler_directives={"language_level": 3},
            quiet=True,
        )

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
