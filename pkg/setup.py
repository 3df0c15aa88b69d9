"""Build script for the optional compiled kernel.

The package works without the extension (a pure-Python kernel is selected at
import time); building it just makes the truncated-series multiply-accumulate
loops faster. Any build failure is downgraded to a warning so installation
never breaks on a machine without a C toolchain.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    # extension is a speedup, not a requirement
    def run(self):
        try:
            super().run()
        except Exception as exc:
            print("warning: compiled kernel skipped (%s); using pure-Python kernel" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print("warning: compiled kernel skipped (%s); using pure-Python kernel" % exc)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; using pure-Python kernel")
        return []
    return cythonize(
        ["src/mirrorcp/_kernel_cy.pyx"],
        language_level="3",
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
