"""Build script: compiles the CDCL solver core as a C++ extension when possible.

The extension is optional.  If Cython or a C++ compiler is unavailable, the
install succeeds anyway and the package falls back to the pure-Python solver
(d3sync.solver picks whichever is importable).
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Never fail the whole install because the extension did not compile."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping compiled solver core ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "pure-Python solver will be used")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "d3sync.solver._cdcl",
                ["src/d3sync/solver/_cdcl.pyx"],
                language="c++",
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    print("warning: Cython not available; building without the compiled solver core")
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
