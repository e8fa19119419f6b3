from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # no Cython: install the pure-Python kernels only
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("pww._kernels", ["src/pww/_kernels.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
