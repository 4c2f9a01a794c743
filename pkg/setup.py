from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [Extension("poset_forge._kernels", ["src/poset_forge/_kernels.pyx"], optional=True)]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": 3}),
)
