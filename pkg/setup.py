import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python fallback kernel is used when the extension is absent.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "ontoclass.forest._split_cy",
                ["src/ontoclass/forest/_split_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
