from glob import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "genusavg._genusavg",
    sorted(glob("src/*.cpp")),
    include_dirs=["include", "vendor"],
    libraries=["gmpxx", "gmp"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
