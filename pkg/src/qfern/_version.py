# file generated by setuptools_scm; overwritten on build
__version__ = version = "0.1.0"
