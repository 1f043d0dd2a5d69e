from .kernels import BACKEND  # noqa: F401
