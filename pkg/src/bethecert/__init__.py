"""Exact certificates for Bethe, shift-of-argument and Gelfand-Tsetlin subalgebras of Y(gl_n)."""

__version__ = "0.1.0"
