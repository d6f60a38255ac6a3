"""Numerical verification that the Chern-Simons prequantum line bundle on the
moduli space of flat SU(2) connections on a closed surface has degree one."""

__version__ = "0.1.0"
