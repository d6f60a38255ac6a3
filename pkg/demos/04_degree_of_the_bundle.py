"""Degree 2 upstairs, covering degree 2, degree 1 on the quotient."""
import numpy as np

from csbundle.chern import chern_weil, degree_from_covering, holonomy_degree, lattice_chern
from csbundle.prequantum import LinePath, curvature_density, parallel_transport
from csbundle.quotient import covering_degree


def transport(path):
    return parallel_transport(LinePath(path))


cw = chern_weil(lambda a, b: curvature_density(), 32)
lat = lattice_chern(transport, 8)
hol = holonomy_degree(transport, levels=2)
print(f"Chern-Weil {cw:.12f}  lattice {lat}  holonomy {hol:.12f}")

cover = covering_degree(100, np.random.default_rng(3))
print("covering degree of the pillowcase map:", cover)
print("degree on the quotient:", degree_from_covering(lat, cover))

print("around [0,1/2]^2:", transport(LinePath.rectangle(0, 0, 0.5, 0.5).points))
