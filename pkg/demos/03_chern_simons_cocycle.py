"""The gauge cocycle from Chern-Simons on a slab, against its closed form."""
from csbundle.prequantum import (
    GaugeCharacter,
    LinePath,
    TorusModuliPoint,
    cocycle_exact,
    cocycle_numeric,
    equivariance_check,
)

p = TorusModuliPoint(0.3, 0.7)
for m, n in [(0, 0), (1, 0), (0, 1), (2, -3)]:
    c = GaugeCharacter(m, n)
    num = cocycle_numeric(p, c)
    print(f"(m, n) = ({m:2d}, {n:2d})  numeric {num:.12f}  exact {cocycle_exact(p, c):.12f}")

# transport along a path commutes with the gauge action up to the cocycle
path = LinePath([[0, 0], [0.2, 0.5], [-0.1, 0.3]])
print("equivariance defect:", equivariance_check(p, GaugeCharacter(1, -2), path))
