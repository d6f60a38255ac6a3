"""Tangent spaces to the moduli of flat connections and the Goldman pairing."""
import numpy as np

from csbundle.repvar import pullback, sample_flat, torus_pair
from csbundle.twisted import (
    build_twisted_complex,
    cohomology_basis,
    cohomology_dimension,
    goldman_form,
    pairing_matrix,
    torus_tangents,
)

rng = np.random.default_rng(1)

for g in (2, 3):
    tc = build_twisted_complex(sample_flat(g, rng))
    dim, gap = cohomology_dimension(tc)
    m = pairing_matrix(tc, cohomology_basis(tc))
    print(f"genus {g}: dim H^1 = {dim} (gap {gap:.1e}), "
          f"antisymmetry {np.abs(m + m.T).max():.1e}, det {np.linalg.det(m):.3e}")

# the two tangent directions of the abelian torus family
tc = build_twisted_complex(torus_pair(0.4, 1.1))
ta, tb = torus_tangents(tc)
print("genus 1 Goldman pairing:", goldman_form(tc, ta, tb))

# pulled back to genus 3 the value is unchanged
tc3 = build_twisted_complex(pullback(torus_pair(0.4, 1.1), 3))
print("genus 3 pulled back:    ", goldman_form(tc3, *torus_tangents(tc3)))
