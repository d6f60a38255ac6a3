"""SU(2) arithmetic and flat surface-group representations."""
import numpy as np

from csbundle.lie import X, exp_map, group_commutator, log_map, random_su2
from csbundle.repvar import is_irreducible, relator_defect, sample_flat, solve_commutator

rng = np.random.default_rng(0)

# exp and log are inverse away from -I
g = exp_map(1.2 * X)
print("exp(1.2 X) =", g.q, " log back:", log_map(g).v)

# every element of SU(2) is a commutator
c = random_su2(rng)
a, b = solve_commutator(c)
print("commutator error:", group_commutator(a, b).distance(c))

# flat genus-2 representation: the relator evaluates to the identity
rho = sample_flat(2, rng)
print("genus 2 relator defect:", relator_defect(rho))
print("irreducible:", is_irreducible(rho))
