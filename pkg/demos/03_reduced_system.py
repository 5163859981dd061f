"""
The reduced first-order soliton system
======================================

For the doubly-warped ansatz the soliton equation collapses to a first-order
system in (a, b, f', h) along s.  This demo integrates it from singular
steady and from product initial data, watching the derived identities stay
conserved and the branch detector name the solution family, and then
evaluates the algebra that rules out pairwise-distinct fiber eigenvalues.
"""

from solitonlab import (branch_label, distinct_fprime, dw_rhs,
                        exclusion_residual, integrate,
                        reduced_identity_residuals)
from solitonlab.reduced import product_state, singular_steady_state

for title, state in (("singular steady", singular_steady_state(1.0)),
                     ("product (lam = -1)", product_state(1.0, -1.0))):
    traj = integrate(state, 2.0, 1e-3)
    end = traj.final
    worst = max(max(abs(v) for v in
                    reduced_identity_residuals(st, dw_rhs(st).ap).values())
                for st in traj.states)
    print(f"{title}: integrated s = 1 -> 2 in {len(traj.states) - 1} steps")
    print(f"  endpoint   a = {end.a:.12f}  b = {end.b:.12f}  f' = {end.fp:.12f}")
    print(f"  max identity residual along the way: {worst:.2e}")
    print(f"  branch label: {branch_label(traj)}\n")

print("closed forms at s = 2: singular steady a = 1/6, b = f' = 1/3;")
print("product a = 1/2, f' = -2\n")

print("pairwise-distinct eigenframe algebra:")
for triple in ((1.0, -1.0, 0.0), (3.0, 2.0, 1.0)):
    fp = distinct_fprime(*triple)
    res = exclusion_residual(*triple)
    print(f"  (a,b,c) = {triple}:  forced f' = {fp:+.4f}   "
          f"exclusion residual = {res:+.4f}")
print("""
The residual is proportional to the forced f', so a soliton with three
distinct level-surface eigenvalues must have constant potential: the
pairwise-distinct case cannot occur away from the Einstein regime.
""")
