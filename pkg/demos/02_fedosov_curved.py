"""
Fedosov connection for a curved torsion-free connection
=======================================================

"""

from singular_dq import fedosov as F
from singular_dq.exprio import parse_element, print_canonical

# A single Christoffel symbol Gamma^1_11 = x2 already gives curvature.
conn = F.ConnectionData.from_entries(2, {(0, 0, 0): parse_element("x2", 2)})
R = F.curvature(conn)
print({k: print_canonical(v) for k, v in R.entries.items()})

# # Solving for gamma
g = F.gamma_recursion(conn, 6)
print(print_canonical(g.value))
print("flatness residual:", print_canonical(F.flatness_residual(conn, g)))

# # Flat sections
a = F.flat_lift(conn, g, parse_element("x1*p1", 2))
print(print_canonical(a.value))
print("D residual:", print_canonical(F.d_residual(conn, g, a)))

# The induced product on base functions. Positions alone multiply pointwise.
print(print_canonical(F.base_star(conn, g, parse_element("x1", 2), parse_element("x2^2", 2))))
print(print_canonical(F.base_star(conn, g, parse_element("x1", 2), parse_element("p1", 2))))
