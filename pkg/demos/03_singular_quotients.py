"""
Quantum algebras of singular curves
===================================

"""

from singular_dq import quotient as Q
from singular_dq import scenarios as S
from singular_dq.exprio import parse_element, print_canonical


def L(src):
    return parse_element(src, 2, param="lambda")


# # Normal forms
# Every element is a sum of p-coefficients starred on the right with x-monomials.
print(Q.to_normal_form(L("p1*x1")))

# # The cross x1*x2 = 0
cross = S.cross_ideal()
for src in ("p1", "p1*x1", "p1*p2"):
    res = Q.normalizer_residual(cross, L(src))[0]
    print(src, "->", res)

# The normalizer restricted to a small box of degree <= 3.
box = Q.AnsatzSpace.box(2, 3, 1)
sols = Q.normalizer_solve(cross, box)
print(len(box), "ansatz monomials,", len(sols), "solutions,",
      len(Q.ideal_slice(cross, box)), "of them in the ideal")

# # The double line x2^2 = 0
# A 1/(2 lambda) coupling is what lets p2 into the normalizer.
h = S.double_line_element(L("0"), L("1"), L("0"), L("0"))
print(print_canonical(h))
print(S.matrix_rep(h), S.matrix_rep(L("x2")))
print(S.matrix_rep(h).star(S.matrix_rep(L("x2"))))

# # All four worked examples
for rep in S.run("all"):
    print(rep.name, "PASS" if rep.passed else "FAIL", len(rep.checks), "checks")
