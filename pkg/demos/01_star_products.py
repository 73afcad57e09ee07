"""
Star products on a flat phase space
===================================

"""

# Elements are written in a small expression language and evaluated exactly.
from singular_dq.exprio import parse_element, print_canonical
from singular_dq.starproducts import MOYAL, WEYL, commutator, lambda_to_hbar, star

x1 = parse_element("x1", 2)
p1 = parse_element("p1", 2)

# # The Moyal product in lambda
print(print_canonical(star(MOYAL, x1.with_param("lambda"), p1.with_param("lambda"))))
print(print_canonical(star(MOYAL, p1.with_param("lambda"), x1.with_param("lambda"))))

# The commutator is 2*lambda, the same thing as i*hbar after lambda = -(i/2) hbar
c = commutator(MOYAL, x1.with_param("lambda"), p1.with_param("lambda"))
print(print_canonical(c), "=", print_canonical(lambda_to_hbar(c)))

# # Fiberwise Weyl product
# Only the fiber variables y pair with the momenta.
y1 = parse_element("y1", 2)
print(print_canonical(star(WEYL, y1, p1)))
print(print_canonical(star(WEYL, x1, p1)))

# Higher powers produce the full binomial tower of corrections.
f = parse_element("p1^3", 2, param="lambda")
g = parse_element("x1^3", 2, param="lambda")
print(print_canonical(star(MOYAL, f, g)))
