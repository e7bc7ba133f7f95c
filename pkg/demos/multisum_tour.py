"""Walk through every multisum family for small depth and compare with its product."""
from qident import multisum, product_side
from qident.verifier import multisum_cases

order = 60
for spec in multisum_cases(3):
    s = multisum(spec, order)
    same = s.first_difference(product_side(spec, order)) is None
    print(f"{spec.family:>4} k={spec.k} i={spec.i!s:<4} {'=' if same else '!='}  {s.truncate(8)}")
