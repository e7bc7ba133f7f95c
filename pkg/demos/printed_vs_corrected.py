"""The displayed sum for m24s-m2 misses a factor 3 on its n >= 1 terms.

Expanding both versions against the product makes the slip visible at q^2.
"""
from qident import build_side, expand
from qident.catalog import get_record

rec = get_record("m24s-m2")
rhs = build_side(rec.id, "rhs", 40)
printed = expand(rec.printed_lhs, 40)
fixed = build_side(rec.id, "lhs", 40)

print("product  ", rhs.truncate(10))
print("printed  ", printed.truncate(10))
print("corrected", fixed.truncate(10))
exp, got, want = printed.first_difference(rhs)
print(f"printed first differs at q^{exp}: {got} vs {want}")
print("corrected agrees to q^40:", fixed.first_difference(rhs) is None)
