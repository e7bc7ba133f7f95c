"""Take a Bailey pair, confirm the defining relation, then push it through a lemma.

The two series produced by the lemma are exactly the two sides of m18-1.
"""
from qident import apply_lemma, build_side, check_pair, make_pair

order = 120
pair = make_pair("P2")
print(check_pair(pair, 12, 60))

lhs, rhs = apply_lemma(pair, "aPBL", order)
print("sum side    ", lhs.truncate(12))
print("product side", rhs.truncate(12))
print("lemma sides agree:", lhs.first_difference(rhs) is None)

for side, series in (("lhs", lhs), ("rhs", rhs)):
    ok = series.first_difference(build_side("m18-1", side, order)) is None
    print(f"matches m18-1 {side}:", ok)
