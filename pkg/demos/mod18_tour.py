"""Expand the four mod-18 identities and show where their coefficients agree."""
import sys

from qident import build_side, verify
from qident.catalog import get_record

order = int(sys.argv[1]) if len(sys.argv) > 1 else 200

for id in ("m18-1", "m18-2", "m18-3", "m18-4"):
    rec = get_record(id)
    print(f"{id}  {rec.lhs}")
    print(f"{' ' * len(id)}  = {rec.rhs}")
    print("   ", build_side(id, "lhs", 16))
    print("   ", verify(id, order))
    print()
