"""A line of star points and the singularities it forces.

Surfaces of the form ``X2 (X3 L3 + X2 L2 + L(X0, X1)) + X3^d`` contain
the line ``{X2 = X3 = 0}``, and every smooth point of it is a star point.
The singular points on the line sit at the roots of ``L``; a root of
multiplicity ``m`` is an ``A_(dm-1)`` point, so the terms ``(k+1)/d``
always add up to ``d - 1``.

Run with ``python3 demos/02_line_of_star_points.py``.
"""

from starlock import generic_point_is_star, parse_poly
from starlock.families import STAR_LINE, line_Ak_surface, star_sum_check

for d, L in [(3, "X0*X1"), (4, "X0^2*X1"), (4, "X0*(X0^2+X1^2)"), (5, "X0^4")]:
    member = line_Ak_surface(d, parse_poly(L, 4), seed=0)
    X = member.surface
    print(f"d = {d}, L = {L}")
    print("  surface:", X)
    print("  generic point of the line is a star point:", generic_point_is_star(X, STAR_LINE))
    ledger = star_sum_check(X)
    for e in ledger.entries:
        where = e.get("point") or f"{e['points']} conjugate points, roots of {e['factor']}"
        print(f"    {where}: A{e['k']} contributes {e['contribution']} ({e['source']})")
    print(f"  total {ledger.total} = d - 1: {ledger.holds}")
    print()
