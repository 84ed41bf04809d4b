"""Star points on cubic surfaces.

A smooth point of a surface is a star point when the tangent plane cuts
the surface in a cone with vertex at that point.  On a cubic surface
these are the Eckardt points, where three of the 27 lines meet.

Run with ``python3 demos/01_star_points_on_cubics.py``.
"""

from starlock import (
    Hypersurface,
    analyze_star_configuration,
    is_star_point,
    star_line_certificate,
)
from starlock.families import extremal_family, extremal_singularities
from starlock.algebra import parse_poly

fermat = Hypersurface.parse("X0^3+X1^3+X2^3+X3^3")
print("Fermat cubic:", fermat)

# (1:-1:0:0) lies on three lines of the Fermat cubic
r = is_star_point(fermat, [1, -1, 0, 0])
print("  (1:-1:0:0) star point:", r.verdict)
print("  tangent plane:", r.plane)
print("  section in plane coordinates:", r.restricted)

# a point on just one line is an ordinary point
r = is_star_point(fermat, [1, -1, 1, -1])
print("  (1:-1:1:-1) star point:", r.verdict)
print()

# the extremal cubic carries a whole line of star points for each factor
member = extremal_family([parse_poly(t, 3) for t in ("X0", "X1", "X0+X1+X2")], 1)
X = member.surface
print("Extremal cubic:", X)
for lam, plane in member.star_pairs:
    cert = star_line_certificate(X, lam)
    print(f"  line {lam}: {cert.status}, tangent plane {cert.plane}, section = {cert.scalar} * l^{cert.degree}")

report = analyze_star_configuration(member.star_pairs, X.d)
print("  configuration:", report.case, "in", report.hyperplane, f"({report.count} of at most {report.bound})")

sing = extremal_singularities(member)
for pt, rep in sing["points"].items():
    print(f"  singular point {pt}: {rep.label}")

# the lines meet at singular points, so none of them is a smooth star point there
meet = member.star_pairs[0][0].intersect(member.star_pairs[1][0])
print("  first two lines meet at", meet, "which is singular:", not X.is_smooth_at(meet.basis[0]))
