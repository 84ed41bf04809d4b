"""Deforming star configurations, and checking the results independently.

Adding ``t X3^(d-1) g`` to a line surface destroys the line of star
points but keeps one of them: every root of ``L`` drops from
``A_(d-1)`` to ``A_(d-2)`` while the chosen point stays a smooth star
point.  Every construction carries JSON certificates that
:func:`starlock.certificates.verify` replays by substitution alone.

Run with ``python3 demos/03_deformations_and_certificates.py``.
"""

import json

from starlock import parse_poly
from starlock.certificates import dumps, family_json, verify
from starlock.families import deformation_to_Ad2, proper_star_deformation

L = parse_poly("X0*X1*(X0-X1)", 4)
for t in (0, 1, "-1/3"):
    member = deformation_to_Ad2(4, L, seed=0, t=t)
    types = ", ".join(f"{p} {lab}" for p, lab in member.extra["types"].items())
    print(f"t = {t}: {types}; star point {member.extra['P']}")

# a singular star point can become smooth while the section by X1 = 0 stays a cone
for t in (0, 1):
    member = proper_star_deformation(parse_poly("X0*X2+X3^2", 4), parse_poly("X2^3+X3^3", 4), t=t, seed=0)
    print(f"t = {t}: (1:0:0:0) star point via X1 = 0, smooth there: {member.extra['smooth']}")

doc = family_json(member)
text = dumps(doc)
print()
print(f"certificate: {len(text)} bytes, verifies: {verify(json.loads(text)).ok}")

# terms divisible by X1 or free of X0 keep the claim true; X0*X2^2 breaks it
doc["surface"]["terms"].append({"coeff": "1", "exps": [1, 0, 2, 0]})
for sub in doc["certificates"]:
    sub["surface"] = doc["surface"]
result = verify(doc)
print("after tampering:", result.ok, "-", result.problems[0] if result.problems else "")
