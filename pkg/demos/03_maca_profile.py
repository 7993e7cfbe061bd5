"""
Attractors, depth and pseudo-exhaustive fields
==============================================

Rule 69 on a 2 x 2 null-boundary grid has four fixed-point attractors and
depth 2.  Two cells suffice to tell the attractors apart.
"""

from caencompress import CAState, attractor_from_pef, build_std, classify, find_maca, maca_profile, RuleSpec

spec = RuleSpec(69, "null", 2, 2)
std = build_std(spec)
print("attractors", std.attractors)
print("depth per state", std.depth_of.tolist())
print("non-reachable", std.non_reachable)

profile = maca_profile(spec)
print(f"d={profile.depth} k={profile.k} rank={profile.rank} PEF cells={profile.pef_cells}")

for v in range(16):
    pef = classify(CAState.from_value(v, 2, 2), profile)
    print(v, "->", pef, "->", attractor_from_pef(profile, pef).value)

# Rules with at least four attractors on 2 x 3 periodic blocks.
print([rule for rule, _ in find_maca("periodic", 2, 3, min_k=4)][:10])
