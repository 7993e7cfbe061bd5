"""
Rule matrices of nine-neighbourhood CA
======================================

Every linear rule is an XOR of the nine single-neighbour rules.  Here we
build a few of them on a 2 x 2 grid and watch one evolve a state.
"""

from caencompress import CAState, RuleSpec, decompose_rule, evolve, rule_matrix

# Rule 69 reads the cell itself, its bottom-right and its top-left neighbour.
print(sorted(decompose_rule(69)))

t69 = rule_matrix(RuleSpec(69, "null", 2, 2))
print(t69.dump())

# States are numbered row-major with the top-left cell as the high bit.
x = CAState.from_value(1, 2, 2)
for _ in range(3):
    print(x.value, x.grid.tolist())
    x = evolve(x, t69)

# Under periodic boundaries on a 2-column grid, left and right shifts coincide
# and cancel, so rule 2 + 32 is the zero matrix.
print(rule_matrix(RuleSpec(34, "periodic", 2, 2)).dump())
