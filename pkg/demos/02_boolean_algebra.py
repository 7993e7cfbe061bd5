"""
Closing the basic rules under the AND/OR product
================================================

The five basic rule matrices are closed under the Boolean product and the
resulting structure is audited: order, identity, commutativity, inverses and
cyclicity, each with a witness.
"""

from caencompress import audit

for boundary, m, n in [("periodic", 2, 3), ("periodic", 2, 2), ("null", 2, 2)]:
    closure, report = audit(boundary, m, n)
    print(f"--- {boundary} {m}x{n}")
    for line in report.lines():
        print(line)

# The null 2x2 counterexample, spelled out.
closure, report = audit("null", 2, 2)
i, j = report.counterexample
print(closure.elements[closure.product(i, j)].ones(), "vs", closure.elements[closure.product(j, i)].ones())
