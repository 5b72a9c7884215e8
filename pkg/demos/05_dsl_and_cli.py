"""The text grammar and the command line.

Expressions parse to net trees with an inferred tier; the canonical
printer round-trips.  The same operations are scriptable through the
`gnum` CLI with a machine-readable result document.
"""

import subprocess
import sys

from gnum import parse, print_net
from gnum.errors import ParseError
from gnum.harness import eval_grid, GridSpec

# -- parsing and printing --------------------------------------------------------

for text in ["eps^-2 + sin(1/eps)",
             "abs(sin(1/eps))",
             "min(eps, abs(cos(1/eps)))",
             "bumptrain(geo(1/2), decay(1, 0))",
             "indicator(harmonic)"]:
    net, tier = parse(text)
    print(f"{text:38s} tier = {tier}   reprints as {print_net(net)!r}")

# positioned errors with the expected-token set
try:
    parse("eps^(1/2")
except ParseError as e:
    print(f"\nparse error at line {e.line} column {e.column}, "
          f"expected {e.expected}")

# -- grid evaluation ---------------------------------------------------------------

net, _ = parse("eps^-1 * sin(1/eps)")
rows = eval_grid(net, GridSpec(n_points=8, eps_min=0.01))
print("\neps/value columns:")
for e, v in rows:
    print(f"  {e:.6g}  {v:.6g}")

# -- the CLI ------------------------------------------------------------------------

print("\nCLI one-liners (exit code 0 decided, 3 unknown, 1 parse, 2 precondition):")
for argv in (["classify", "eps^-2 + sin(1/eps)", "--grid", "200"],
             ["compare", "eps", "eps + exp(-1/eps)", "--grid", "200"],
             ["smooth", "abs(sin(1/eps))", "--grid", "300"],
             ["zerodiv", "sin(1/eps)", "--grid", "300"]):
    out = subprocess.run([sys.executable, "-m", "gnum.cli", *argv],
                         capture_output=True, text=True)
    head = out.stdout.strip().splitlines()[:3]
    print(f"  gnum {' '.join(argv[:2])}...  ->  exit {out.returncode}; "
          f"{head[1] if len(head) > 1 else head}")
