import os
import sys

import pandas as pd

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ctrc.cctrs import load_system  # noqa: E402
from ctrc.labeled import LabeledRewriter  # noqa: E402
from ctrc.terms import parse_term  # noqa: E402


def numeral(n):
    return "s(" * n + "0" + ")" * n


def parity_table(system_file, max_n):
    """
    Derivation heights of even(s^n(0)) and odd(s^n(0)) next to 2^(n+1) - 1.

    :param system_file: Path to the even/odd system
    :param max_n: Largest numeral to measure
    """
    rewriter = LabeledRewriter(load_system(system_file))
    rows = []
    for n in range(max_n + 1):
        rows.append(
            {
                "n": n,
                "dh even": str(rewriter.derivation_height(parse_term(f"even({numeral(n)})"))),
                "dh odd": str(rewriter.derivation_height(parse_term(f"odd({numeral(n)})"))),
                "2^(n+1)-1": 2 ** (n + 1) - 1,
            }
        )
    return pd.DataFrame(rows)


def fg_table(system_file, max_n):
    """Derivation heights of f^n(g(f^m(a))) next to 2m + n; n = 0 is the g(f^m(a)) row."""
    rewriter = LabeledRewriter(load_system(system_file))
    rows = []
    for m in range(max_n + 1):
        for n in range(max_n + 1):
            term = "f(" * n + "g(" + "f(" * m + "a" + ")" * (m + n + 1)
            rows.append(
                {
                    "n": n,
                    "m": m,
                    "dh": str(rewriter.derivation_height(parse_term(term))),
                    "2m+n": 2 * m + n,
                }
            )
    return pd.DataFrame(rows)


if __name__ == "__main__":
    if "-h" in sys.argv or len(sys.argv) not in (3, 4):
        print(
            "\nUsage: python {} <even_system> <fg_system> [max_n]\n\n"
            "Prints the derivation heights of the parity and f/g examples\n"
            "next to their closed forms (max_n defaults to 4).\n".format(sys.argv[0])
        )
        exit(1)

    max_n = int(sys.argv[3]) if len(sys.argv) == 4 else 4
    print("\nParity: dh(even(s^n(0))) and dh(odd(s^n(0)))\n")
    print(parity_table(sys.argv[1], max_n).to_string(index=False))
    print("\nf/g: dh(f^n(g(f^m(a))))\n")
    print(fg_table(sys.argv[2], max_n).to_string(index=False))
