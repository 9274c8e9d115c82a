"""Build a small lattice of theories and print it in every export format.

Two unary relations over a two-element carrier, a four-sentence pool.
Run from the repository root:

    python3 scripts/demo_lattice.py [--format text|dot|cxt]
"""

from __future__ import annotations

import argparse

from theorylattice import (
    build_truth_classification,
    lattice_dot,
    lattice_text,
    parse_sentence,
    parse_signature,
    theory_lattice,
    write_cxt,
)

SIGNATURE = """
entity E
relation P(E)
relation Q(E)
"""

POOL = (
    "forall x:E. P(x)",
    "forall x:E. Q(x)",
    "exists x:E. P(x)",
    "forall x:E. P(x) -> Q(x)",
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--format", choices=("text", "dot", "cxt"), default="text")
    args = parser.parse_args()

    sig = parse_signature(SIGNATURE)
    pool = [parse_sentence(sig, s) for s in POOL]
    tc = build_truth_classification(sig, pool, carriers={"E": ["a", "b"]})
    lat = theory_lattice(tc)

    if args.format == "text":
        print(lattice_text(lat), end="")
    elif args.format == "dot":
        print(lattice_dot(lat.lattice), end="")
    else:
        print(write_cxt(tc.classification, "demo"), end="")


if __name__ == "__main__":
    main()
