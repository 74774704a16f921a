#!/usr/bin/env python3
"""Regenerate the bundled indiscrete-monoid example.

Builds the weak instance on the indiscrete category over Z/3 (binary
generator acting by addition mod 3, nullary generator picking 0, every
delta the unique arrow) and writes its JSON form next to the bundled
theory files.
"""

from pathlib import Path

from operad_workbench.terms import parse_presentation
from operad_workbench.weakcat import indiscrete_monoid_instance, save_weakcat

EXAMPLES = Path(__file__).resolve().parent.parent / (
    "src/operad_workbench/examples")


def main():
    presentation = parse_presentation((EXAMPLES / "monoid.th").read_text())
    W = indiscrete_monoid_instance(
        presentation, ("0", "1", "2"), "0",
        lambda a, b: str((int(a) + int(b)) % 3))
    out = EXAMPLES / "indiscrete_monoid_weakcat.json"
    out.write_text(save_weakcat(W))
    print(f"wrote {out} ({len(W.base.objects)} objects, "
          f"{len(W.base.arrows)} arrows)")


if __name__ == "__main__":
    main()
