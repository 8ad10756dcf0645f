#!/usr/bin/env python3
"""One-hot encode a comma-separated categorical table as a FIMI transaction file.

Every column becomes one item per distinct value. Columns keep file order and
values within a column are numbered by first appearance, so item ids are
0-based and contiguous per column. Rows keep file order. A names file listing
`column=value` per item id is written next to the output.
"""

import argparse
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("raw")
    parser.add_argument("out")
    parser.add_argument("--columns", help="comma-separated column names, in file order")
    args = parser.parse_args()

    with open(args.raw, encoding="ascii") as f:
        rows = [line.strip().split(",") for line in f if line.strip()]
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        print("ragged input", file=sys.stderr)
        return 1
    names = args.columns.split(",") if args.columns else [f"c{i}" for i in range(width)]
    if len(names) != width:
        print(f"expected {width} column names", file=sys.stderr)
        return 1

    values = [{} for _ in range(width)]
    for r in rows:
        for c, v in enumerate(r):
            values[c].setdefault(v, len(values[c]))
    offsets = [0] * width
    for c in range(1, width):
        offsets[c] = offsets[c - 1] + len(values[c - 1])

    with open(args.out, "w", encoding="ascii", newline="\n") as out:
        for r in rows:
            out.write(" ".join(str(offsets[c] + values[c][v]) for c, v in enumerate(r)) + "\n")
    with open(args.out.rsplit(".", 1)[0] + ".names", "w", encoding="ascii", newline="\n") as out:
        for c in range(width):
            for v in values[c]:
                out.write(f"{names[c]}={v}\n")
    total = offsets[-1] + len(values[-1])
    print(f"{args.out}: {len(rows)} objects, {total} attributes")
    return 0


if __name__ == "__main__":
    sys.exit(main())
