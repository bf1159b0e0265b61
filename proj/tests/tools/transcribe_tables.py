#!/usr/bin/env python3
# Regenerates tests/golden/tables_strict.txt from the tab-separated protocol
# tables. Independent of the C++ encoding; run by hand only.
import re
import sys

ALIASES = {"askRetryBC": "askToRetryBC", "sendAllToken": "sendAllTokens"}
MARKERS = {"z": "stall", "i": "ignore", "e": "error"}


def cell_text(raw):
    raw = raw.strip().replace("do Load", "doLoad")
    if raw in MARKERS:
        return MARKERS[raw]
    words = raw.split()
    nxt = None
    if words and words[-1].startswith("/"):
        nxt = words.pop()
    acts = [ALIASES.get(w, w) for w in words]
    out = " ".join(acts)
    if nxt:
        out = (out + " " + nxt).strip()
    return out


def table(lines, start_pat, prefix):
    i = next(k for k, l in enumerate(lines) if re.match(start_pat, l))
    k = i + 1
    while not lines[k].startswith("\t"):
        k += 1
    header = lines[k].strip("\n").split("\t")[1:]
    rows = []
    k += 1
    while k < len(lines) and lines[k].strip():
        parts = lines[k].rstrip("\n").split("\t")
        rows.append((parts[0].strip(), parts[1:]))
        k += 1
    out = []
    for state, cells in rows:
        assert len(cells) == len(header), (state, len(cells))
        for ev, c in zip(header, cells):
            out.append(f"{prefix},{state},{ev.strip()} → {cell_text(c)}")
    return out


def main():
    lines = open(sys.argv[1]).read().splitlines()
    out = table(lines, r"^Table I State table", "L1")
    out += table(lines, r"^Table II\. State table", "L2")
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
