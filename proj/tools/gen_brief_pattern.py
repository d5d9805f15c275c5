#!/usr/bin/env python3
"""Regenerates include/padbench/brief_pattern.hpp.

The table is frozen: descriptors from older releases must stay comparable, so
only run this when intentionally bumping the descriptor format.
"""
import numpy as np

SEED = 20240131
RADIUS = 13.0
SIGMA = 31.0 / 5.0


def main():
    rng = np.random.default_rng(SEED)
    pairs = []
    while len(pairs) < 256:
        a = np.rint(rng.normal(0.0, SIGMA, 2)).astype(int)
        b = np.rint(rng.normal(0.0, SIGMA, 2)).astype(int)
        if np.hypot(*a) > RADIUS or np.hypot(*b) > RADIUS or (a == b).all():
            continue
        pairs.append((a[0], a[1], b[0], b[1]))
    print("// Generated by tools/gen_brief_pattern.py. Do not edit.")
    print("#pragma once\n\n#include <array>\n#include <cstdint>\n")
    print("namespace padbench::detail {\n")
    print("// (x1, y1, x2, y2) offsets from the keypoint, radius <= 13 px.")
    print("inline constexpr std::array<std::array<std::int8_t, 4>, 256> kBriefPattern = {{")
    for i in range(0, 256, 4):
        print("    " + " ".join("{{%d, %d, %d, %d}}," % p for p in pairs[i:i + 4]))
    print("}};\n\n}  // namespace padbench::detail")


if __name__ == "__main__":
    main()
