#!/usr/bin/env python3
"""Writes the reference .pwv files under tests/data with struct, independent of the C++ writer."""
import struct
import sys
from pathlib import Path

SPECIAL = [-0.0, 5e-324, 1.7976931348623157e308]


def value(n):
    return SPECIAL[n] if n < len(SPECIAL) else (n - 20) * 0.1


def write(path, n1, n2, comps):
    count = n1 * n2 * comps
    data = b"PWV1" + struct.pack("<3I", n1, n2, comps) + struct.pack(f"<{count}d", *(value(n) for n in range(count)))
    path.write_bytes(data)


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "data")
    out.mkdir(parents=True, exist_ok=True)
    write(out / "vector_3x2x8.pwv", 3, 2, 8)
    write(out / "vector_2x3x1.pwv", 2, 3, 1)


if __name__ == "__main__":
    main()
