#!/usr/bin/env python3
"""Write the synthetic test corpus (and optional noisy copies) as PGM files.

Example:
    python scripts/make_corpus.py --out corpus --count 10 --size 32 \
        --noisy-out corpus_noisy --noise 0.0314
"""

import argparse
from pathlib import Path

from splic.image_io import write_image
from splic.testimages import add_uniform_noise, make_test_image


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True, help="directory for clean images")
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--size", type=int, default=32)
    ap.add_argument("--width", type=int, default=None, help="defaults to --size")
    ap.add_argument("--noisy-out", help="also write corrupted copies here")
    ap.add_argument("--noise", type=float, default=8 / 255)
    ap.add_argument("--seed", type=int, default=100)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    shape = (args.size, args.width or args.size)
    noisy_dir = Path(args.noisy_out) if args.noisy_out else None
    if noisy_dir:
        noisy_dir.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        clean = make_test_image(i, shape)
        write_image(clean, out / f"scene{i:02d}.pgm")
        if noisy_dir:
            noisy = add_uniform_noise(clean, args.noise, args.seed + i)
            write_image(noisy, noisy_dir / f"scene{i:02d}.pgm")
    print(f"wrote {args.count} scenes to {out}" + (f" and {noisy_dir}" if noisy_dir else ""))


if __name__ == "__main__":
    main()
