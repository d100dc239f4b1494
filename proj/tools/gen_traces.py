#!/usr/bin/env python3
"""Writes the synthetic packet traces under data/traces.

Both traces are drawn from fixed mixtures with a fixed seed, so running the
script again reproduces the committed files byte for byte.
"""
import argparse
import random
from pathlib import Path


def http_browsing(rng):
    # Web browsing: small requests, mid-sized objects, full segments of bulk
    # downloads, and think-time gaps between page loads.
    r = rng.random()
    if r < 0.25:
        length = 1500
    elif r < 0.45:
        length = rng.randint(40, 120)
    elif r < 0.75:
        length = rng.randint(120, 700)
    else:
        length = rng.randint(700, 1499)
    g = rng.random()
    if g < 0.20:
        iat = rng.uniform(0.0, 5.0)
    elif g < 0.70:
        iat = rng.uniform(5.0, 60.0)
    else:
        iat = rng.uniform(60.0, 200.0)
    return length, iat


def bulk_tunnel(rng):
    # An encrypted tunnel moving bulk data: near-MTU segments back to back,
    # with the odd pause for acknowledgements.
    length = 1500 if rng.random() < 0.75 else rng.randint(1450, 1499)
    iat = rng.uniform(0.2, 2.5) if rng.random() < 0.90 else rng.uniform(3.0, 60.0)
    return length, iat


def write(path, gen, rows, seed):
    rng = random.Random(seed)
    with open(path, "w", newline="\n") as f:
        f.write("length,iat_ms\n")
        for _ in range(rows):
            length, iat = gen(rng)
            f.write(f"{length},{iat:.3f}\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "traces"))
    ap.add_argument("--rows", type=int, default=2000)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write(out / "http_browsing.csv", http_browsing, args.rows, 20150701)
    write(out / "bulk_tunnel.csv", bulk_tunnel, args.rows, 20150702)


if __name__ == "__main__":
    main()
