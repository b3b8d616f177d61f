#!/usr/bin/env python3
"""Print the planar Doppler-free beam angles for a three-laser triangle.

Usage:
    python3 scripts/beam_geometry.py [--lambda-b NM] [--lambda-r NM] [--lambda-c NM]

Defaults are the Ca+ wavelengths (B 397 nm, R 866 nm, C 729 nm).
"""

import argparse
import math
import sys

import numpy as np

from nstirap.errors import NoSolution
from nstirap.model import phase_matching_geometry


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--lambda-b", type=float, default=397.0)
    parser.add_argument("--lambda-r", type=float, default=866.0)
    parser.add_argument("--lambda-c", type=float, default=729.0)
    args = parser.parse_args(argv)

    try:
        geom = phase_matching_geometry(args.lambda_b, args.lambda_r,
                                       args.lambda_c)
    except NoSolution as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return 1

    vb, vr, vc = geom.wavevectors
    residual = np.linalg.norm(vr + vc - vb) / np.linalg.norm(vb)
    print(f"lambda_B = {args.lambda_b:g} nm, lambda_R = {args.lambda_r:g} nm, "
          f"lambda_C = {args.lambda_c:g} nm")
    print(f"theta(R,C) = {math.degrees(geom.theta_rc):.4f} deg")
    print(f"theta(R,B) = {math.degrees(geom.theta_rb):.4f} deg")
    print(f"closure residual |k_R + k_C - k_B| / k_B = {residual:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
