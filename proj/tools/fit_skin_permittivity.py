#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
#
# Derives the single-frequency skin phantom permittivity shipped in
# data/materials/skin_phantom_28ghz.csv.
#
# Constraints at 28 GHz:
#   * plane-wave penetration depth fixed at 0.935 mm (centre of 0.92-0.95 mm)
#   * |R(5 mm) - R(1.5 mm)| as close as possible to 0.14 dB, where R is the
#     normal-incidence reflection in dB of a skin slab in air backed by a
#     Styrofoam half-space (eps = 1.03)
#   * eps' searched in [15, 25]
#
# Usage: fit_skin_permittivity.py [output.csv]

import cmath
import math
import sys

C0 = 299792458.0
FREQ_GHZ = 28.0
DEPTH_MM = 0.935
TARGET_DELTA_DB = 0.14
STYROFOAM = 1.03


def k0(f_ghz):
    return 2.0 * math.pi * f_ghz * 1e9 / C0


def depth_mm(eps, f_ghz):
    return 1e3 / (k0(f_ghz) * abs(cmath.sqrt(eps).imag))


def slab_reflection(eps, thickness_mm, f_ghz):
    k = k0(f_ghz)
    n0, n1, n2 = 1.0, cmath.sqrt(eps), cmath.sqrt(STYROFOAM)
    r01 = (n0 - n1) / (n0 + n1)
    r12 = (n1 - n2) / (n1 + n2)
    ph = cmath.exp(-2j * k * n1 * thickness_mm * 1e-3)
    return (r01 + r12 * ph) / (1.0 + r01 * r12 * ph)


def delta_db(eps):
    a = 20.0 * math.log10(abs(slab_reflection(eps, 5.0, FREQ_GHZ)))
    b = 20.0 * math.log10(abs(slab_reflection(eps, 1.5, FREQ_GHZ)))
    return a - b


def loss_for_depth(eps_real):
    # depth decreases monotonically in eps''
    lo, hi = 1e-3, 100.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if depth_mm(complex(eps_real, -mid), FREQ_GHZ) > DEPTH_MM:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else None
    best = None
    steps = 10000
    for i in range(steps + 1):
        er = 15.0 + 10.0 * i / steps
        ei = loss_for_depth(er)
        err = abs(abs(delta_db(complex(er, -ei))) - TARGET_DELTA_DB)
        if best is None or err < best[0]:
            best = (err, er, ei)
    _, er, ei = best
    er, ei = round(er, 3), round(ei, 3)
    eps = complex(er, -ei)
    lines = [
        "# skin phantom, single point at 28 GHz (non-dispersive)",
        "# generated by tools/fit_skin_permittivity.py",
        f"# penetration_depth_mm={depth_mm(eps, FREQ_GHZ):.4f}"
        f" delta_5mm_vs_1p5mm_db={delta_db(eps):.4f}",
        "frequency_ghz,eps_real,eps_imag",
        f"{FREQ_GHZ},{er},{ei}",
    ]
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
