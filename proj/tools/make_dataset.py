#!/usr/bin/env python3
"""Export the Middlebury 2014 Motorcycle pair bundled with scikit-image as a
sgmrank dataset directory (left.pgm, right.pgm, truth.pgm, meta).

The bundled pair is pre-rectified and downsampled so that all ground-truth
disparities fall below 64. We crop a 450x375 window so the dataset matches
the canonical Middlebury 2003 frame size, convert to gray with the same
luma weights the library uses, and store truth as quarter-pixel PGM
(value = round(4 * disparity), 0 = unknown) with divisor 4.

Usage: make_dataset.py [out_dir]
"""

import sys
import numpy as np
from skimage.data import stereo_motorcycle
from pathlib import Path

CROP_X, CROP_Y, CROP_W, CROP_H = 145, 62, 450, 375


def to_gray(rgb):
    r = rgb[:, :, 0].astype(np.float64)
    g = rgb[:, :, 1].astype(np.float64)
    b = rgb[:, :, 2].astype(np.float64)
    return np.floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5).astype(np.uint8)


def write_pgm(path, img):
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode())
        f.write(img.tobytes())


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/motorcycle")
    out.mkdir(parents=True, exist_ok=True)

    left, right, disp = stereo_motorcycle()
    sl = np.s_[CROP_Y:CROP_Y + CROP_H, CROP_X:CROP_X + CROP_W]
    left, right, disp = left[sl], right[sl], disp[sl]

    truth = np.zeros(disp.shape, dtype=np.uint8)
    known = np.isfinite(disp) & (disp > 0)
    q = np.floor(disp[known].astype(np.float64) * 4.0 + 0.5)
    if q.max() > 255:
        raise SystemExit("disparity exceeds 8-bit quarter-pixel range")
    truth[known] = q.astype(np.uint8)

    write_pgm(out / "left.pgm", to_gray(left))
    write_pgm(out / "right.pgm", to_gray(right))
    write_pgm(out / "truth.pgm", truth)
    (out / "meta").write_text("divisor=4\n")

    print(f"wrote {out}: {CROP_W}x{CROP_H}, known truth "
          f"{known.mean() * 100:.1f}%, max disparity {disp[known].max():.2f}")


if __name__ == "__main__":
    main()
