#!/usr/bin/env python3
"""Regenerates data/fixtures from images bundled with scikit-image.

All sources are public domain or CC0. Color images are converted to luma with
the BT.601 weights and every image is center cropped. Output files are binary
8-bit PGM named by index, which is the layout the sweep expects.
"""

import argparse
import pathlib

import numpy as np
import skimage.data

NATURAL = [
    "camera",                # CC0, Lav Varshney
    "astronaut",             # NASA, public domain
    "immunohistochemistry",  # CMMI, no known copyright restrictions
    "hubble_deep_field",     # NASA, public domain
    "retina",                # Wikimedia Commons, CC0
    "cell",                  # CC0
]


def luma(img):
    if img.ndim == 2:
        return img.astype(np.uint8)
    rgb = img[..., :3].astype(np.float64)
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return np.clip(np.rint(y), 0, 255).astype(np.uint8)


def center_crop(img, size):
    h, w = img.shape
    if h < size or w < size:
        raise ValueError(f"image {w}x{h} smaller than crop {size}")
    y, x = (h - size) // 2, (w - size) // 2
    return img[y:y + size, x:x + size]


def write_pgm(path, img):
    path.parent.mkdir(parents=True, exist_ok=True)
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(np.ascontiguousarray(img).tobytes())


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data" / "fixtures",
                    type=pathlib.Path)
    args = ap.parse_args()
    for i, name in enumerate(NATURAL):
        write_pgm(args.out / "natural" / f"{i}.pgm", center_crop(luma(getattr(skimage.data, name)()), 512))
    write_pgm(args.out / "small" / "0.pgm", center_crop(luma(skimage.data.camera()), 128))


if __name__ == "__main__":
    main()
