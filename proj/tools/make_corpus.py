#!/usr/bin/env python3
"""Builds the 401x401 grayscale evaluation corpus under tests/data/corpus.

Three groups: portraits, pencil sketches derived from those portraits, and
cartoons / clip art. Sources are sample images bundled with scikit-image and
matplotlib plus two drawn cartoons, so the corpus regenerates offline.
"""
import os
import pathlib
import sys

import matplotlib
import numpy as np
from PIL import Image, ImageDraw
from scipy.ndimage import gaussian_filter
from skimage import color, data

SIZE = 401



def mpl_sample(name):
    path = os.path.join(matplotlib.get_data_path(), "sample_data", name)
    return lambda: np.asarray(Image.open(path))


PORTRAITS = {
    "portrait_astronaut": data.astronaut,
    "portrait_camera": data.camera,
    "portrait_cat": data.chelsea,
    "portrait_hopper": mpl_sample("grace_hopper.jpg"),
}

CLIPART = {
    "cartoon_horse": data.horse,
    "cartoon_logo": data.logo,
    "cartoon_present": mpl_sample("Minduka_Present_Blue_Pack.png"),
}


def to_gray_u8(img):
    img = np.asarray(img)
    if img.ndim == 3:
        if img.shape[2] == 4:
            rgb = img[..., :3].astype(float)
            a = img[..., 3:4].astype(float) / 255.0
            img = (rgb * a + 255.0 * (1 - a)).astype(np.uint8)
        img = color.rgb2gray(img)
    if img.dtype == bool:
        img = img.astype(float)
    if img.dtype != np.uint8:
        img = np.clip(img * 255.0 if img.max() <= 1.0 else img, 0, 255).astype(np.uint8)
    return img


def center_square(img):
    h, w = img.shape
    s = min(h, w)
    y, x = (h - s) // 2, (w - s) // 2
    return img[y:y + s, x:x + s]


def pencil_sketch(gray):
    """Color-dodge of the image over its blurred negative."""
    g = gray.astype(float)
    blurred_neg = gaussian_filter(255.0 - g, sigma=6.0)
    out = np.clip(g * 255.0 / np.maximum(255.0 - blurred_neg, 1.0), 0, 255)
    return out.astype(np.uint8)


def smiley():
    im = Image.new("L", (SIZE, SIZE), 235)
    d = ImageDraw.Draw(im)
    d.ellipse((60, 60, 340, 340), fill=200, outline=20, width=8)
    d.ellipse((130, 130, 175, 195), fill=30)
    d.ellipse((226, 130, 271, 195), fill=30)
    d.arc((120, 170, 280, 300), 20, 160, fill=20, width=10)
    return im


def mushroom():
    im = Image.new("L", (SIZE, SIZE), 245)
    d = ImageDraw.Draw(im)
    d.pieslice((50, 60, 350, 330), 180, 360, fill=70, outline=10, width=6)
    d.rectangle((150, 195, 250, 340), fill=215, outline=10, width=6)
    for box in [(110, 110, 160, 160), (230, 100, 285, 150), (180, 70, 220, 105)]:
        d.ellipse(box, fill=245)
    d.ellipse((170, 240, 185, 265), fill=10)
    d.ellipse((215, 240, 230, 265), fill=10)
    return im


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    def square(loader):
        g = center_square(to_gray_u8(loader()))
        return np.asarray(Image.fromarray(g).resize((SIZE, SIZE), Image.LANCZOS))

    for name, loader in PORTRAITS.items():
        g = square(loader)
        Image.fromarray(g).save(out / f"{name}.png")
        if name != "portrait_cat":
            sketch = name.replace("portrait_", "sketch_")
            Image.fromarray(pencil_sketch(g)).save(out / f"{sketch}.png")
    for name, loader in CLIPART.items():
        Image.fromarray(square(loader)).save(out / f"{name}.png")
    smiley().save(out / "cartoon_smiley.png")
    mushroom().save(out / "cartoon_mushroom.png")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/corpus")
