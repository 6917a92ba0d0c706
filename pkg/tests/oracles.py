"""Independent scalar reference implementations used to check the imaging
module. Everything here is straight per-pixel Python loops over nested
lists: no numpy, no shared code with the package, deliberately slow."""

import math


def frame_pixels(frame):
    """Frame -> list of rows of (r, g, b) int tuples."""
    return [[tuple(int(v) for v in px) for px in row] for row in frame.array.tolist()]


def luma(px):
    r, g, b = px
    return 0.299 * r + 0.587 * g + 0.114 * b


def brute_brightness(pixels):
    total = 0.0
    n = 0
    for row in pixels:
        for px in row:
            total += luma(px)
            n += 1
    return total / n / 255.0


def brute_contrast(pixels):
    values = [luma(px) / 255.0 for row in pixels for px in row]
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    return math.sqrt(var) / 0.5


def brute_colorfulness(pixels):
    rg = [px[0] - px[1] for row in pixels for px in row]
    yb = [(px[0] + px[1]) / 2.0 - px[2] for row in pixels for px in row]
    n = len(rg)
    mean_rg = sum(rg) / n
    mean_yb = sum(yb) / n
    var_rg = sum((v - mean_rg) ** 2 for v in rg) / n
    var_yb = sum((v - mean_yb) ** 2 for v in yb) / n
    raw = math.sqrt(var_rg + var_yb) + 0.3 * math.sqrt(mean_rg**2 + mean_yb**2)
    return min(raw / 150.0, 1.0)


_SOBEL_X = ((-1, 0, 1), (-2, 0, 2), (-1, 0, 1))
_SOBEL_Y = ((-1, -2, -1), (0, 0, 0), (1, 2, 1))


def brute_sharpness(pixels):
    h = len(pixels)
    w = len(pixels[0])
    lum = [[luma(px) for px in row] for row in pixels]
    total = 0.0
    n = 0
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            gx = 0.0
            gy = 0.0
            for dy in range(3):
                for dx in range(3):
                    v = lum[y + dy - 1][x + dx - 1]
                    gx += _SOBEL_X[dy][dx] * v
                    gy += _SOBEL_Y[dy][dx] * v
            total += math.sqrt(gx * gx + gy * gy)
            n += 1
    return min(total / n / (1020.0 * math.sqrt(2.0)), 1.0)


def _round_u8(x):
    # Half away from zero; inputs are clamped to [0, 255] first.
    x = min(max(x, 0.0), 255.0)
    return int(math.floor(x + 0.5))


def brute_enhance(pixels, f_brightness, f_contrast, f_color, f_sharpness):
    """Reference of the four-stage blend pipeline on nested pixel lists."""
    h = len(pixels)
    w = len(pixels[0])

    # Brightness.
    out = [
        [tuple(_round_u8(c * f_brightness) for c in px) for px in row] for row in pixels
    ]

    # Contrast, toward the stage input's mean luma.
    mean = sum(luma(px) for row in out for px in row) / (w * h)
    out = [
        [tuple(_round_u8(mean + f_contrast * (c - mean)) for c in px) for px in row]
        for row in out
    ]

    # Color, toward the per-pixel gray.
    new = []
    for row in out:
        new_row = []
        for px in row:
            g = luma(px)
            new_row.append(tuple(_round_u8(g + f_color * (c - g)) for c in px))
        new.append(new_row)
    out = new

    # Sharpness, toward the 3x3-smoothed copy (borders copied).
    smooth = [[list(px) for px in row] for row in out]
    kernel = ((1, 1, 1), (1, 5, 1), (1, 1, 1))
    for y in range(1, h - 1):
        for x in range(1, w - 1):
            for c in range(3):
                acc = 0.0
                for dy in range(3):
                    for dx in range(3):
                        acc += kernel[dy][dx] * out[y + dy - 1][x + dx - 1][c]
                smooth[y][x][c] = acc / 13.0
    new = []
    for y in range(h):
        new_row = []
        for x in range(w):
            px = out[y][x]
            sm = smooth[y][x]
            new_row.append(
                tuple(_round_u8(sm[c] + f_sharpness * (px[c] - sm[c])) for c in range(3))
            )
        new.append(new_row)
    return new
