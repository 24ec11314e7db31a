"""Rectangle and interval arithmetic."""


def area(width, height):
    return width * height


def perimeter(width, height):
    return 2 * (width + height)


def overlap(a_start, a_end, b_start, b_end):
    start = max(a_start, b_start)
    end = min(a_end, b_end)
    if end < start:
        return 0
    return end - start


def scale(values, factor):
    out = []
    for v in values:
        out.append(v * factor)
    return out


def manhattan(x1, y1, x2, y2):
    return abs(x1 - x2) + abs(y1 - y2)
