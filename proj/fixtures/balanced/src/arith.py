"""Integer helpers."""


def clamp(value, low, high):
    if value < low:
        return low
    if value > high:
        return high
    return value


def digit_sum(n):
    total = 0
    while n > 0:
        total += n % 10
        n //= 10
    return total


def sign(x):
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def mean(values):
    if not values:
        return 0
    return sum(values) / len(values)
