"""Cents arithmetic for a ledger."""


def add_cents(a, b):
    total = a + b
    if total < 0:
        return 0
    return total


def split_even(cents, parts):
    share = cents // parts
    rest = cents - share * parts
    return [share + 1 if i < rest else share for i in range(parts)]


def apply_discount(cents, percent):
    if percent > 100:
        percent = 100
    return cents - cents * percent // 100


def format_cents(cents):
    sign = "-" if cents < 0 else ""
    cents = abs(cents)
    return "%s%d.%02d" % (sign, cents // 100, cents % 100)


def tax(cents, rate):
    return (cents * rate + 50) // 100
