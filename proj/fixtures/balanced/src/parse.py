"""Parsing of key=value settings."""


def parse_pair(text):
    key, sep, value = text.partition("=")
    if sep != "=":
        return None
    return key.strip(), value.strip()


def parse_int(text, default=0):
    text = text.strip()
    if not text:
        return default
    negative = text[0] == "-"
    if negative:
        text = text[1:]
    if not text.isdigit():
        return default
    value = int(text)
    return -value if negative else value


def count_words(text):
    count = 0
    in_word = False
    for ch in text:
        if ch == " ":
            in_word = False
        elif not in_word:
            in_word = True
            count += 1
    return count
