"""Parser for the set-descriptor mini-language.

    list:1,5,9      explicit members
    ap:m=6,c=0      {x : x = c mod m}
    rand:d=0.5      each x kept independently with probability d
    iv:1..1000      the interval [lo, hi]
"""

import re

from ..errors import DescriptorParseError
from ..sumsets import IntervalSpec, ListSpec, ProgressionSpec, RandomSpec

_INT = re.compile(r"-?\d+")
_REAL = re.compile(r"(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?")


class _Cursor:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def fail(self, message):
        raise DescriptorParseError(message, self.text, self.pos)

    def expect(self, literal):
        if not self.text.startswith(literal, self.pos):
            self.fail(f"expected {literal!r}")
        self.pos += len(literal)

    def match(self, pattern, what):
        m = pattern.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}")
        self.pos = m.end()
        return m.group(0)

    def at(self, literal):
        return self.text.startswith(literal, self.pos)

    def done(self):
        if self.pos != len(self.text):
            self.fail("unexpected trailing characters")


def _key_values(cur, keys, parse):
    out = {}
    while True:
        start = cur.pos
        name = cur.match(re.compile(r"[a-z]+"), "a key")
        if name not in keys:
            cur.pos = start
            cur.fail(f"unknown key {name!r}; expected one of {sorted(keys)}")
        if name in out:
            cur.pos = start
            cur.fail(f"duplicate key {name!r}")
        cur.expect("=")
        out[name] = parse[name](cur)
        if not cur.at(","):
            break
        cur.expect(",")
    missing = keys - out.keys()
    if missing:
        cur.fail(f"missing key(s) {sorted(missing)}")
    return out


def parse_descriptor(text):
    cur = _Cursor(text.strip())
    kind = cur.match(re.compile(r"[a-z]+"), "a descriptor kind (list, ap, rand, iv)")
    cur.expect(":")
    if kind == "list":
        values = [int(cur.match(_INT, "an integer"))]
        while cur.at(","):
            cur.expect(",")
            values.append(int(cur.match(_INT, "an integer")))
        spec = ListSpec(tuple(values))
    elif kind == "ap":
        kv = _key_values(cur, {"m", "c"}, {
            "m": lambda c: int(c.match(_INT, "an integer")),
            "c": lambda c: int(c.match(_INT, "an integer")),
        })
        spec = ProgressionSpec(kv["m"], kv["c"])
    elif kind == "rand":
        kv = _key_values(cur, {"d"}, {"d": lambda c: float(c.match(_REAL, "a number"))})
        spec = RandomSpec(kv["d"])
    elif kind == "iv":
        lo = int(cur.match(_INT, "an integer"))
        cur.expect("..")
        hi = int(cur.match(_INT, "an integer"))
        spec = IntervalSpec(lo, hi)
    else:
        cur.pos = 0
        cur.fail(f"unknown descriptor kind {kind!r}")
    cur.done()
    return spec
