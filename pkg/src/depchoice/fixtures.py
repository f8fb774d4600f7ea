"""Small named DSCs used throughout the docs, tests and CLI examples.

Names follow the shorthand ``a.b∨c`` = "a depends on b or c".
"""

from .core import Dsc, discrete


def a_b_or_c() -> Dsc:
    """a.b∨c: dep(a) = {{b}, {c}}."""
    return Dsc({"a": [["b"], ["c"]], "b": [[]], "c": [[]]})


def a_b_and_c() -> Dsc:
    """a.b∧c: dep(a) = {{b, c}}."""
    return Dsc({"a": [["b", "c"]], "b": [[]], "c": [[]]})


def a_b_c_b() -> Dsc:
    """a.b,c.b: a and c both depend on b."""
    return Dsc({"a": [["b"]], "b": [[]], "c": [["b"]]})


def u_v() -> Dsc:
    """u.v: u depends on v."""
    return Dsc({"u": [["v"]], "v": [[]]})


def r_s_or_t() -> Dsc:
    """r.s∨t, a relabelled copy of a.b∨c."""
    return Dsc({"r": [["s"], ["t"]], "s": [[]], "t": [[]]})


def chain_abc() -> Dsc:
    """dep(a) = {{b, c}}, dep(b) = {{c}}, dep(c) = {∅}."""
    return Dsc({"a": [["b", "c"]], "b": [["c"]], "c": [[]]})


def versions_pq() -> Dsc:
    """q needs p1 or p2; p1 and p2 are interchangeable versions."""
    return Dsc({"p1": [[]], "p2": [[]], "q": [["p1"], ["p2"]]})


def empty() -> Dsc:
    return Dsc({})


def terminal() -> Dsc:
    return discrete(["*"])


ALL = {
    "a.b|c": a_b_or_c,
    "a.b&c": a_b_and_c,
    "a.b,c.b": a_b_c_b,
    "u.v": u_v,
    "r.s|t": r_s_or_t,
    "a.bc,b.c": chain_abc,
    "versions": versions_pq,
    "empty": empty,
    "terminal": terminal,
}
