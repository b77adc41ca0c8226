"""Reference answers computed without the engine.

Plain Python: closed forms, ``sorted``, slicing.  Nothing here imports the
package except the term helpers used to compare results.
"""


def triangular(n):
    return n * (n + 1) // 2


def unfolded_rules_for(depth):
    """Unfolded rules kept for a goal of this recursion depth: the largest k
    with 2**k <= depth, or 0."""
    return depth.bit_length() - 1 if depth > 0 else 0


def binary_levels(depth):
    """Exponents of the binary expansion of ``depth``, highest first."""
    return [i for i in range(depth.bit_length() - 1, -1, -1) if depth >> i & 1]


def summation_coefficients(i):
    """(V, W) of the summation rule after i doublings; the rule adds the V
    numbers A, A-1, ..., A-V+1 in one step."""
    v = 2 ** i
    return v, v * (v - 1) // 2


def block_sum(a, v):
    return sum(range(a - v + 1, a + 1))


def to_py(term):
    """Python value of a ground integer or proper list term."""
    if isinstance(term, int):
        return term
    out = []
    while isinstance(term, tuple) and term[0] == ".":
        out.append(to_py(term[1]))
        term = term[2]
    assert term == "[]", term
    return out

