"""Brute-force reference implementations used to cross-check the engine.

Nothing here shares code with the search or closure routines under test:
homomorphisms come from scanning every total map, congruences from scanning
every set partition, and zero parts from naive fixpoint iteration.
"""

import itertools


def evaluate(A, sym, args):
    """Table lookup through the nested representation."""
    t = A.nested_table(sym)
    for x in args:
        t = t[x]
    return t


def is_hom_naive(m, A, B):
    for sym, arity in A.signature.operations:
        for args in itertools.product(range(A.size), repeat=arity):
            if m[evaluate(A, sym, args)] != evaluate(B, sym, [m[x] for x in args]):
                return False
    return True


def homs_naive(A, B):
    """Scan every total map; positions holding a constant are pinned up front."""
    choices = [range(B.size)] * A.size
    for sym, arity in A.signature.operations:
        if arity == 0:
            choices[evaluate(A, sym, ())] = [evaluate(B, sym, ())]
    return [m for m in itertools.product(*choices) if is_hom_naive(m, A, B)]


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def congruences_naive(A):
    """All compatible partitions, as frozensets of frozensets."""
    out = []
    for part in set_partitions(range(A.size)):
        label = {}
        for i, block in enumerate(part):
            for x in block:
                label[x] = i
        ok = True
        for sym, arity in A.signature.operations:
            if arity == 0:
                continue
            for xs in itertools.product(range(A.size), repeat=arity):
                for ys in itertools.product(range(A.size), repeat=arity):
                    if all(label[x] == label[y] for x, y in zip(xs, ys)):
                        if label[evaluate(A, sym, xs)] != label[evaluate(A, sym, ys)]:
                            ok = False
                            break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.append(frozenset(frozenset(b) for b in part))
    return out


def as_partition(theta):
    return frozenset(frozenset(c) for c in theta.classes())


def zero_part_naive(A):
    """Iterate 'apply every operation to what we have' from the constants."""
    cur = {evaluate(A, s, ()) for s, a in A.signature.operations if a == 0}
    while True:
        new = set(cur)
        for sym, arity in A.signature.operations:
            for args in itertools.product(sorted(cur), repeat=arity):
                new.add(evaluate(A, sym, args))
        if new == cur:
            return cur
        cur = new


def preimage_scan(m, A, B):
    z = zero_part_naive(B)
    return {a for a in range(A.size) if m[a] in z}


def boolean_grid_sizes_naive():
    """Object sizes of the grid over 2^3 for the projections onto bits {0,1} and {1,2}.

    Counted on bitmasks directly. The zero part of each quotient is the pair
    of classes of 0 and of the top element.
    """
    top = 7
    theta_cls = {x & 3 for x in range(8)}
    psi_cls = {(x >> 1) & 3 for x in range(8)}
    join_cls = {(x >> 1) & 1 for x in range(8)}

    def in_zero(label, mask):
        return label in {0, top & mask}

    A = [x for x in range(8) if in_zero(x & 3, 3)]
    Kp = [x for x in range(8) if in_zero((x >> 1) & 3, 3)]
    Kpp = [c for c in theta_cls if in_zero((c >> 1) & 1, 1)]
    B = {(x >> 1) & 3 for x in A}
    K = [x for x in A if in_zero((x >> 1) & 3, 3)]
    return (len(K), len(Kp), len(Kpp), len(A), 8, len(theta_cls), len(B), len(psi_cls), len(join_cls))
