"""Brute-force reference computations used to pin expected test values.

Deliberately primitive and independent of the mpres package: plain lists and
ints, no numpy, no imports from src/. Correctness here is meant to be
checkable by eye. Two independent routes are provided for small inputs
(row reduction, and exhaustive chain enumeration) so the main library is
never compared against itself.
"""

from itertools import combinations, product


def closure(maximal):
    """All faces of the given simplices, sorted by (dimension, lex)."""
    faces = set()
    for s in maximal:
        s = tuple(sorted(set(s)))
        for k in range(1, len(s) + 1):
            faces.update(combinations(s, k))
    return sorted(faces, key=lambda f: (len(f), f))


def faces_of_dim(cl, k):
    return [f for f in cl if len(f) == k + 1]


def boundary_matrix(cl, k):
    """Rows = (k-1)-faces, cols = k-faces, entry (-1)^i for dropped vertex i."""
    rows = faces_of_dim(cl, k - 1)
    cols = faces_of_dim(cl, k)
    index = {f: i for i, f in enumerate(rows)}
    mat = [[0] * len(cols) for _ in rows]
    for j, f in enumerate(cols):
        for i in range(len(f)):
            mat[index[f[:i] + f[i + 1:]]][j] = 1 if i % 2 == 0 else -1
    return mat


def rank_mod(mat, p):
    if not mat or not mat[0]:
        return 0
    m = [[x % p for x in row] for row in mat]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [(x * inv) % p for x in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][col]:
                c = m[r][col]
                m[r] = [(a - c * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def betti(maximal, k, p):
    """Unreduced mod-p Betti number via boundary-matrix reduction."""
    cl = closure(maximal)
    n_k = len(faces_of_dim(cl, k))
    if n_k == 0:
        return 0
    rank_low = rank_mod(boundary_matrix(cl, k), p) if k > 0 else 0
    rank_high = rank_mod(boundary_matrix(cl, k + 1), p)
    return n_k - rank_low - rank_high


def betti_exhaustive(maximal, k, p):
    """Same number by enumerating every chain; only sane for tiny complexes.

    Counts |ker d_k| = p^z and |im d_{k+1}| = p^b by listing all vectors.
    """
    cl = closure(maximal)
    n_k = len(faces_of_dim(cl, k))
    if n_k == 0:
        return 0

    def apply(mat, vec):
        return tuple(sum(a * x for a, x in zip(row, vec)) % p for row in mat)

    if k > 0:
        d_k = boundary_matrix(cl, k)
        kernel = sum(
            1
            for v in product(range(p), repeat=n_k)
            if not any(apply(d_k, v))
        )
    else:
        kernel = p ** n_k
    z = 0
    while p ** z < kernel:
        z += 1
    n_up = len(faces_of_dim(cl, k + 1))
    d_up = boundary_matrix(cl, k + 1)
    image = {apply(d_up, v) for v in product(range(p), repeat=n_up)}
    b = 0
    while p ** b < len(image):
        b += 1
    return z - b


def euler(maximal):
    cl = closure(maximal)
    return sum((-1) ** (len(f) - 1) for f in cl)


def edge_degrees(maximal):
    """Edge -> number of triangles containing it (2 everywhere on a closed surface)."""
    cl = closure(maximal)
    deg = {e: 0 for e in faces_of_dim(cl, 1)}
    for t in faces_of_dim(cl, 2):
        for e in combinations(t, 2):
            deg[e] += 1
    return deg


def component_count(maximal):
    cl = closure(maximal)
    verts = [f[0] for f in faces_of_dim(cl, 0)]
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in faces_of_dim(cl, 1):
        parent[find(e[0])] = find(e[1])
    return len({find(v) for v in verts})
