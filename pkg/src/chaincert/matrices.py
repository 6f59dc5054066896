"""Sparse exact matrices and the normal forms backing every solvability decision.

The three decision routes, one per ring kind:

* Z     -- Smith normal form with unimodular transforms (minimal-absolute-value
           pivoting to limit coefficient growth; unbounded ints throughout);
* Z/m   -- Howell normal form of the transposed system (sound for composite m,
           where plain elimination is not);
* Q     -- fraction-exact Gaussian elimination.

Underdetermined systems always return the particular solution obtained by
back-substitution with free variables pinned to zero, so solutions are
reproducible byte for byte.
"""

from __future__ import annotations

from .rings import CoefficientRing, RingError, _ext_gcd


class DimensionMismatch(ValueError):
    """Incompatible shapes in a matrix operation."""


class RingMatrix:
    """A rows x cols matrix over a CoefficientRing, stored sparsely.

    Only nonzero entries are kept; iteration is row-major ascending, so
    serialization is deterministic.  Instances are treated as immutable.
    """

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: CoefficientRing, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise DimensionMismatch("negative matrix dimensions")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionMismatch(f"entry ({i},{j}) outside {rows}x{cols}")
            v = ring.canon(v)
            if not ring.is_zero(v):
                clean[(i, j)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, ring: CoefficientRing, rows_data) -> "RingMatrix":
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows_data):
            if len(row) != cols:
                raise DimensionMismatch("ragged rows")
            for j, v in enumerate(row):
                entries[(i, j)] = v
        return cls(ring, rows, cols, entries)

    @classmethod
    def zeros(cls, ring: CoefficientRing, rows: int, cols: int) -> "RingMatrix":
        return cls(ring, rows, cols, {})

    @classmethod
    def identity(cls, ring: CoefficientRing, n: int) -> "RingMatrix":
        return cls(ring, n, n, {(i, i): ring.one for i in range(n)})

    def get(self, i: int, j: int):
        return self.entries.get((i, j), self.ring.zero)

    def items(self):
        """Nonzero entries in row-major ascending order."""
        return sorted(self.entries.items())

    def to_dense(self):
        dense = [[self.ring.zero] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            dense[i][j] = v
        return dense

    def transpose(self) -> "RingMatrix":
        return RingMatrix(
            self.ring, self.cols, self.rows,
            {(j, i): v for (i, j), v in self.entries.items()},
        )

    def matmul(self, other: "RingMatrix") -> "RingMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.ring != other.ring:
            raise RingError("matmul over different rings")
        ring = self.ring
        by_row: dict[int, list[tuple[int, object]]] = {}
        for (i, k), v in other.entries.items():
            by_row.setdefault(i, []).append((k, v))
        acc: dict[tuple[int, int], object] = {}
        for (i, j), a in self.entries.items():
            for k, b in by_row.get(j, ()):
                key = (i, k)
                acc[key] = ring.add(acc.get(key, ring.zero), ring.mul(a, b))
        return RingMatrix(ring, self.rows, other.cols, acc)

    def mul_vector(self, vec):
        """Matrix times a column vector (list of ring elements)."""
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length != cols")
        ring = self.ring
        out = [ring.zero] * self.rows
        for (i, j), v in self.entries.items():
            out[i] = ring.add(out[i], ring.mul(v, vec[j]))
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingMatrix)
            and self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, tuple(self.items())))

    def __repr__(self) -> str:
        return f"RingMatrix({self.ring.descriptor()}, {self.rows}x{self.cols}, {len(self.entries)} nonzero)"


# --- Smith normal form over Z ---------------------------------------------


def _min_abs_pivot(a, t, m, n):
    """Position of the minimal-absolute-value nonzero entry of a[t:, t:]."""
    best = None
    best_val = None
    for i in range(t, m):
        row = a[i]
        for j in range(t, n):
            v = row[j]
            if v != 0:
                av = abs(v)
                if best_val is None or av < best_val:
                    best, best_val = (i, j), av
                    if av == 1:
                        return best
    return best


def smith_normal_form(A: RingMatrix) -> tuple[RingMatrix, RingMatrix, RingMatrix]:
    """Diagonalize an integer matrix: U @ A @ V = S.

    U and V are unimodular; S is diagonal with nonnegative entries each
    dividing the next.  Total on integer matrices.
    """
    if A.ring.kind != "Z":
        raise RingError("smith_normal_form requires integer entries")
    m, n = A.rows, A.cols
    a = [[int(v) for v in row] for row in A.to_dense()]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i1, i2):
        a[i1], a[i2] = a[i2], a[i1]
        u[i1], u[i2] = u[i2], u[i1]

    def swap_cols(j1, j2):
        for row in a:
            row[j1], row[j2] = row[j2], row[j1]
        for row in v:
            row[j1], row[j2] = row[j2], row[j1]

    def add_row(dst, src, q):
        # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    r = min(m, n)
    for t in range(r):
        pos = _min_abs_pivot(a, t, m, n)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        while True:
            # clear column t below the pivot, swapping any smaller remainder
            # up into the pivot slot
            changed = True
            while changed:
                changed = False
                for i in range(t + 1, m):
                    if a[i][t] != 0:
                        q = a[i][t] // a[t][t]
                        add_row(i, t, -q)
                        if a[i][t] != 0:
                            swap_rows(t, i)
                            changed = True
            changed = True
            while changed:
                changed = False
                for j in range(t + 1, n):
                    if a[t][j] != 0:
                        q = a[t][j] // a[t][t]
                        add_col(j, t, -q)
                        if a[t][j] != 0:
                            swap_cols(t, j)
                            changed = True
            if any(a[i][t] != 0 for i in range(t + 1, m)):
                continue  # a column swap dirtied the column; clear again
            # pivot must divide the remaining submatrix; pulling a bad row up
            # creates a smaller remainder on the next pass
            p = a[t][t]
            bad = next(
                (i for i in range(t + 1, m)
                 if any(a[i][j] % p != 0 for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)

    ring = A.ring
    U = RingMatrix.from_rows(ring, u)
    V = RingMatrix.from_rows(ring, v)
    S = RingMatrix(ring, m, n, {(i, i): a[i][i] for i in range(r) if a[i][i] != 0})
    return U, S, V


# --- Howell normal form over Z/m -------------------------------------------


def _howell_rows(M: RingMatrix):
    """Howell-reduce [M | I] by row operations; returns (width, rows).

    Each returned row has length M.cols + M.rows; its first block is an
    element of the row module of M and its second block expresses it as a
    combination of the original rows.  Rows are in echelon order by pivot
    column, leading entries divide m, entries above each pivot are reduced,
    and annihilator closure rows are included, so membership in the row
    module is decidable by greedy reduction against the first block.
    """
    ring = M.ring
    if ring.kind != "Zmod":
        raise RingError("Howell form requires a Zmod ring")
    m_mod = ring.modulus
    c, r = M.cols, M.rows
    width = c + r
    dense = M.to_dense()
    rows = []
    for i in range(r):
        rows.append(dense[i] + [ring.one if k == i else 0 for k in range(r)])

    def combine(r1, r2, s, t, p, q):
        # returns (s*r1 + t*r2, p*r1 + q*r2)
        n1 = [(s * x + t * y) % m_mod for x, y in zip(r1, r2)]
        n2 = [(p * x + q * y) % m_mod for x, y in zip(r1, r2)]
        return n1, n2

    done: list[list[int]] = []
    pending = rows
    for col in range(c):
        nxt = []
        pivot = None
        for row in pending:
            if row[col] % m_mod == 0:
                nxt.append(row)
                continue
            if pivot is None:
                pivot = row
                continue
            g, s, t = _ext_gcd(pivot[col], row[col])
            p, q = -(row[col] // g), pivot[col] // g
            pivot, cleared = combine(pivot, row, s, t, p, q)
            if any(x % m_mod for x in cleared):
                nxt.append(cleared)
        if pivot is not None:
            upart = ring.unit_part(pivot[col])
            pivot = [(upart * x) % m_mod for x in pivot]
            d = pivot[col]
            # entries above the pivot become canonical representatives < d
            for row in done:
                if row[col] % d != 0 or row[col] >= d:
                    q = row[col] // d
                    for k in range(width):
                        row[k] = (row[k] - q * pivot[k]) % m_mod
            done.append(pivot)
            ann = ring.annihilator(d)
            extra = [(ann * x) % m_mod for x in pivot]
            if any(x % m_mod for x in extra):
                nxt.append(extra)
        pending = nxt
    # rows never touched by a first-block pivot: zero first block (kernel rows)
    tail = [row for row in pending if any(x for x in row[c:])]
    return width, done, tail


def howell_normal_form(M: RingMatrix) -> tuple[RingMatrix, RingMatrix]:
    """Howell form H of M with transform T, H = T @ M (rows of H span rows of M)."""
    c, r = M.cols, M.rows
    _, done, _tail = _howell_rows(M)
    ring = M.ring
    H = RingMatrix.from_rows(ring, [row[:c] for row in done]) if done else RingMatrix.zeros(ring, 0, c)
    T = RingMatrix.from_rows(ring, [row[c:] for row in done]) if done else RingMatrix.zeros(ring, 0, r)
    return H, T


def _howell_membership(done, c, m_mod, target):
    """Greedy reduction of target (length c) against Howell rows.

    Returns the reduced augmented vector (first block zero) or None when the
    target is not in the row module.  Annihilator closure rows make the
    greedy quotient choice safe.
    """
    width = len(done[0]) if done else c
    vec = list(target) + [0] * (width - c)
    pivots = [(next(j for j in range(c) if row[j] != 0), row) for row in done]
    idx = 0
    for col in range(c):
        while idx < len(pivots) and pivots[idx][0] < col:
            idx += 1
        if vec[col] % m_mod == 0:
            continue
        if idx >= len(pivots) or pivots[idx][0] != col:
            return None
        d = pivots[idx][1][col]
        if vec[col] % d != 0:
            return None
        q = vec[col] // d
        row = pivots[idx][1]
        for k in range(width):
            vec[k] = (vec[k] - q * row[k]) % m_mod
    if any(vec[j] % m_mod for j in range(c)):
        return None
    return vec


# --- solve and kernel -------------------------------------------------------


def solve_linear(A: RingMatrix, b, ring: CoefficientRing | None = None):
    """An exact solution x of A @ x = b, or None when no solution exists.

    b is a list of length A.rows.  The choice among many solutions is
    deterministic (free variables zero through the normal form).
    """
    ring = ring or A.ring
    if ring != A.ring:
        raise RingError("ring mismatch between matrix and request")
    if len(b) != A.rows:
        raise DimensionMismatch(f"rhs length {len(b)} != rows {A.rows}")
    b = [ring.canon(x) for x in b]
    if A.cols == 0:
        return [] if all(ring.is_zero(x) for x in b) else None
    if ring.kind == "Q":
        return _solve_field(A, b)
    if ring.kind == "Z":
        return _solve_integers(A, b)
    return _solve_mod(A, b)


def _solve_field(A: RingMatrix, b):
    ring = A.ring
    m, n = A.rows, A.cols
    aug = [row + [b[i]] for i, row in enumerate(A.to_dense())]
    pivots = []
    prow = 0
    for col in range(n):
        sel = next((i for i in range(prow, m) if aug[i][col] != 0), None)
        if sel is None:
            continue
        aug[prow], aug[sel] = aug[sel], aug[prow]
        inv = 1 / aug[prow][col]
        aug[prow] = [x * inv for x in aug[prow]]
        for i in range(m):
            if i != prow and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[prow])]
        pivots.append(col)
        prow += 1
        if prow == m:
            break
    for i in range(prow, m):
        if aug[i][n] != 0:
            return None
    x = [ring.zero] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][n]
    return x


def _solve_integers(A: RingMatrix, b):
    U, S, V = smith_normal_form(A)
    c = U.mul_vector(b)
    n = A.cols
    y = [0] * n
    for i in range(A.rows):
        d = S.get(i, i) if i < min(A.rows, n) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    return V.mul_vector(y)


def _solve_mod(A: RingMatrix, b):
    ring = A.ring
    m_mod = ring.modulus
    M = A.transpose()  # rows of M are the columns of A
    _, done, _ = _howell_rows(M)
    c = M.cols  # == A.rows
    if not done:
        return [ring.zero] * A.cols if all(x % m_mod == 0 for x in b) else None
    vec = _howell_membership(done, c, m_mod, [x % m_mod for x in b])
    if vec is None:
        return None
    # second block of the residue is -x where b = x @ M
    return [(-vec[c + j]) % m_mod for j in range(A.cols)]


def kernel_basis(A: RingMatrix):
    """Columns generating {x : A @ x = 0} as a module over A.ring.

    Over Z the result is a lattice basis (columns of the SNF transform V at
    zero diagonal positions); over Q a basis; over Z/m a Howell-derived
    generating set.  Ordering is deterministic.
    """
    ring = A.ring
    n = A.cols
    if n == 0:
        return []
    if ring.kind == "Z":
        _, S, V = smith_normal_form(A)
        dense_v = V.to_dense()
        out = []
        for j in range(n):
            d = S.get(j, j) if j < min(A.rows, n) else 0
            if d == 0:
                out.append([dense_v[i][j] for i in range(n)])
        return out
    if ring.kind == "Q":
        return _kernel_field(A)
    return _kernel_mod(A)


def _kernel_field(A: RingMatrix):
    ring = A.ring
    m, n = A.rows, A.cols
    aug = A.to_dense()
    pivots = []
    prow = 0
    for col in range(n):
        sel = next((i for i in range(prow, m) if aug[i][col] != 0), None)
        if sel is None:
            continue
        aug[prow], aug[sel] = aug[sel], aug[prow]
        inv = 1 / aug[prow][col]
        aug[prow] = [x * inv for x in aug[prow]]
        for i in range(m):
            if i != prow and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[prow])]
        pivots.append(col)
        prow += 1
        if prow == m:
            break
    pivot_set = set(pivots)
    out = []
    for free in range(n):
        if free in pivot_set:
            continue
        vec = [ring.zero] * n
        vec[free] = ring.one
        for i, col in enumerate(pivots):
            vec[col] = -aug[i][free]
        out.append(vec)
    return out


def _kernel_mod(A: RingMatrix):
    # rows of [A^T | I] with zero A^T-block are exactly the kernel combos;
    # Howell closure guarantees they generate all of them
    M = A.transpose()
    c = M.cols
    _, _done, tail = _howell_rows(M)
    gens = [[row[c + j] for j in range(A.cols)] for row in tail]
    gens = [g for g in gens if any(x for x in g)]
    gens.sort()
    return gens
