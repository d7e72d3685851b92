"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Backend selection via the environment variable THETA_CUBE_BACKEND:

    auto   (default) use numba when importable, numpy otherwise
    numba  require numba, fail loudly if missing
    numpy  force the pure-numpy implementations

Both paths compute identical integer results; the benchmark in
benchmarks/bench_kernels.py compares them on representative workloads.
All kernels take C-contiguous int64 arrays.
"""
from __future__ import annotations

import os

import numpy as np

_CHOICE = os.environ.get("THETA_CUBE_BACKEND", "auto").strip().lower()
if _CHOICE not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"THETA_CUBE_BACKEND must be auto, numba or numpy, got {_CHOICE!r}")

_numba = None
if _CHOICE in ("auto", "numba"):
    try:
        import numba as _numba
    except ImportError:
        if _CHOICE == "numba":
            raise
        _numba = None


def backend_name() -> str:
    """Name of the active kernel backend, 'numba' or 'numpy'."""
    return "numpy" if _numba is None else "numba"


def set_thread_cap(n: int) -> None:
    """Cap the numba threading layer; no-op on the numpy backend."""
    if _numba is not None and n >= 1:
        _numba.set_num_threads(min(n, _numba.config.NUMBA_NUM_THREADS))


# Result codes for cubic_defect.
CUBIC_OK = 0
CUBIC_NOT_NORMALIZED = 1
CUBIC_NOT_SYMMETRIC_XY = 2
CUBIC_NOT_SYMMETRIC_YZ = 3
CUBIC_PAIR_COCYCLE_1 = 4
CUBIC_PAIR_COCYCLE_2 = 5


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def rank_mod_p_numpy(a: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over the prime field F_p."""
    A = np.array(a, dtype=np.int64) % p
    m, n = A.shape
    rank = 0
    for col in range(n):
        pivots = np.nonzero(A[rank:, col])[0]
        if pivots.size == 0:
            continue
        piv = rank + int(pivots[0])
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        A[rank] = A[rank] * pow(int(A[rank, col]), -1, p) % p
        below = rank + 1 + np.nonzero(A[rank + 1:, col])[0]
        if below.size:
            A[below] = (A[below] - np.outer(A[below, col], A[rank])) % p
        rank += 1
        if rank == m:
            break
    return rank


def cocycle_defect_numpy(f: np.ndarray, add: np.ndarray, modulus: int) -> tuple[int, int, int]:
    """First triple violating f(x,y) + f(x+y,z) = f(y,z) + f(x,y+z), or (-1,-1,-1)."""
    lhs = f[:, :, None] + f[add, :]
    rhs = f[None, :, :] + f[:, add]
    bad = (lhs - rhs) % modulus
    flat = np.nonzero(bad.reshape(-1))[0]
    if flat.size == 0:
        return (-1, -1, -1)
    n = f.shape[0]
    i, rem = divmod(int(flat[0]), n * n)
    j, k = divmod(rem, n)
    return (i, j, k)


def theta_table_numpy(f: np.ndarray, add: np.ndarray, modulus: int) -> np.ndarray:
    """t(x,y,z) = f(x+y,z) - f(x,z) - f(y,z) mod modulus."""
    return (f[add, :] - f[:, None, :] - f[None, :, :]) % modulus


def theta_table_alt_numpy(f: np.ndarray, add: np.ndarray, modulus: int) -> np.ndarray:
    """t(x,y,z) = f(x,y+z) - f(x,y) - f(x,z), the other difference formula."""
    return (f[:, add] - f[:, :, None] - f[:, None, :]) % modulus


def _first_nonzero(mask: np.ndarray) -> tuple[int, ...]:
    flat = np.nonzero(mask.reshape(-1))[0]
    idx = int(flat[0])
    out = []
    for dim in reversed(mask.shape):
        idx, r = divmod(idx, dim)
        out.append(r)
    return tuple(reversed(out))


def cubic_defect_numpy(t: np.ndarray, add: np.ndarray, modulus: int) -> tuple[int, int, int, int, int]:
    """Check the cubic-structure identities on a full table t of shape (n,n,n).

    Returns (code, w0, w1, w2, w3) where code is one of the CUBIC_* constants
    and the w's are the first witness indices in scan order (unused slots -1).
    """
    n = t.shape[0]
    zero_slices = (t[0, :, :] % modulus, t[:, 0, :] % modulus, t[:, :, 0] % modulus)
    for axis, sl in enumerate(zero_slices):
        if np.any(sl):
            j, k = _first_nonzero(sl != 0)
            w = [j, k]
            w.insert(axis, 0)
            return (CUBIC_NOT_NORMALIZED, w[0], w[1], w[2], -1)
    d = (t - t.transpose(1, 0, 2)) % modulus
    if np.any(d):
        i, j, k = _first_nonzero(d != 0)
        return (CUBIC_NOT_SYMMETRIC_XY, i, j, k, -1)
    d = (t - t.transpose(0, 2, 1)) % modulus
    if np.any(d):
        i, j, k = _first_nonzero(d != 0)
        return (CUBIC_NOT_SYMMETRIC_YZ, i, j, k, -1)
    # t(x+y,z,w) + t(x,y,w) = t(y,z,w) + t(x,y+z,w)
    d = (t[add, :, :] + t[:, :, None, :] - t[None, :, :, :] - t[:, add, :]) % modulus
    if np.any(d):
        x, y, z, w = _first_nonzero(d != 0)
        return (CUBIC_PAIR_COCYCLE_1, x, y, z, w)
    # t(x,y+z,w) + t(x,y,z) = t(x,z,w) + t(x,y,z+w)
    d = (t[:, add, :] + t[:, :, :, None] - t[:, None, :, :] - t[:, :, add]) % modulus
    if np.any(d):
        x, y, z, w = _first_nonzero(d != 0)
        return (CUBIC_PAIR_COCYCLE_2, x, y, z, w)
    return (CUBIC_OK, -1, -1, -1, -1)


def theta_cubic_batch_numpy(fs: np.ndarray, add: np.ndarray, modulus: int) -> np.ndarray:
    """For a batch of normalized 2-cocycle tables fs (B,n,n), check that
    t = theta_of_cocycle(f) agrees with both difference formulas and passes
    every cubic identity. Returns a bool array of shape (B,).

    Chunked so peak memory stays modest at n=9, B~20000.
    """
    B, n, _ = fs.shape
    ok = np.ones(B, dtype=bool)
    chunk = max(1, 2 ** 22 // max(1, n ** 4))
    for lo in range(0, B, chunk):
        F = fs[lo:lo + chunk]
        t = (F[:, add, :] - F[:, :, None, :] - F[:, None, :, :]) % modulus
        t2 = (F[:, :, add] - F[:, :, :, None] - F[:, :, None, :]) % modulus
        good = np.all((t - t2) % modulus == 0, axis=(1, 2, 3))
        good &= ~np.any(t[:, 0, :, :], axis=(1, 2))
        good &= ~np.any(t[:, :, 0, :], axis=(1, 2))
        good &= ~np.any(t[:, :, :, 0], axis=(1, 2))
        good &= np.all((t - t.transpose(0, 2, 1, 3)) % modulus == 0, axis=(1, 2, 3))
        good &= np.all((t - t.transpose(0, 1, 3, 2)) % modulus == 0, axis=(1, 2, 3))
        d1 = (t[:, add, :, :] + t[:, :, :, None, :] - t[:, None, :, :, :] - t[:, :, add, :]) % modulus
        good &= ~np.any(d1.reshape(len(F), -1), axis=1)
        del d1
        d2 = (t[:, :, add, :] + t[:, :, :, :, None] - t[:, :, None, :, :] - t[:, :, :, add]) % modulus
        good &= ~np.any(d2.reshape(len(F), -1), axis=1)
        del d2
        ok[lo:lo + len(F)] = good
    return ok


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if _numba is not None:
    _njit = _numba.njit(cache=True)

    @_njit
    def _rank_mod_p_nb(a, p):  # pragma: no cover - exercised via dispatch
        A = a % p
        m, n = A.shape
        rank = 0
        for col in range(n):
            piv = -1
            for row in range(rank, m):
                if A[row, col] != 0:
                    piv = row
                    break
            if piv < 0:
                continue
            if piv != rank:
                for c in range(n):
                    tmp = A[rank, c]
                    A[rank, c] = A[piv, c]
                    A[piv, c] = tmp
            # modular inverse by exponentiation, p is prime
            inv = 1
            base = A[rank, col] % p
            e = p - 2
            while e > 0:
                if e & 1:
                    inv = inv * base % p
                base = base * base % p
                e >>= 1
            for c in range(n):
                A[rank, c] = A[rank, c] * inv % p
            for row in range(rank + 1, m):
                fac = A[row, col]
                if fac != 0:
                    for c in range(n):
                        A[row, c] = (A[row, c] - fac * A[rank, c]) % p
            rank += 1
            if rank == m:
                break
        return rank

    @_njit
    def _cocycle_defect_nb(f, add, modulus):  # pragma: no cover
        n = f.shape[0]
        for i in range(n):
            for j in range(n):
                fij = f[i, j]
                ij = add[i, j]
                for k in range(n):
                    if (fij + f[ij, k] - f[j, k] - f[i, add[j, k]]) % modulus != 0:
                        return (i, j, k)
        return (-1, -1, -1)

    @_njit
    def _theta_table_nb(f, add, modulus):  # pragma: no cover
        n = f.shape[0]
        t = np.empty((n, n, n), dtype=np.int64)
        for x in range(n):
            for y in range(n):
                xy = add[x, y]
                for z in range(n):
                    t[x, y, z] = (f[xy, z] - f[x, z] - f[y, z]) % modulus
        return t

    @_njit
    def _theta_table_alt_nb(f, add, modulus):  # pragma: no cover
        n = f.shape[0]
        t = np.empty((n, n, n), dtype=np.int64)
        for x in range(n):
            for y in range(n):
                fxy = f[x, y]
                for z in range(n):
                    t[x, y, z] = (f[x, add[y, z]] - fxy - f[x, z]) % modulus
        return t

    @_njit
    def _cubic_defect_nb(t, add, modulus):  # pragma: no cover
        n = t.shape[0]
        for j in range(n):
            for k in range(n):
                if t[0, j, k] % modulus != 0:
                    return (CUBIC_NOT_NORMALIZED, 0, j, k, -1)
        for i in range(n):
            for k in range(n):
                if t[i, 0, k] % modulus != 0:
                    return (CUBIC_NOT_NORMALIZED, i, 0, k, -1)
        for i in range(n):
            for j in range(n):
                if t[i, j, 0] % modulus != 0:
                    return (CUBIC_NOT_NORMALIZED, i, j, 0, -1)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if (t[i, j, k] - t[j, i, k]) % modulus != 0:
                        return (CUBIC_NOT_SYMMETRIC_XY, i, j, k, -1)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if (t[i, j, k] - t[i, k, j]) % modulus != 0:
                        return (CUBIC_NOT_SYMMETRIC_YZ, i, j, k, -1)
        for x in range(n):
            for y in range(n):
                xy = add[x, y]
                for z in range(n):
                    yz = add[y, z]
                    for w in range(n):
                        if (t[xy, z, w] + t[x, y, w] - t[y, z, w] - t[x, yz, w]) % modulus != 0:
                            return (CUBIC_PAIR_COCYCLE_1, x, y, z, w)
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    yz = add[y, z]
                    for w in range(n):
                        if (t[x, yz, w] + t[x, y, z] - t[x, z, w] - t[x, y, add[z, w]]) % modulus != 0:
                            return (CUBIC_PAIR_COCYCLE_2, x, y, z, w)
        return (CUBIC_OK, -1, -1, -1, -1)

    @_njit
    def _theta_cubic_batch_nb(fs, add, modulus):  # pragma: no cover
        B = fs.shape[0]
        n = fs.shape[1]
        out = np.ones(B, dtype=np.bool_)
        t = np.empty((n, n, n), dtype=np.int64)
        for b in range(B):
            f = fs[b]
            good = True
            for x in range(n):
                for y in range(n):
                    xy = add[x, y]
                    for z in range(n):
                        v = (f[xy, z] - f[x, z] - f[y, z]) % modulus
                        if (f[x, add[y, z]] - f[x, y] - f[x, z]) % modulus != v:
                            good = False
                        t[x, y, z] = v
            if good:
                code, w0, w1, w2, w3 = _cubic_defect_nb(t, add, modulus)
                good = code == CUBIC_OK
            out[b] = good
        return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _as_i64(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over F_p (p prime)."""
    A = _as_i64(a)
    if A.size == 0:
        return 0
    if _numba is not None:
        return int(_rank_mod_p_nb(A.copy(), p))
    return rank_mod_p_numpy(A, p)


def cocycle_defect(f: np.ndarray, add: np.ndarray, modulus: int) -> tuple[int, int, int]:
    """First triple (x,y,z) violating the 2-cocycle identity, or (-1,-1,-1)."""
    f = _as_i64(f)
    add = _as_i64(add)
    if _numba is not None:
        i, j, k = _cocycle_defect_nb(f, add, modulus)
        return (int(i), int(j), int(k))
    return cocycle_defect_numpy(f, add, modulus)


def theta_table(f: np.ndarray, add: np.ndarray, modulus: int) -> np.ndarray:
    """Cubic table t(x,y,z) = f(x+y,z) - f(x,z) - f(y,z) mod modulus."""
    f = _as_i64(f)
    add = _as_i64(add)
    if _numba is not None:
        return _theta_table_nb(f, add, modulus)
    return theta_table_numpy(f, add, modulus)


def theta_table_alt(f: np.ndarray, add: np.ndarray, modulus: int) -> np.ndarray:
    """Cubic table via the other slot: f(x,y+z) - f(x,y) - f(x,z) mod modulus."""
    f = _as_i64(f)
    add = _as_i64(add)
    if _numba is not None:
        return _theta_table_alt_nb(f, add, modulus)
    return theta_table_alt_numpy(f, add, modulus)


def cubic_defect(t: np.ndarray, add: np.ndarray, modulus: int) -> tuple[int, int, int, int, int]:
    """First failing cubic identity on a table t, as (code, witnesses...)."""
    t = _as_i64(t)
    add = _as_i64(add)
    if _numba is not None:
        code, w0, w1, w2, w3 = _cubic_defect_nb(t, add, modulus)
        return (int(code), int(w0), int(w1), int(w2), int(w3))
    return cubic_defect_numpy(t, add, modulus)


def theta_cubic_batch(fs: np.ndarray, add: np.ndarray, modulus: int) -> np.ndarray:
    """Batched check that each cocycle's theta table is a valid cubic structure."""
    fs = _as_i64(fs)
    add = _as_i64(add)
    if _numba is not None:
        return np.asarray(_theta_cubic_batch_nb(fs, add, modulus))
    return theta_cubic_batch_numpy(fs, add, modulus)
