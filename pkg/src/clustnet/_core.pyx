# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled event engine.

Mirrors ``_pyengine.py`` operation for operation; adjacency is a packed
bitset so common-neighbour scans cost O(n/64 + |N_ij|).
"""
from libc.math cimport log, pow
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free

cdef extern from *:
    """
    static inline int cn_ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    """
    int cn_ctz64(unsigned long long x) noexcept nogil

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0
cdef int MODE_TRIADIC = 0
cdef int MODE_CORRECTED = 1
cdef int64_t RESUM_EVERY = 1000000


from clustnet.errors import AbsorbedError


cdef inline uint64_t _sm_next(uint64_t* state) noexcept nogil:
    state[0] = state[0] + GOLDEN
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _sm_random(uint64_t* state) noexcept nogil:
    return (<double>(_sm_next(state) >> 11) + 0.5) * TWO_M53


cdef class SplitMix64:
    cdef uint64_t _state

    def __init__(self, seed=0):
        self._state = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)

    @property
    def state(self):
        return self._state

    def next_u64(self):
        return _sm_next(&self._state)

    def random(self):
        return _sm_random(&self._state)


cdef class _Tree:
    """Partial-sum tree storage shared by SumTree and the engine."""
    cdef double* t
    cdef int64_t cap
    cdef int64_t size

    cdef int _alloc(self, int64_t size) except -1:
        if size < 1:
            raise ValueError("SumTree needs at least one slot")
        cdef int64_t cap = 1
        while cap < size:
            cap <<= 1
        self.size = size
        self.cap = cap
        self.t = <double*>calloc(2 * cap, sizeof(double))
        if self.t == NULL:
            raise MemoryError()
        return 0

    def __dealloc__(self):
        if self.t != NULL:
            free(self.t)

    cdef inline void _set(self, int64_t p, double v) noexcept nogil:
        cdef double* t = self.t
        cdef int64_t k = p + self.cap
        t[k] = v
        k >>= 1
        while k:
            t[k] = t[2 * k] + t[2 * k + 1]
            k >>= 1

    cdef void resum_c(self) noexcept nogil:
        cdef int64_t k
        for k in range(self.cap - 1, 0, -1):
            self.t[k] = self.t[2 * k] + self.t[2 * k + 1]

    cdef inline int64_t _find(self, double target) noexcept nogil:
        cdef double* t = self.t
        cdef int64_t cap = self.cap
        cdef int64_t k = 1
        cdef double left
        while k < cap:
            left = t[2 * k]
            if target < left:
                k = 2 * k
            else:
                target -= left
                k = 2 * k + 1
        return k - cap

    cdef int64_t sample_c(self, uint64_t* rng) noexcept nogil:
        cdef int64_t p
        while True:
            p = self._find(_sm_random(rng) * self.t[1])
            if p < self.size and self.t[p + self.cap] > 0.0:
                return p
            self.resum_c()


cdef class SumTree(_Tree):
    """Binary partial-sum tree over ``size`` non-negative slots."""

    def __init__(self, size):
        self._alloc(size)

    @property
    def total(self):
        return self.t[1]

    def get(self, int64_t p):
        return self.t[p + self.cap]

    def set(self, int64_t p, double value):
        self._set(p, value)

    def resum(self):
        self.resum_c()

    def find(self, double target):
        return self._find(target)

    def sample(self, SplitMix64 rng):
        return self.sample_c(&rng._state)


cdef class TriadicEngine:
    """Gillespie engine for the triadic-closure graph chain."""
    cdef readonly int n
    cdef readonly int mode
    cdef readonly double alpha, beta, lam, mu, lambda0, mu0
    cdef readonly bint per_vertex
    cdef bint need_a, need_b
    cdef int W
    cdef uint64_t* bits
    cdef int64_t* deg
    cdef double* lv
    cdef double* mv
    cdef int* buf
    cdef double* pw_a
    cdef double* pw_b
    cdef double* inv_c2
    cdef int64_t* dirty
    cdef unsigned char* mark
    cdef int64_t n_dirty
    cdef _Tree tree
    cdef uint64_t rng
    cdef readonly double sim_time
    cdef readonly int64_t jumps
    cdef readonly int64_t edge_count

    def __cinit__(self):
        self.bits = NULL
        self.deg = NULL
        self.lv = NULL
        self.mv = NULL
        self.buf = NULL
        self.pw_a = NULL
        self.pw_b = NULL
        self.inv_c2 = NULL
        self.dirty = NULL
        self.mark = NULL

    def __init__(self, n, mode, alpha, beta, lam, mu, lambda0, mu0,
                 lambda_v=None, mu_v=None, seed=0):
        if n < 2:
            raise ValueError("engine needs at least two vertices")
        if mode == MODE_CORRECTED and n < 3:
            raise ValueError("corrected rates need n >= 3")
        self.n = n
        self.mode = mode
        self.alpha = alpha
        self.beta = beta
        self.lam = lam
        self.mu = mu
        self.lambda0 = lambda0
        self.mu0 = mu0
        self.per_vertex = lambda_v is not None and len(lambda_v) > 0
        if mode == MODE_CORRECTED:
            self.need_a = self.lam > 0
            self.need_b = self.lam > 0
        else:
            self.need_a = self.lam > 0 or self.mu > 0
            self.need_b = ((self.lam > 0 and self.alpha != 0.0)
                           or (self.mu > 0 and self.beta != 0.0))
        self.W = (n + 63) // 64
        self.bits = <uint64_t*>calloc(<size_t>n * self.W, sizeof(uint64_t))
        self.deg = <int64_t*>calloc(n, sizeof(int64_t))
        self.lv = <double*>calloc(n, sizeof(double))
        self.mv = <double*>calloc(n, sizeof(double))
        self.buf = <int*>calloc(n, sizeof(int))
        self.pw_a = <double*>calloc(n + 1, sizeof(double))
        self.pw_b = <double*>calloc(n + 1, sizeof(double))
        self.inv_c2 = <double*>calloc(n + 1, sizeof(double))
        if (self.bits == NULL or self.deg == NULL or self.lv == NULL
                or self.mv == NULL or self.buf == NULL or self.pw_a == NULL
                or self.pw_b == NULL or self.inv_c2 == NULL):
            raise MemoryError()
        cdef int v
        cdef int64_t d
        # per-degree terms; only degrees >= 2 are ever looked up
        for d in range(2, n + 1):
            self.pw_a[d] = pow(<double>d, -self.alpha)
            self.pw_b[d] = pow(<double>d, -self.beta)
            self.inv_c2[d] = 2.0 / <double>(d * (d - 1))
        if self.per_vertex:
            for v in range(n):
                self.lv[v] = lambda_v[v]
                self.mv[v] = mu_v[v]
        self.rng = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
        self.tree = _Tree.__new__(_Tree)
        self.tree._alloc(<int64_t>n * n)
        self.dirty = <int64_t*>malloc(<size_t>(self.tree.cap) * sizeof(int64_t))
        self.mark = <unsigned char*>calloc(<size_t>(2 * self.tree.cap), 1)
        if self.dirty == NULL or self.mark == NULL:
            raise MemoryError()
        self.n_dirty = 0
        self.sim_time = 0.0
        self.jumps = 0
        self.edge_count = 0
        self.rebuild()

    def __dealloc__(self):
        free(self.bits)
        free(self.deg)
        free(self.lv)
        free(self.mv)
        free(self.buf)
        free(self.pw_a)
        free(self.pw_b)
        free(self.inv_c2)
        free(self.dirty)
        free(self.mark)

    # adjacency -------------------------------------------------------------
    cdef inline bint _has(self, int i, int j) noexcept nogil:
        return (self.bits[<int64_t>i * self.W + (j >> 6)] >> (j & 63)) & 1

    cdef inline void _flip(self, int i, int j) noexcept nogil:
        self.bits[<int64_t>i * self.W + (j >> 6)] ^= (<uint64_t>1) << (j & 63)
        self.bits[<int64_t>j * self.W + (i >> 6)] ^= (<uint64_t>1) << (i & 63)

    cdef bint _toggle_c(self, int i, int j) noexcept nogil:
        cdef bint was = self._has(i, j)
        self._flip(i, j)
        if was:
            self.deg[i] -= 1
            self.deg[j] -= 1
            self.edge_count -= 1
        else:
            self.deg[i] += 1
            self.deg[j] += 1
            self.edge_count += 1
        return not was

    cdef int _neighbors(self, int c, int exclude, int* out) noexcept nogil:
        cdef int w, b, k = 0
        cdef uint64_t x
        cdef uint64_t* row = self.bits + <int64_t>c * self.W
        for w in range(self.W):
            x = row[w]
            while x:
                b = cn_ctz64(x)
                if w * 64 + b != exclude:
                    out[k] = w * 64 + b
                    k += 1
                x &= x - 1
        return k

    # rates -------------------------------------------------------------------
    cdef double _nu_pow(self, int i, int j, double* table) noexcept nogil:
        cdef double nu = 0.0
        cdef int w, b
        cdef uint64_t x
        cdef uint64_t* ri = self.bits + <int64_t>i * self.W
        cdef uint64_t* rj = self.bits + <int64_t>j * self.W
        for w in range(self.W):
            x = ri[w] & rj[w]
            while x:
                b = cn_ctz64(x)
                nu += table[self.deg[w * 64 + b]]
                x &= x - 1
        return nu

    cdef double _nu_star(self, int i, int j) noexcept nogil:
        cdef double nu = 0.0
        cdef int w, b
        cdef uint64_t x
        cdef uint64_t* ri = self.bits + <int64_t>i * self.W
        cdef uint64_t* rj = self.bits + <int64_t>j * self.W
        for w in range(self.W):
            x = ri[w] & rj[w]
            while x:
                b = cn_ctz64(x)
                nu += self.inv_c2[self.deg[w * 64 + b]]
                x &= x - 1
        return nu

    cdef double _rate(self, int i, int j) noexcept nogil:
        cdef bint present = self._has(i, j)
        cdef double base, nu, r, kappa
        cdef int64_t di, dj
        cdef int n = self.n
        if self.mode == MODE_CORRECTED:
            if present:
                return self.mu0
            nu = self._nu_star(i, j)
            di = self.deg[i]
            dj = self.deg[j]
            kappa = (<double>((di == 0) + (dj == 0)) / <double>(n - 1)
                     + <double>((di == 1) + (dj == 1)) / <double>(n - 2))
            return self.lambda0 + self.lam * nu + self.lam * kappa
        if present:
            if self.per_vertex:
                base = self.mv[i] * self.mv[j]
            else:
                base = self.mu0
            if self.mu > 0:
                nu = self._nu_pow(i, j, self.pw_b)
                r = base - self.mu * nu
                return r if r > 0.0 else 0.0
            return base
        if self.per_vertex:
            base = self.lv[i] * self.lv[j]
        else:
            base = self.lambda0
        if self.lam > 0:
            nu = self._nu_pow(i, j, self.pw_a)
            return base + self.lam * nu
        return base

    cdef inline void _refresh(self, int i, int j) noexcept nogil:
        # leaf write only; ancestors are fixed up once per event by _flush
        cdef int t
        if i > j:
            t = i
            i = j
            j = t
        cdef int64_t k = <int64_t>i * self.n + j + self.tree.cap
        cdef double r = self._rate(i, j)
        if self.tree.t[k] == r:
            return
        self.tree.t[k] = r
        if not self.mark[k]:
            self.mark[k] = 1
            self.dirty[self.n_dirty] = k
            self.n_dirty += 1

    cdef void _flush(self) noexcept nogil:
        cdef int64_t cnt = self.n_dirty
        cdef int64_t idx, m, k, p
        cdef int64_t* lst = self.dirty
        cdef double* t = self.tree.t
        while cnt > 0 and lst[0] > 1:
            m = 0
            for idx in range(cnt):
                k = lst[idx]
                self.mark[k] = 0
                p = k >> 1
                if not self.mark[p]:
                    self.mark[p] = 1
                    lst[m] = p
                    m += 1
            for idx in range(m):
                p = lst[idx]
                t[p] = t[2 * p] + t[2 * p + 1]
            cnt = m
        for idx in range(cnt):
            self.mark[lst[idx]] = 0
        self.n_dirty = 0

    def rebuild(self):
        cdef int i, j
        cdef int n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                self.tree.t[self.tree.cap + <int64_t>i * n + j] = self._rate(i, j)
        self.tree.resum_c()

    def resum(self):
        self.tree.resum_c()

    cdef void _update_after_toggle(self, int i, int j) noexcept nogil:
        cdef int k, a, b, c, other, side, cnt, limit
        cdef int* buf = self.buf
        self._refresh(i, j)
        if self.need_a:
            cnt = self._neighbors(j, i, buf)
            for k in range(cnt):
                self._refresh(i, buf[k])
            cnt = self._neighbors(i, j, buf)
            for k in range(cnt):
                self._refresh(j, buf[k])
        if self.need_b:
            for side in range(2):
                if side == 0:
                    c = i
                    other = j
                else:
                    c = j
                    other = i
                cnt = self._neighbors(c, other, buf)
                for a in range(cnt):
                    for b in range(a + 1, cnt):
                        self._refresh(buf[a], buf[b])
        if self.mode == MODE_CORRECTED and self.lam > 0:
            limit = 2 if self._has(i, j) else 1
            for side in range(2):
                c = i if side == 0 else j
                if self.deg[c] <= limit:
                    for k in range(self.n):
                        if k != c:
                            self._refresh(c, k)

    # public API ----------------------------------------------------------------
    @property
    def total_rate(self):
        return self.tree.t[1]

    def pair_rate(self, int i, int j):
        if i > j:
            i, j = j, i
        return self.tree.t[self.tree.cap + <int64_t>i * self.n + j]

    def toggle(self, int i, int j):
        if i == j or i < 0 or j < 0 or i >= self.n or j >= self.n:
            raise ValueError(f"invalid pair ({i}, {j})")
        cdef bint now = self._toggle_c(i, j)
        self._update_after_toggle(i, j)
        self._flush()
        return now

    cdef int _step_c(self, double* dt_out, int64_t* p_out) noexcept nogil:
        cdef double total = self.tree.t[1]
        if not total > 0.0:
            return -1
        cdef double dt = -log(_sm_random(&self.rng)) / total
        cdef int64_t p = self.tree.sample_c(&self.rng)
        cdef int i = <int>(p // self.n)
        cdef int j = <int>(p % self.n)
        self._toggle_c(i, j)
        self._update_after_toggle(i, j)
        self._flush()
        self.sim_time += dt
        self.jumps += 1
        if self.jumps % RESUM_EVERY == 0:
            self.tree.resum_c()
        dt_out[0] = dt
        p_out[0] = p
        return 0

    def step(self):
        cdef double dt
        cdef int64_t p
        if self._step_c(&dt, &p) < 0:
            raise AbsorbedError("total event rate is zero")
        return dt, <int>(p // self.n), <int>(p % self.n)

    def advance(self, int64_t k):
        cdef double dt
        cdef int64_t p, s
        cdef int rc = 0
        with nogil:
            for s in range(k):
                rc = self._step_c(&dt, &p)
                if rc < 0:
                    break
        if rc < 0:
            raise AbsorbedError("total event rate is zero")

    def has_edge(self, int i, int j):
        return bool(self._has(i, j))

    def degree(self, int v):
        return self.deg[v]

    def degrees(self):
        return [self.deg[v] for v in range(self.n)]

    def edges(self):
        cdef int i, cnt, k
        out = []
        for i in range(self.n):
            cnt = self._neighbors(i, -1, self.buf)
            for k in range(cnt):
                if self.buf[k] > i:
                    out.append((i, self.buf[k]))
        return out

    def edge_rate_sum(self):
        cdef double s = 0.0
        cdef int i, cnt, k
        for i in range(self.n):
            cnt = self._neighbors(i, -1, self.buf)
            for k in range(cnt):
                if self.buf[k] > i:
                    s += self.tree.t[self.tree.cap + <int64_t>i * self.n + self.buf[k]]
        return s

    def rng_state(self):
        return self.rng
