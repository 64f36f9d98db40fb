"""JIT-compiled walkers for the big ground sweeps.

The tuple engine in ``_sweep`` is fast enough for memoized innermost
normalization, but the outermost and seeded-random strategies cannot
share work between terms, so exhaustive sweeps over millions of terms
spend minutes per strategy in the interpreter.  This module compiles
each system's rules into flat integer tables and runs the walk loop
under numba on preorder symbol arrays.

Parity: candidates are enumerated in (position, rule index) order, the
outermost walker always fires the first one, and the random walker draws
from a Mersenne Twister seeded and sampled exactly like CPython's
``random.Random`` (``init_by_array`` seeding, ``getrandbits`` rejection
sampling).  Normal forms and step counts therefore agree with the
reference engine choice for choice; the test suite cross-checks this.

Everything here assumes left-linear rules of arity at most 2, which
holds for the whole catalog and is asserted at table-build time.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .catalog import RewriteSystem
from .terms import App, Term, Var

try:
    import numpy as np
    from numba import njit

    HAVE_TURBO = True
except ImportError:  # pragma: no cover - exercised only without numba
    np = None
    HAVE_TURBO = False

    def njit(*args, **kwargs):
        def deco(f):
            return f

        return deco if not (args and callable(args[0])) else args[0]


from ._sweep import SYM_ID

_ARITY = [0] * 29
for _name, _sid in SYM_ID.items():
    _ARITY[_sid] = 2 if _name in ("^b", "^d", "+", "*") else 1

_MASK32 = 0xFFFFFFFF

MAX_VARS = 4

STATUS_NF = 0
STATUS_STEP_LIMIT = 1
STATUS_TERM_OVERFLOW = 2
STATUS_CAND_OVERFLOW = 3
STATUS_REVISIT = 4

MODE_OUTERMOST = 0
MODE_RANDOM = 1

_HASH_MULT = 0x100000001B3


@njit(cache=True)
def _mt_init(mt, seed_words):
    """Seed exactly like CPython's random_seed for a non-negative int."""
    mt[0] = 19650218
    for i in range(1, 624):
        mt[i] = (1812433253 * (mt[i - 1] ^ (mt[i - 1] >> 30)) + i) & _MASK32
    i = 1
    j = 0
    k = 624 if len(seed_words) < 624 else len(seed_words)
    while k > 0:
        mt[i] = ((mt[i] ^ ((mt[i - 1] ^ (mt[i - 1] >> 30)) * 1664525))
                 + seed_words[j] + j) & _MASK32
        i += 1
        j += 1
        if i >= 624:
            mt[0] = mt[623]
            i = 1
        if j >= len(seed_words):
            j = 0
        k -= 1
    k = 623
    while k > 0:
        mt[i] = ((mt[i] ^ ((mt[i - 1] ^ (mt[i - 1] >> 30)) * 1566083941))
                 - i) & _MASK32
        i += 1
        if i >= 624:
            mt[0] = mt[623]
            i = 1
        k -= 1
    mt[0] = 0x80000000


@njit(cache=True)
def _mt_refill(mt):
    for i in range(624):
        y = (mt[i] & 0x80000000) | (mt[(i + 1) % 624] & 0x7FFFFFFF)
        v = mt[(i + 397) % 624] ^ (y >> 1)
        if y & 1:
            v ^= 2567483615
        mt[i] = v


@njit(cache=True)
def _mt_next(mt, ix):
    i = ix[0]
    if i >= 624:
        _mt_refill(mt)
        i = 0
    y = mt[i]
    ix[0] = i + 1
    y ^= y >> 11
    y ^= (y << 7) & 2636928640
    y ^= (y << 15) & 4022730752
    y ^= y >> 18
    return y & _MASK32


@njit(cache=True)
def _randbelow(mt, ix, n):
    """CPython's _randbelow_with_getrandbits for 0 < n < 2**32."""
    k = 0
    m = n
    while m > 0:
        k += 1
        m >>= 1
    r = _mt_next(mt, ix) >> (32 - k)
    while r >= n:
        r = _mt_next(mt, ix) >> (32 - k)
    return r


@njit(cache=True)
def _fill_sizes(syms, n, arity, sizes, stack):
    """Subtree node counts for a preorder array, via a backward pass."""
    top = 0
    for i in range(n - 1, -1, -1):
        a = arity[syms[i]]
        sz = 1
        for _ in range(a):
            top -= 1
            sz += stack[top]
        sizes[i] = sz
        stack[top] = sz
        top += 1


@njit(cache=True)
def _match(syms, sizes, i, r, pat_syms, pat_start, pat_len,
           var_start, var_size):
    p = pat_start[r]
    end = p + pat_len[r]
    s = i
    while p < end:
        ps = pat_syms[p]
        if ps < 0:
            slot = -1 - ps
            var_start[slot] = s
            var_size[slot] = sizes[s]
            s += sizes[s]
        else:
            if syms[s] != ps:
                return False
            s += 1
        p += 1
    return True


@njit(cache=True)
def _hset_seen(hash_tab, epoch_tab, mask, epoch, h):
    """Insert h; True if it was already present this epoch."""
    i = h & mask
    while epoch_tab[i] == epoch:
        if hash_tab[i] == h:
            return True
        i = (i + 1) & mask
    epoch_tab[i] = epoch
    hash_tab[i] = h
    return False


@njit(cache=True)
def _walk(syms, n, cap, out, sizes, stack, cand_node, cand_rule, cand_cap,
          arity, dt_start, dt_end, dt_rules,
          pat_syms, pat_start, pat_len, rhs_syms, rhs_start, rhs_len,
          mode, mt, ix, max_steps, hash_tab, epoch_tab, epoch, result):
    """Normalize in place; returns (status, steps, final length).

    ``syms``/``out`` are twin buffers of length ``cap``; the walk
    ping-pongs between them and reports which one holds the result.
    Rules are looked up through a (root, child roots) dispatch table so
    a scan only attempts the patterns whose fixed head symbols agree
    with the node.  Term hashes go into an epoch-tagged table so that
    revisiting an earlier term of the same walk is flagged (the caller
    then replays the walk with exact bookkeeping, which also screens
    out the astronomically rare hash collision).
    """
    var_start = np.zeros(MAX_VARS, dtype=np.int64)
    var_size = np.zeros(MAX_VARS, dtype=np.int64)
    mask = len(hash_tab) - 1
    h = np.int64(1469598103934665603)
    for k in range(n):
        h = h * _HASH_MULT + syms[k] + 1
    _hset_seen(hash_tab, epoch_tab, mask, epoch, h)
    cur = syms
    other = out
    which = 0
    steps = 0
    while True:
        _fill_sizes(cur, n, arity, sizes, stack)
        ncand = 0
        node = -1
        rule = -1
        for i in range(n):
            sym = cur[i]
            if sym < 10:
                continue
            c1 = cur[i + 1]
            c2 = cur[i + 1 + sizes[i + 1]] if arity[sym] == 2 else 29
            cell = (sym - 10) * 900 + c1 * 30 + c2
            for g in range(dt_start[cell], dt_end[cell]):
                r = dt_rules[g]
                if _match(cur, sizes, i, r, pat_syms, pat_start, pat_len,
                          var_start, var_size):
                    if mode == MODE_OUTERMOST:
                        node = i
                        rule = r
                        break
                    if ncand >= cand_cap:
                        result[0] = which
                        return STATUS_CAND_OVERFLOW, steps, n
                    cand_node[ncand] = i
                    cand_rule[ncand] = r
                    ncand += 1
            if node >= 0:
                break
        if mode != MODE_OUTERMOST and ncand > 0:
            pick = _randbelow(mt, ix, ncand)
            node = cand_node[pick]
            rule = cand_rule[pick]
        if node < 0:
            result[0] = which
            return STATUS_NF, steps, n
        if steps >= max_steps:
            result[0] = which
            return STATUS_STEP_LIMIT, steps, n
        _match(cur, sizes, node, rule, pat_syms, pat_start, pat_len,
               var_start, var_size)
        built = 0
        p = rhs_start[rule]
        end = p + rhs_len[rule]
        while p < end:
            rs = rhs_syms[p]
            built += var_size[-1 - rs] if rs < 0 else 1
            p += 1
        old = sizes[node]
        new_n = n - old + built
        if new_n > cap:
            result[0] = which
            return STATUS_TERM_OVERFLOW, steps, n
        m = 0
        h = np.int64(1469598103934665603)
        for k in range(node):
            v = cur[k]
            other[m] = v
            h = h * _HASH_MULT + v + 1
            m += 1
        p = rhs_start[rule]
        while p < end:
            rs = rhs_syms[p]
            if rs < 0:
                st = var_start[-1 - rs]
                for k in range(st, st + var_size[-1 - rs]):
                    v = cur[k]
                    other[m] = v
                    h = h * _HASH_MULT + v + 1
                    m += 1
            else:
                other[m] = rs
                h = h * _HASH_MULT + rs + 1
                m += 1
            p += 1
        for k in range(node + old, n):
            v = cur[k]
            other[m] = v
            h = h * _HASH_MULT + v + 1
            m += 1
        tmp = cur
        cur = other
        other = tmp
        which = 1 - which
        n = new_n
        steps += 1
        if _hset_seen(hash_tab, epoch_tab, mask, epoch, h):
            result[0] = which
            return STATUS_REVISIT, steps, n


@njit(cache=True)
def _sweep_chunk(flat, offs, lens, canon_flat, canon_offs, canon_lens,
                 canon_idx, mode_kinds, mt_bases,
                 buf_a, buf_b, sizes, stack, cand_node, cand_rule, cap,
                 arity, dt_start, dt_end, dt_rules,
                 pat_syms, pat_start, pat_len, rhs_syms, rhs_start, rhs_len,
                 max_steps, hash_tab, epoch_tab, epoch, mt, ix, out_status):
    """Run every walk mode over a chunk of terms.

    out_status[ti] is 0 when all modes reach the expected canonical
    normal form, 1 when anything needs attention (wrong normal form,
    step limit, revisit, buffer overflow); the caller replays flagged
    terms with exact bookkeeping.  Returns the advanced hash epoch.
    """
    result = np.zeros(1, dtype=np.int64)
    for ti in range(len(offs)):
        off = offs[ti]
        n = lens[ti]
        flag = 0
        for mi in range(len(mode_kinds)):
            kind = mode_kinds[mi]
            for k in range(n):
                buf_a[k] = flat[off + k]
            if kind >= 0:
                for k in range(624):
                    mt[k] = mt_bases[kind, k]
                ix[0] = 624
                mode = MODE_RANDOM
            else:
                mode = MODE_OUTERMOST
            epoch += 1
            status, steps, final_n = _walk(
                buf_a, n, cap, buf_b, sizes, stack, cand_node, cand_rule,
                cap, arity, dt_start, dt_end, dt_rules,
                pat_syms, pat_start, pat_len, rhs_syms, rhs_start, rhs_len,
                mode, mt, ix, max_steps, hash_tab, epoch_tab, epoch, result)
            if status != STATUS_NF:
                flag = 1
                break
            ci = canon_idx[ti]
            if final_n != canon_lens[ci]:
                flag = 1
                break
            final = buf_a if result[0] == 0 else buf_b
            coff = canon_offs[ci]
            for k in range(final_n):
                if final[k] != canon_flat[coff + k]:
                    flag = 1
                    break
            if flag:
                break
        out_status[ti] = flag
    return epoch


def _flatten(t: Term, slots: Dict[str, int], out: List[int]) -> None:
    if isinstance(t, Var):
        if t.name not in slots:
            slots[t.name] = len(slots)
        out.append(-1 - slots[t.name])
        return
    out.append(SYM_ID[t.sym] if t.args or not t.sym.isdigit()
               else int(t.sym))
    for a in t.args:
        _flatten(a, slots, out)


def _seed_words(seed: int):
    n = abs(int(seed))
    words = []
    while True:
        words.append(n & _MASK32)
        n >>= 32
        if n == 0:
            break
    return np.asarray(words, dtype=np.int64)


def _pat_subtree_len(flat: List[int], i: int) -> int:
    """Node count of the pattern subtree starting at preorder index i."""
    need, j = 1, i
    while need:
        s = flat[j]
        need -= 1
        if s >= 10:
            need += _ARITY[s]
        j += 1
    return j - i


class TurboSystem:
    """Flat rule tables plus reusable buffers for one rewrite system."""

    def __init__(self, system: RewriteSystem, cap: int = 1 << 14):
        if not HAVE_TURBO:
            raise RuntimeError("numba/numpy unavailable")
        arity = list(_ARITY)
        pat_syms: List[int] = []
        rhs_syms: List[int] = []
        pat_start, pat_len, rhs_start, rhs_len = [], [], [], []
        pats: List[List[int]] = []
        for rule in system.rules:
            slots: Dict[str, int] = {}
            flat: List[int] = []
            _flatten(rule.lhs, slots, flat)
            assert len(slots) <= MAX_VARS
            pat_start.append(len(pat_syms))
            pat_len.append(len(flat))
            pat_syms.extend(flat)
            pats.append(flat)
            flat = []
            _flatten(rule.rhs, slots, flat)
            rhs_start.append(len(rhs_syms))
            rhs_len.append(len(flat))
            rhs_syms.extend(flat)
        # Dispatch cells keyed by (root, first child root, second child
        # root or 29 for unary); a variable child spreads the rule over
        # every key of its dimension.  Cell membership is exactly the
        # set of rules whose fixed head symbols can match the node, so
        # scans stay in catalog order while skipping hopeless patterns.
        cells: List[List[int]] = [[] for _ in range(19 * 900)]
        for idx, flat in enumerate(pats):
            root = flat[0]
            keys1 = (flat[1],) if flat[1] >= 0 else range(29)
            if _ARITY[root] == 2:
                j = 1 + _pat_subtree_len(flat, 1)
                keys2 = (flat[j],) if flat[j] >= 0 else range(29)
            else:
                keys2 = (29,)
            for a in keys1:
                for b in keys2:
                    cells[(root - 10) * 900 + a * 30 + b].append(idx)
        dt_start = [0] * len(cells)
        dt_end = [0] * len(cells)
        dt_rules: List[int] = []
        for ci, lst in enumerate(cells):
            dt_start[ci] = len(dt_rules)
            dt_rules.extend(lst)
            dt_end[ci] = len(dt_rules)
        i64 = lambda xs: np.asarray(xs, dtype=np.int64)
        self.arity = i64(arity)
        self.dt_start, self.dt_end = i64(dt_start), i64(dt_end)
        self.dt_rules = i64(dt_rules if dt_rules else [0])
        self.pat_syms = i64(pat_syms)
        self.pat_start, self.pat_len = i64(pat_start), i64(pat_len)
        self.rhs_syms = i64(rhs_syms if rhs_syms else [0])
        self.rhs_start, self.rhs_len = i64(rhs_start), i64(rhs_len)
        self._alloc(cap)
        self._alloc_hashes(1 << 15)
        self.epoch = 0
        self.mt = np.zeros(624, dtype=np.int64)
        self.ix = np.zeros(1, dtype=np.int64)
        self.result = np.zeros(1, dtype=np.int64)
        self._seed_cache: Dict[int, np.ndarray] = {}

    def _alloc(self, cap: int) -> None:
        self.cap = cap
        self.buf_a = np.zeros(cap, dtype=np.int64)
        self.buf_b = np.zeros(cap, dtype=np.int64)
        self.sizes = np.zeros(cap, dtype=np.int64)
        self.stack = np.zeros(cap, dtype=np.int64)
        self.cand_node = np.zeros(cap, dtype=np.int64)
        self.cand_rule = np.zeros(cap, dtype=np.int64)

    def _alloc_hashes(self, size: int) -> None:
        self.hash_tab = np.zeros(size, dtype=np.int64)
        self.epoch_tab = np.zeros(size, dtype=np.int64)

    def walk(self, term, mode: int, seed: int = 0,
             max_steps: int = 10000) -> Tuple[int, int, Optional[bytes]]:
        """Normalize an encoded term; returns (status, steps, nf bytes).

        ``term`` is the array from :func:`encode_array`.  The walk is
        restarted from scratch (same seed state) if a buffer fills up,
        so the result never depends on the initial capacity.
        """
        n = len(term)
        while 2 * (max_steps + 2) > len(self.hash_tab):
            self._alloc_hashes(4 * len(self.hash_tab))
        while True:
            if n > self.cap:
                self._alloc(max(self.cap * 4, 2 * n))
            self.buf_a[:n] = term
            if mode == MODE_RANDOM:
                words = self._seed_cache.get(seed)
                if words is None:
                    words = _seed_words(seed)
                    self._seed_cache[seed] = words
                _mt_init(self.mt, words)
                self.ix[0] = 624
            self.epoch += 1
            status, steps, final_n = _walk(
                self.buf_a, n, self.cap, self.buf_b, self.sizes, self.stack,
                self.cand_node, self.cand_rule, self.cap,
                self.arity, self.dt_start, self.dt_end, self.dt_rules,
                self.pat_syms, self.pat_start, self.pat_len,
                self.rhs_syms, self.rhs_start, self.rhs_len,
                mode, self.mt, self.ix, max_steps,
                self.hash_tab, self.epoch_tab, self.epoch, self.result)
            if status in (STATUS_TERM_OVERFLOW, STATUS_CAND_OVERFLOW):
                self._alloc(self.cap * 4)
                continue
            if status != STATUS_NF:
                return status, steps, None
            final = self.buf_a if self.result[0] == 0 else self.buf_b
            return status, steps, final[:final_n].tobytes()

    def mt_base(self, seed: int):
        """Mersenne state right after seeding, for reuse across walks."""
        base = np.zeros(624, dtype=np.int64)
        _mt_init(base, _seed_words(seed))
        return base

    def sweep_chunk(self, flat, offs, lens, canon_flat, canon_offs,
                    canon_lens, canon_idx, mode_kinds, mt_bases,
                    max_steps: int):
        """Batched walks; returns a 0/1 attention flag per term."""
        while 2 * (max_steps + 2) > len(self.hash_tab):
            self._alloc_hashes(4 * len(self.hash_tab))
        out_status = np.zeros(len(offs), dtype=np.int64)
        self.epoch = _sweep_chunk(
            flat, offs, lens, canon_flat, canon_offs, canon_lens,
            canon_idx, mode_kinds, mt_bases,
            self.buf_a, self.buf_b, self.sizes, self.stack,
            self.cand_node, self.cand_rule, self.cap,
            self.arity, self.dt_start, self.dt_end, self.dt_rules,
            self.pat_syms, self.pat_start, self.pat_len,
            self.rhs_syms, self.rhs_start, self.rhs_len,
            max_steps, self.hash_tab, self.epoch_tab, self.epoch,
            self.mt, self.ix, out_status)
        return out_status


def make_turbo(system: RewriteSystem) -> Optional[TurboSystem]:
    if not HAVE_TURBO:
        return None
    return TurboSystem(system)


def encode_array(fast_term):
    """Preorder int64 array encoding of a ``_sweep`` tuple term."""
    out: List[int] = []
    stack = [fast_term]
    while stack:
        t = stack.pop()
        if type(t) is int:
            out.append(t)
        else:
            out.append(t[0])
            if len(t) == 3:
                stack.append(t[2])
            stack.append(t[1])
    return np.asarray(out, dtype=np.int64)


def decode_bytes(data: bytes):
    """Inverse of ``encode_array(...).tobytes()``: a ``_sweep`` tuple."""
    arr = np.frombuffer(data, dtype=np.int64)

    def rec(i: int):
        v = int(arr[i])
        if v < 10:
            return v, i + 1
        if _ARITY[v] == 1:
            child, j = rec(i + 1)
            return (v, child), j
        left, j = rec(i + 1)
        right, k = rec(j)
        return (v, left, right), k

    t, end = rec(0)
    assert end == len(arr)
    return t
