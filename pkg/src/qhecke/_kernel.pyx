# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled polynomial kernels; mirrors _kernel_py exactly.

Keys stay Python tuples and coefficients stay int/Fraction (exactness is the
contract), so the win comes from cythonized dict traversal and tuple math in
the inner loops, not from changed numerics.
"""

from fractions import Fraction


cpdef object norm_coeff(object c):
    if type(c) is Fraction and (<object>c).denominator == 1:
        return int(c)
    return c


cdef inline tuple tup_add(tuple ea, tuple eb):
    cdef Py_ssize_t i, n = len(ea)
    cdef list out = [0] * n
    for i in range(n):
        out[i] = <object>ea[i] + <object>eb[i]
    return tuple(out)


cpdef dict kadd(dict a, dict b):
    cdef dict out = dict(a)
    cdef object e, c, s
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = norm_coeff(s)
        elif e in out:
            del out[e]
    return out


cpdef dict kneg(dict a):
    cdef dict out = {}
    cdef object e, c
    for e, c in a.items():
        out[e] = -c
    return out


cpdef dict kscale(dict a, object c):
    cdef dict out = {}
    cdef object e, ce
    if not c:
        return out
    c = norm_coeff(c)
    for e, ce in a.items():
        out[e] = norm_coeff(ce * c)
    return out


cpdef dict kmul(dict a, dict b):
    cdef dict out = {}
    cdef object ea, ca, eb, cb, e, s
    if len(a) > len(b):
        a, b = b, a
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tup_add(<tuple>ea, <tuple>eb)
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = norm_coeff(s)
            elif e in out:
                del out[e]
    return out


cpdef dict kpow(dict a, long n, Py_ssize_t nvars):
    cdef dict out = {(0,) * nvars: 1}
    cdef dict base = a
    while n:
        if n & 1:
            out = kmul(out, base)
        n >>= 1
        if n:
            base = kmul(base, base)
    return out


cpdef dict ksubst(dict a, object cols, Py_ssize_t nvars):
    cdef tuple zero = (0,) * nvars
    cdef list lin = []
    cdef dict form, powcache = {}, out = {}, term, p
    cdef object col, c, e, key
    cdef Py_ssize_t i, k
    cdef list ev
    for col in cols:
        form = {}
        for i in range(len(col)):
            c = col[i]
            if c:
                ev = [0] * nvars
                ev[i] = 1
                form[tuple(ev)] = norm_coeff(c)
        lin.append(form)
    for e, c in a.items():
        term = {zero: c}
        for k in range(len(<tuple>e)):
            ek = (<tuple>e)[k]
            if not ek:
                continue
            key = (k, ek)
            p = <dict>powcache.get(key)
            if p is None:
                p = kpow(<dict>lin[k], ek, nvars)
                powcache[key] = p
            term = kmul(term, p)
        out = kadd(out, term)
    return out


def _grlex(e):
    return (sum(e), e)


cpdef object kdivexact(dict a, dict b):
    cdef dict rem, quot
    cdef object ea, eb, ca, cb, cq, e, c, key, s
    cdef list rest
    cdef Py_ssize_t i
    if not a:
        return {}
    eb = max(b, key=_grlex)
    cb = b[eb]
    rest = [(e, c) for e, c in b.items() if e != eb]
    rem = dict(a)
    quot = {}
    while rem:
        ea = max(rem, key=_grlex)
        ok = True
        eq = []
        for i in range(len(<tuple>ea)):
            d = (<tuple>ea)[i] - (<tuple>eb)[i]
            if d < 0:
                ok = False
                break
            eq.append(d)
        if not ok:
            return None
        ca = rem[ea]
        if isinstance(ca, int) and isinstance(cb, int):
            cq = Fraction(<object>ca, <object>cb)
        else:
            cq = ca / cb
        cq = norm_coeff(cq)
        teq = tuple(eq)
        quot[teq] = cq
        del rem[ea]
        for e, c in rest:
            key = tup_add(<tuple>e, teq)
            s = rem.get(key, 0) - cq * c
            if s:
                rem[key] = norm_coeff(s)
            elif key in rem:
                del rem[key]
    return quot
