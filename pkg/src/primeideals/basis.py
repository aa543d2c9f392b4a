"""Integral bases of the maximal order, and the true field discriminant.

A p-integral basis is assembled from local data: for every prime P over p,
the products of the type's phi-polynomials form a basis of the local maximal
order after division by p-power floors of their valuations.  Each local
contribution is made integral at the sibling primes with a separator, the
collection is triangularized p-locally, and the result must pass a two-part
certificate:

1. every basis element has v_P >= 0 at every prime P over p, and
2. the determinant of the triangular basis has p-valuation -local_index.

Part 1 places the spanned lattice inside the maximal order; part 2 forces
equality, because the local index computed from the Newton polygons is
exact.  The basis routine itself rests on a conjectural termination bound,
so a certificate failure is reported as such instead of being repaired.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import residues, zx
from .ff import DomainError
from .ideals import factor_integer


class ConjectureError(RuntimeError):
    """An integral-basis output failed its certificate."""


# ---------------------------------------------------------------------------
# local (one-prime) data


def _okutsu_numerators(P):
    """Integer polynomials g_0, ..., g_{ef-1} with deg g_m = m: products of
    the type's phi-polynomials via the mixed-radix expansion of m in their
    degrees.  Dividing g_m by p^floor(v_P(g_m)/e) yields a basis of the
    local maximal order."""
    phis = [[0, 1]]
    for lvl in P.type.levels:
        if zx.degree(lvl.phi) > zx.degree(phis[-1]):
            phis.append(list(lvl.phi))
        else:
            # a refinement step: same degree, strictly better approximation
            phis[-1] = list(lvl.phi)
    degs = [zx.degree(q) for q in phis]
    out = []
    for m in range(P.e * P.f):
        g = [1]
        rem = m
        for i in range(len(phis) - 1, -1, -1):
            c, rem = divmod(rem, degs[i])
            if c:
                g = zx.mul(g, zx.pow_int(phis[i], c))
        out.append(g)
    return out


def _local_candidates(K, p, idx, margin):
    """Candidate generators of the p-maximal order: the power basis plus,
    for every prime P over p, the Okutsu quotients multiplied by the
    product of the sibling frame approximations.

    The multiplier product u carries two jobs: its valuation at the
    siblings makes the quotient integral there (after enough frame
    refinement), and its valuation at P itself contributes the
    cross-factor part of the index, so it must stay in the denominator
    floor rather than being normalized away."""
    primes = K.factor_prime(p)
    cands = [K.element([0] * j + [1]) for j in range(K.degree)]
    for P in primes:
        gs = _okutsu_numerators(P)
        vgs = [residues.p_valuation(K.element(g), P) for g in gs]
        siblings = [Q for Q in primes if Q is not P]
        if not siblings:
            for g, v in zip(gs, vgs):
                d = v // P.e
                cands.append(K.element(g, p ** d) if d else K.element(g))
            continue
        for _round in range(30):
            u = K.one
            for Q in siblings:
                fq = residues._frame(Q)
                fq.ensure_vphi()
                u = u * K.element(fq.phi)
            t = residues.p_valuation(u, P)
            ds = [(v + t) // P.e for v in vgs]
            dmax = max(ds)
            stable = True
            for Q in siblings:
                fq = residues._frame(Q)
                target = dmax * Q.e + 2 + margin
                while fq.vphi < target:
                    fq.refine()
                    fq.ensure_vphi()
                    stable = False
            if stable:
                break
        for g, d in zip(gs, ds):
            alpha = residues._clamp(K.element(g) * u, p, d + 48 + margin)
            if d:
                alpha = K.element(alpha.num, alpha.den * p ** d)
            cands.append(alpha)
    return cands


def _triangularize(K, p, cands, idx, margin):
    """Triangular basis of the lattice spanned by ``cands`` p-locally.

    Returns elements b_j = (x^j + lower)/p^{m_j}.  All arithmetic is done
    mod p^N; truncation perturbs generators by elements of p^{N-D} Z[w],
    which lies in the lattice because the power basis is among the
    candidates.
    """
    n = K.degree
    D = max(zx.val_p(c.den, p) for c in cands)
    N = D + 40 + margin
    mod = p ** N
    rows = []
    for c in cands:
        dd = zx.val_p(c.den, p)
        scale = p ** (D - dd)
        rows.append([x * scale % mod for x in c.num] +
                    [0] * (n - len(c.num)))

    def _normalize(row, a, p, mod):
        # scale by the inverse of the unit part: lead becomes exactly p^a
        j = len(row) - 1
        while not row[j]:
            j -= 1
        u = row[j] // p ** a
        if u != 1:
            inv = pow(u, -1, mod)
            row = [x * inv % mod for x in row]
        return row, a

    pivots = {}  # column -> (row, valuation of leading coefficient)
    for row in rows:
        while True:
            j = n - 1
            while j >= 0 and not row[j]:
                j -= 1
            if j < 0:
                break
            a = zx.val_p(row[j], p)
            if j in pivots and a < pivots[j][1]:
                pivots[j], (row, a) = _normalize(row, a, p, mod), pivots[j]
            if j in pivots:
                prow, pa = pivots[j]
                # pivot lead is exactly p^pa and pa <= a, so the quotient
                # clears the coefficient in one step
                q = row[j] // p ** pa
                row = [(x - q * y) % mod for x, y in zip(row, prow)]
                continue
            pivots[j] = _normalize(row, a, p, mod)
            break
    if set(pivots) != set(range(n)):
        raise ConjectureError("conjecture check failed: basis not triangular")

    # reduce the lower entries modulo the pivots below
    for j in range(n - 1, 0, -1):
        row, a = pivots[j]
        for k in range(j - 1, -1, -1):
            krow, ka = pivots[k]
            q = row[k] // p ** ka
            if q:
                row = [(x - q * y) % mod for x, y in zip(row, krow)]
        pivots[j] = (row, a)

    basis = []
    for j in range(n):
        row, a = pivots[j]
        if a > D:
            raise ConjectureError("conjecture check failed: pivot exceeds "
                                  "the power-basis valuation")
        if any(x % p ** a for x in row):
            raise ConjectureError("conjecture check failed: basis row is "
                                  "not reducible to monic form")
        num = [x // p ** a for x in row[: j]] + [1]
        basis.append(K.element(num, p ** (D - a)))
    return basis


def p_integral_basis(K, p, verify=True):
    """A triangular p-integral basis of the maximal order: element j is
    (w^j + lower)/p^{m_j}, the determinant has p-valuation -local_index,
    and every element is integral at every prime over p."""
    if p in K.p_integral_bases:
        return K.p_integral_bases[p]
    primes = K.factor_prime(p)
    idx = K.local_index[p]
    n = K.degree
    if idx == 0:
        basis = [K.element([0] * j + [1]) for j in range(n)]
        K.p_integral_bases[p] = basis
        return basis
    margin = 0
    last = None
    for _attempt in range(5):
        try:
            cands = _local_candidates(K, p, idx, margin)
            basis = _triangularize(K, p, cands, idx, margin)
            _certify(K, p, basis, idx)
            K.p_integral_bases[p] = basis
            return basis
        except ConjectureError as exc:
            last = exc
            margin = 2 * margin + 8
    raise last


def _certify(K, p, basis, idx):
    total = sum(zx.val_p(b.den, p) for b in basis)
    if total != idx:
        raise ConjectureError(
            "conjecture check failed: determinant valuation %d != "
            "local index %d at %d" % (total, idx, p))
    for b in basis:
        for P in K.factor_prime(p):
            if residues.p_valuation(b, P) < 0:
                raise ConjectureError(
                    "conjecture check failed: basis element not integral "
                    "at %r" % (P,))


# ---------------------------------------------------------------------------
# gluing across primes


def s_integral_basis(K, primes):
    """One triangular basis that is simultaneously p-maximal at every
    listed prime: numerator coefficients glued by an integer CRT."""
    primes = sorted(set(int(p) for p in primes))
    if not primes:
        return [K.element([0] * j + [1]) for j in range(K.degree)]
    locals_ = {p: p_integral_basis(K, p) for p in primes}
    n = K.degree
    out = []
    for j in range(n):
        mods = []
        for p in primes:
            m = zx.val_p(locals_[p][j].den, p)
            mods.append((p ** m, locals_[p][j].num))
        den = math.prod(q for q, _ in mods)
        num = [0] * j + [1]
        for k in range(j):
            total = 0
            for q, loc in mods:
                if q == 1:
                    continue
                c = loc[k] if k < len(loc) else 0
                rest = den // q
                total += c * rest * pow(rest, -1, q)
            num[k] = total % den if den > 1 else 0
        out.append(K.element(num, den))
    for p in primes:
        for b in out:
            for P in K.factor_prime(p):
                if residues.p_valuation(b, P) < 0:
                    raise ConjectureError(
                        "conjecture check failed: glued basis not integral "
                        "at %r" % (P,))
        total = sum(zx.val_p(b.den, p) for b in out)
        if total != K.local_index[p]:
            raise ConjectureError(
                "conjecture check failed: glued determinant valuation at "
                "%d" % p)
    return out


# ---------------------------------------------------------------------------
# discriminants


def defining_discriminant(K):
    """disc(f) of the defining polynomial, cached."""
    if getattr(K, "_disc_f", None) is None:
        K._disc_f = zx.discriminant(K.f)
    return K._disc_f


def discriminant_exponent(K, p):
    """v_p(disc K), computed locally: v_p(disc f) is the sum of
    f_P * v_P(f'(w)) over the primes P above p, and the index removes
    2 * local_index."""
    fprime = zx.trim([i * c for i, c in enumerate(K.f)][1:])
    df = K.element(fprime)
    v = sum(P.f * residues.p_valuation(df, P) for P in K.factor_prime(p))
    return v - 2 * K.local_index[p]


def true_discriminant(K, hints=None):
    """disc(K) as (sign, [(p, exponent)]): disc(f) with the square of the
    index removed.  Factoring disc(f) may raise UnfactorableError; known
    prime divisors can be passed through ``hints``."""
    if K.discriminant_cache is not None:
        return K.discriminant_cache
    D = defining_discriminant(K)
    if D == 0:
        raise DomainError("defining polynomial is not separable")
    fac = []
    for p, e in factor_integer(D, hints):
        if e >= 2:
            K.factor_prime(p)
            e -= 2 * K.local_index[p]
        if e:
            fac.append((p, e))
    K.discriminant_cache = (1 if D > 0 else -1, fac)
    return K.discriminant_cache


def integral_basis(K, hints=None):
    """A global Z-basis of the maximal order, glued over every prime whose
    square divides disc(f)."""
    if K.integral_basis_cache is not None:
        return K.integral_basis_cache
    D = defining_discriminant(K)
    if D == 0:
        raise DomainError("defining polynomial is not separable")
    ps = [p for p, e in factor_integer(abs(D), hints) if e >= 2]
    basis = s_integral_basis(K, ps)
    K.integral_basis_cache = basis
    return basis


def render_basis(K, basis, primes=None):
    """Export format: header lines, then one element per line as
    rational coefficient vectors in the power basis."""
    lines = ["# defining polynomial: %s" % zx.render(K.f)]
    if primes:
        lines.append("# scope primes: %s" %
                     " ".join(str(p) for p in primes))
    for b in basis:
        lines.append(" ".join(str(Fraction(c, b.den)) for c in
                              (list(b.num) + [0] * (K.degree - len(b.num)))))
    return "\n".join(lines)
