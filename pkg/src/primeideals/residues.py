"""P-adic valuations, residue fields, reduction/lifting, and CRT.

Everything here works through a *frame* attached to each prime-ideal handle:
the terminal type of P extended by one more level whose phi is the Okutsu
approximation to the p-adic factor of P.  The frame can be *refined* (phi
replaced by a strictly better approximation) on demand; v_P(phi(theta))
grows with each refinement, which makes every computation below terminate:

- ``p_valuation``     expand in phi, take the minimal term valuation; refine
                      until the minimum is attained by a single term.
- ``reduce_mod``      refine until the phi-tail is negligible, then reduce
                      the constant phi-coefficient through the residue tower.
- ``lift``            the type's ``construct`` right inverse of reduction,
                      made integral at the sibling primes with a separator.
- ``crt``             separator idempotents per rational prime, glued with
                      an integer CRT; every bound is verified and the
                      precision raised on failure.

A *separator* of P is an element close to 1 at P and close to 0 at the other
primes over p; it is built from products of the siblings' phi-polynomials,
normalized to a unit at P, and sharpened by the Newton iteration
e <- e^2(3-2e) which doubles both closeness orders.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import ff, montes, zx
from .ff import DomainError
from .montes import EngineError

INFINITY = math.inf

_MAX_REFINEMENTS = 400


class _Frame:
    """A prime's terminal type extended to order r+1 by its Okutsu phi."""

    def __init__(self, P):
        t = P.type
        r = t.order
        done = t.levels[-1]
        lev_r = t.reslev[r]
        self.P = P
        self.p = t.p
        self.eP = P.e
        self.exact = bool(getattr(t, "exact", False))
        newF = lev_r.field if done.f == 1 else \
            ff.FlatField.of_degree(t.p, lev_r.field.d * done.f)
        newres = ff.TowerLevel(None, r + 1, newF,
                               prev=lev_r, psi=list(done.psi))
        self.V = montes._next_V(done)
        self.r1 = r + 1
        phi = done.phi if self.exact else list(P.phi_p)
        self.ext = t.branch(done, new_level=montes.TypeLevel(phi, self.V),
                            new_reslev=newres)
        self.vphi = INFINITY if self.exact else None
        self._poly = None  # K.f and its data, set lazily by ensure_vphi
        self.refinements = 0

    @property
    def phi(self):
        return self.ext.levels[-1].phi

    def ensure_vphi(self):
        """Compute v_P(phi(theta)) from the length-1 principal polygon of
        the defining polynomial with respect to phi."""
        if self.vphi is not None:
            return
        f = self.P.parent.f
        # only the first two phi-digits of f are needed for the length-1
        # principal polygon
        r2 = zx.divmod_monic(f, zx.mul(self.phi, self.phi))[1]
        a1, a0 = zx.divmod_monic(r2, self.phi)
        coeffs = (a0, a1)
        u0 = self.ext.vval(self.r1, coeffs[0])
        u1 = self.ext.vval(self.r1, coeffs[1])
        h = u0 - u1 - self.V
        if h <= self.ext.levels[-1].cut:
            raise EngineError("frame polygon not steeper than the cut")
        self.vphi = self.V + h
        self._poly = (coeffs, u0, u1)

    def refine(self):
        """Replace phi by a strictly better approximation (one more digit of
        the p-adic factor), invalidating vphi."""
        if self.exact:
            raise EngineError("cannot refine an exact frame")
        if self.refinements > _MAX_REFINEMENTS:
            raise EngineError("frame refinement did not terminate")
        self.ensure_vphi()
        coeffs, u0, u1 = self._poly
        t = self.ext
        lvl = t.levels[-1]
        h = self.vphi - self.V
        F = t.reslev[self.r1].field
        c0 = t.red(self.r1, coeffs[0], 0, u0)
        c1 = t.red(self.r1, coeffs[1], 0, u1)
        respol = [F.mul(c0, F.inv(c1)), F.one]
        done = lvl.completed(h, 1, respol)
        tt = t.branch(done)
        newphi = tt.lift_completed(done)
        # clamp coefficients far above the working precision: the clamped
        # polynomial is still a strictly better approximation, and vphi is
        # recomputed from the polygon, so correctness is unaffected
        C = (2 * (self.V + h)) // self.eP + 32
        mod = self.p ** C
        newphi = [c % mod for c in newphi[:-1]] + [1]
        self.ext = t.branch(montes.TypeLevel(newphi, self.V,
                                             cut=Fraction(h)))
        self.vphi = None
        self._poly = None
        self.refinements += 1

    def poly_valuation(self, a):
        """v_P(a(theta)) for a nonzero integer polynomial a of degree < n."""
        if zx.degree(a) < zx.degree(self.phi):
            return self.ext.vval(self.r1, a)
        while True:
            self.ensure_vphi()
            coeffs = zx.phi_expansion(a, self.phi)
            best = best_m = None
            tie = False
            for m, am in enumerate(coeffs):
                if not am:
                    continue
                v = self.ext.vval(self.r1, am) + m * self.vphi
                if best is None or v < best:
                    best, best_m, tie = v, m, False
                elif v == best:
                    tie = True
            if not tie:
                return best
            self.refine()


def _frame(P):
    if P._frame is None:
        with P._lock:
            if P._frame is None:
                P._frame = _Frame(P)
    return P._frame


# ---------------------------------------------------------------------------
# valuations


def p_valuation(alpha, P):
    """v_P(alpha), normalized with v_P(p) = e(P); v_P(0) = infinity.

    Accepts rationals and field elements uniformly.
    """
    from .ideals import FieldElement
    if isinstance(alpha, (int, Fraction)):
        alpha = Fraction(alpha)
        if alpha == 0:
            return INFINITY
        return P.e * (zx.val_p(alpha.numerator, P.p)
                      - zx.val_p(alpha.denominator, P.p))
    if not isinstance(alpha, FieldElement):
        raise DomainError("p_valuation expects a rational or a field element")
    if alpha.parent.f != P.parent.f:
        raise DomainError("element and prime live in different fields")
    if alpha.is_zero():
        return INFINITY
    frame = _frame(P)
    return frame.poly_valuation(alpha.num) - P.e * zx.val_p(alpha.den, P.p)


# ---------------------------------------------------------------------------
# residue field, reduction, lifting


def residue_field(P):
    """The residue field Z_K/P as a tower F_0 <= ... <= F_{r+1} over F_p."""
    if getattr(P, "_residue_tower", None) is None:
        frame = _frame(P)
        tower = ff.FFTower.__new__(ff.FFTower)
        tower.p = frame.p
        tower.levels = list(frame.ext.reslev[: frame.r1 + 1])
        P._residue_tower = tower
    return P._residue_tower


def _residue_element(P, flat):
    tower = residue_field(P)
    return ff.TowerElement(tower, len(tower.levels) - 1, flat)


def _coerce_residue(P, z):
    F = _frame(P).ext.reslev[_frame(P).r1].field
    if isinstance(z, ff.TowerElement):
        return z.flat
    if isinstance(z, int):
        return F.from_int(z)
    return F.elt(list(z))


def reduce_mod(alpha, P):
    """Image of alpha in the residue field of P.

    Requires v_P(alpha) >= 0; integrality at the other primes over p is not
    required (this is reduction of the localization at P).
    """
    K = P.parent
    alpha = K.element(alpha)
    frame = _frame(P)
    p = frame.p
    v = p_valuation(alpha, P)
    if v < 0:
        raise DomainError("element is not P-integral (v = %s)" % v)
    F = frame.ext.reslev[frame.r1].field
    if v > 0 or alpha.is_zero():
        return _residue_element(P, F.zero)
    s = zx.val_p(alpha.den, p)
    d2 = alpha.den // p ** s
    num = alpha.num
    if d2 != 1:
        # replace the prime-to-p denominator by its inverse mod a p-power
        # high enough that the perturbation has positive valuation
        mod = p ** (s + 2)
        u = pow(d2 % mod, -1, mod)
        num = [c * u % mod for c in num]
    if not frame.exact:
        frame.ensure_vphi()
        while frame.vphi <= s * frame.eP:
            frame.refine()
            frame.ensure_vphi()
    a0 = zx.phi_expansion(num, frame.phi)[0]
    return _residue_element(P, frame.ext.red(frame.r1, a0, s, 0))


def lift(z, P):
    """A deterministic integral element of the parent field reducing to z."""
    K = P.parent
    frame = _frame(P)
    flat = _coerce_residue(P, z)
    F = frame.ext.reslev[frame.r1].field
    if F.is_zero(flat):
        return K.zero
    a, t = frame.ext.construct(frame.r1, flat, 0)
    alpha = K.element(a, frame.p ** t)
    if t == 0:
        return alpha
    siblings = [Q for Q in K.prime_ideals[frame.p] if Q is not P]
    if not siblings:
        return alpha  # P-integral and P is the only prime over p
    M = t * max(Q.e for Q in siblings) + 1
    eps = separator(P, M)
    beta = alpha * eps
    if any(p_valuation(beta, Q) < 0 for Q in siblings):
        raise EngineError("lift integralization failed")
    return beta


# ---------------------------------------------------------------------------
# separators (idempotent approximations)


def _ext_gcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _value_combination(gammas, e, target):
    """Nonnegative c with sum c_i * gammas_i ≡ target (mod e)."""
    g = e
    rep = [0] * len(gammas)
    for i, gam in enumerate(gammas):
        g2, x, y = _ext_gcd(g, gam)
        rep = [x * c for c in rep]
        rep[i] += y
        g = g2
    if target % g:
        raise EngineError("value group not generated by the frame data")
    k = target // g
    return [(c * k) % e if e > 1 else 0 for c in rep]


def _uniformizer_data(P):
    """phi polynomials of the frame of P and their valuations at P."""
    frame = _frame(P)
    K = P.parent
    phis = [lvl.phi for lvl in P.type.levels]
    gammas = [frame.poly_valuation(phi) for phi in phis]
    return phis, gammas


def _clamp(alpha, p, C):
    """Reduce the numerator mod p^(C + v_p(den)): perturbs the element by
    something of valuation >= C * e at every prime over p."""
    s = zx.val_p(alpha.den, p)
    mod = p ** (C + s)
    return alpha.parent.element([c % mod for c in alpha.num], alpha.den)


def separator(P, M):
    """An element eps with v_P(eps - 1) >= M and v_Q(eps) >= M at every
    other prime Q over p.  Denominator is always a power of p."""
    K = P.parent
    frame = _frame(P)
    p, eP = frame.p, frame.eP
    cached = getattr(P, "_separator", None)
    if cached is not None and cached[0] >= M:
        return cached[1]
    siblings = [Q for Q in K.prime_ideals[p] if Q is not P]
    if not siblings:
        P._separator = (M, K.one)
        return K.one
    phis, gammas = _uniformizer_data(P)
    for _attempt in range(30):
        # cofactor product: high valuation at every sibling, adjusted to a
        # multiple of e(P) at P and divided down to a unit at P
        u = K.one
        for Q in siblings:
            fq = _frame(Q)
            fq.ensure_vphi()
            u = u * K.element(fq.phi)
        t0 = p_valuation(u, P)
        r0 = (-t0) % eP
        if r0:
            combo = _value_combination(gammas, eP, r0)
            for phi, c in zip(phis, combo):
                if c:
                    u = u * K.element(phi) ** c
            t0 = t0 + sum(c * g for c, g in zip(combo, gammas))
        b = t0 // eP
        s_elt = K.element(u.num, u.den * p ** b)
        rho = reduce_mod(s_elt, P)
        F = frame.ext.reslev[frame.r1].field
        a, tl = frame.ext.construct(frame.r1, F.inv(rho.flat), 0)
        eps = s_elt * K.element(a, p ** tl)
        delta = p_valuation(eps - 1, P)
        # valuation at each sibling must stay positive after the p-power
        # divisions; refine the deficient siblings (v_Q(phi_Q) grows without
        # bound while v_P(phi_Q) converges) and rebuild
        short = False
        for Q in siblings:
            mu = p_valuation(eps, Q)
            if mu < 1:
                fq = _frame(Q)
                target = fq.vphi + (1 - mu) + 2
                while fq.vphi < target:
                    fq.refine()
                    fq.ensure_vphi()
                short = True
        if short:
            continue
        mus = min(p_valuation(eps, Q) for Q in siblings)
        if delta < 1:
            raise EngineError("separator seed is not a unit approximation")
        # eps <- eps^2 (3 - 2 eps): writing eps = 1 + h, the new error is
        # -h^2 (2 eps + 1), so v_P(eps - 1) at least doubles, and
        # v_Q(eps^2 (3 - 2 eps)) >= 2 v_Q(eps).  Clamping perturbs by
        # valuation >= M + 8 > M, so the doubled bounds are genuine lower
        # bounds and need no re-measurement.
        guard = 0
        while (delta < M or mus < M) and guard < 64:
            eps = _clamp(eps * eps * (3 - 2 * eps), p, M + 8)
            delta = min(2 * delta, M + 8)
            mus = min(2 * mus, M + 8)
            guard += 1
        if delta >= M and mus >= M:
            P._separator = (M, eps)
            return eps
    raise EngineError("separator construction did not converge")


def make_generator(P):
    """A uniformizer of P: v_P = 1 and valuation 0 at the other primes
    over p.  Built as sigma * eps + (1 - eps) for a value-1 sigma."""
    K = P.parent
    frame = _frame(P)
    p = frame.p
    F = frame.ext.reslev[frame.r1].field
    a, t = frame.ext.construct(frame.r1, F.one, 1)
    sigma = K.element(a, p ** t)
    siblings = [Q for Q in K.prime_ideals[p] if Q is not P]
    if not siblings:
        return sigma
    worst = min(p_valuation(sigma, Q) for Q in siblings)
    M = max(2, 1 - worst + 1)
    for _attempt in range(5):
        eps = separator(P, M)
        gen = _clamp(sigma * eps + (1 - eps), p, M + 8)
        if p_valuation(gen, P) == 1 and \
                all(p_valuation(gen, Q) == 0 for Q in siblings):
            return gen
        M = 2 * M + 2
    raise EngineError("generator construction did not converge")


# ---------------------------------------------------------------------------
# Chinese remainder


def crt(elements, ideals):
    """alpha with v_Q(alpha - elements[k]) >= v_Q(ideals[k]) for every
    prime Q in the support of ideals[k].  Ideals must be integral with
    pairwise disjoint prime supports; elements are assumed integral."""
    from .ideals import IdealHandle
    if len(elements) != len(ideals):
        raise DomainError("crt needs equally many elements and ideals")
    if not elements:
        raise DomainError("crt of empty sequences")
    K = None
    constraints = []  # (Q, bound, k)
    seen = set()
    for k, I in enumerate(ideals):
        if hasattr(I, "as_ideal"):
            I = I.as_ideal()
        if not isinstance(I, IdealHandle):
            raise DomainError("crt moduli must be ideals or prime ideals")
        K = I.parent
        for Q, e in I.factorization():
            if e < 0:
                raise DomainError("crt moduli must be integral ideals")
            key = (Q.p, Q.position)
            if key in seen:
                raise DomainError("crt moduli are not pairwise coprime")
            seen.add(key)
            constraints.append((Q, e, k))
    elements = [K.element(a) for a in elements]
    if not constraints:
        return elements[0]

    by_p = {}
    for Q, e, k in constraints:
        by_p.setdefault(Q.p, []).append((Q, e, k))

    slack = 2
    for _attempt in range(5):
        parts = {}
        for p, group in by_p.items():
            M = max(e for _, e, _ in group) + slack
            alpha_p = K.zero
            for Q, e, k in group:
                alpha_p = alpha_p + elements[k] * separator(Q, M)
            parts[p] = (alpha_p, M)
        # integer CRT weights: c_p ≡ 1 mod p^{A_p}, ≡ 0 mod the others
        mods = {}
        for p, (alpha_p, M) in parts.items():
            A = max(-(-e // Q.e) for Q, e, _ in by_p[p]) + \
                zx.val_p(alpha_p.den, p) + slack
            mods[p] = p ** A
        alpha = K.zero
        total = math.prod(mods.values())
        for p, (alpha_p, M) in parts.items():
            rest = total // mods[p]
            c = rest * pow(rest, -1, mods[p])
            alpha = alpha + alpha_p * c
        alpha = K.element([x % (total * alpha.den) for x in alpha.num],
                          alpha.den)
        ok = all(p_valuation(alpha - elements[k], Q) >= e
                 for Q, e, k in constraints)
        if ok:
            return alpha
        slack = 2 * slack + 2
    raise EngineError("crt did not converge")


# ---------------------------------------------------------------------------
# two-element representation


def two_element(I):
    """(N, beta) with min(v_Q(N), v_Q(beta)) = v_Q(I) at every prime Q.

    N is the smallest power-product of the support's rational primes that
    dominates the ideal, beta a combination of uniformizer powers.
    """
    K = I.parent
    fac = I.factorization()
    if any(e < 0 for _, e in fac):
        raise DomainError("two-element form needs an integral ideal")
    if not fac:
        return 1, K.one
    by_p = {}
    for P, e in fac:
        by_p.setdefault(P.p, []).append((P, e))
    N = 1
    for p, group in by_p.items():
        m = max(-(-e // P.e) for P, e in group)
        N *= p ** m
    slack = 2
    for _attempt in range(5):
        parts = {}
        for p, group in by_p.items():
            M = max(e for _, e in group) + slack
            seps = {P.position: separator(P, M) for P, _ in group}
            beta_p = K.one
            for P, e in group:
                beta_p = beta_p - seps[P.position]
            for P, e in group:
                beta_p = beta_p + (P.generator ** e) * seps[P.position]
            parts[p] = beta_p
        mods = {}
        for p, group in by_p.items():
            A = max(-(-e // P.e) for P, e in group) + \
                zx.val_p(parts[p].den, p) + slack
            mods[p] = p ** A
        beta = K.zero
        total = math.prod(mods.values())
        for p, beta_p in parts.items():
            rest = total // mods[p]
            c = rest * pow(rest, -1, mods[p])
            beta = beta + beta_p * c
        beta = K.element([x % (total * beta.den) for x in beta.num], beta.den)
        ok = True
        for p, group in by_p.items():
            want = {P.position: e for P, e in group}
            for Q in K.prime_ideals[p]:
                if p_valuation(beta, Q) != want.get(Q.position, 0):
                    ok = False
        if ok:
            return N, beta
        slack = 2 * slack + 2
    raise EngineError("two-element form did not converge")
