"""Prime-ideal decomposition by successive higher-order Newton polygons.

The engine maintains a worklist of *types*: towers of monic lifts
phi_1 | phi_2 | ... together with the slope/residual data collected at each
order.  Analyzing one type means expanding the defining polynomial in powers
of the top phi, taking the principal part of the resulting Newton polygon,
and for each (side, irreducible residual factor) pair either

* declaring a prime ideal (residual multiplicity 1),
* refining the current phi (unibranch linear data: e = 1, deg psi = 1), or
* enlarging the type by one order.

Valuations are integer-normalized: the order-(i+1) valuation of a
phi_i-expansion is ``min_m (e_i v_i(a_m) + m (e_i V_i + h_i))`` and
``v(p) = e_1 ... e_i`` grows with the ramification collected so far, so that
the final v_P satisfies v_P(p) = e(P).

Newton polygon ordinates are ``u_m = v_r(a_m) + m V_r``, which makes the
printed slopes equal to -h/e exactly.
"""

from __future__ import annotations

from fractions import Fraction

from . import ff, newton, zx
from .ff import DomainError


class EngineError(RuntimeError):
    """Internal consistency violation inside the decomposition engine."""


_PLUS = "+" * 48
_DASH = "-" * 22

# refinements strictly increase the slope, which is bounded by v_p(disc f);
# anything past this bound means the input was not separable/irreducible
_MAX_REFINEMENTS = 100000


class TypeLevel:
    """Data of one order of a type.

    ``phi``/``V``/``cut`` exist from creation; ``h, e, ell, psi, f`` are
    filled in when a polygon side and residual factor have been chosen
    (the level is then *complete*).
    """

    __slots__ = ("phi", "V", "cut", "h", "e", "ell", "psi", "f")

    def __init__(self, phi, V, cut=Fraction(0)):
        self.phi = phi
        self.V = V
        self.cut = cut
        self.h = self.e = self.ell = self.psi = self.f = None

    def completed(self, h, e, psi):
        lvl = TypeLevel(self.phi, self.V, self.cut)
        lvl.h, lvl.e = h, e
        lvl.ell = pow(h, -1, e) if e > 1 else 0
        lvl.psi = psi
        lvl.f = len(psi) - 1
        return lvl

    @property
    def slope(self):
        return Fraction(-self.h, self.e)


class OMType:
    """A type: prime p, order-0 residual factor, level tower, residue tower.

    ``reslev[i]`` is the i-th residue field F^(i) (``reslev[0]`` = F_p,
    ``reslev[i+1]`` = F^(i)[y]/psi_i).  ``levels[i-1]`` holds the order-i
    data; the last level may be incomplete while the type is being built.
    """

    def __init__(self, p, psi0):
        self.p = p
        self.psi0 = list(psi0)
        self.f0 = len(psi0) - 1
        self.exact = False  # set when phi equals the exact p-adic factor
        base = ff.TowerLevel(None, 0, ff.FlatField.of_degree(p, 1))
        # use psi0 itself as the modulus of F^(1): its canonical root is
        # then the field generator and no root-finding is needed
        F1 = ff.FlatField.of_degree(p, 1) if self.f0 == 1 else \
            ff.FlatField(p, [c % p for c in psi0])
        first = ff.TowerLevel(None, 1, F1, prev=base,
                              psi=[(c,) for c in psi0])
        self.reslev = [base, first]
        phi1 = [c % p for c in psi0]
        phi1[-1] = 1
        self.levels = [TypeLevel(phi1, 0)]

    def branch(self, completed_last, new_level=None, new_reslev=None):
        """Copy of this type with the last level replaced by a completed one,
        optionally extended by a new open level / residue field."""
        t = OMType.__new__(OMType)
        t.p, t.psi0, t.f0 = self.p, self.psi0, self.f0
        t.exact = self.exact
        t.reslev = list(self.reslev)
        t.levels = self.levels[:-1] + [completed_last]
        if new_reslev is not None:
            t.reslev.append(new_reslev)
        if new_level is not None:
            t.levels.append(new_level)
        return t

    @property
    def order(self):
        return len(self.levels)

    def top_field(self):
        """Residue field F^(r) over which the current residual lives."""
        return self.reslev[len(self.levels)]

    def ramification(self):
        e = 1
        for lvl in self.levels:
            if lvl.e is not None:
                e *= lvl.e
        return e

    def residual_degree(self):
        f = self.f0
        for lvl in self.levels:
            if lvl.f is not None:
                f *= lvl.f
        return f

    def vp_of_p(self, i):
        """v_i(p) = e_1 ... e_{i-1}."""
        out = 1
        for lvl in self.levels[: i - 1]:
            out *= lvl.e
        return out

    # -- the order-i valuations -------------------------------------------

    def vval(self, i, a):
        """v_i(a) for a nonzero integer polynomial a (None for a = 0)."""
        if not a:
            return None
        if i == 1:
            return min(zx.val_p(c, self.p) for c in a if c)
        lvl = self.levels[i - 2]
        step = lvl.e * lvl.V + lvl.h
        best = None
        for m, b in enumerate(zx.phi_expansion(a, lvl.phi)):
            if not b:
                continue
            w = lvl.e * self.vval(i - 1, b) + m * step
            if best is None or w < best:
                best = w
        return best

    # -- reduction to the residue fields ----------------------------------

    def red(self, i, a, t, v):
        """Image of a/p^t in F^(i), normalized at value v.

        Requires v_i(a/p^t) >= v; the image is nonzero exactly when equality
        holds.  ``a`` is an integer polynomial of degree < deg phi_i.
        """
        lev = self.reslev[i]
        F = lev.field
        if i == 1:
            k = v + t
            if k < 0:
                return F.zero
            p = self.p
            out = F.zero
            for c in reversed(a):
                out = F.add(F.mul(out, lev.z), F.from_int((c // p**k) % p))
            return out
        lvl = self.levels[i - 2]
        step = lvl.e * lvl.V + lvl.h
        Ep = self.vp_of_p(i - 1)
        out = F.zero
        for m, b in enumerate(zx.phi_expansion(a, lvl.phi)):
            if not b:
                continue
            vb = self.vval(i - 1, b) - t * Ep
            if lvl.e * vb + m * step != v:
                continue
            sub = self.red(i - 1, b, t, vb)
            expo = m - lvl.ell * v
            if expo % lvl.e:
                raise EngineError("reduction exponent not divisible by e")
            term = F.mul(lev.embed(sub), F.pow(lev.z, expo // lvl.e))
            out = F.add(out, term)
        return out

    # -- construction (a right inverse of red) ----------------------------

    def construct(self, i, c, v):
        """A pair (a, t) with red_i(a/p^t, v) = c and v_i(a/p^t) = v.

        ``c`` must be a nonzero element of F^(i); v may be any integer, the
        denominator exponent t >= 0 absorbs negative valuations.
        """
        lev = self.reslev[i]
        if lev.field.is_zero(c):
            raise EngineError("construct of zero")
        if i == 1:
            a = zx.trim([x[0] for x in lev.decompose(c)])
            if v >= 0:
                return zx.scale(a, self.p ** v), 0
            return a, -v
        lvl = self.levels[i - 2]
        step = lvl.e * lvl.V + lvl.h
        lv = lvl.ell * v
        shift, base_m = divmod(lv, lvl.e)
        twisted = lev.field.mul(c, lev.field.pow(lev.z, shift))
        parts = []
        tmax = 0
        for j, cj in enumerate(lev.decompose(twisted)):
            if self.reslev[i - 1].field.is_zero(cj):
                continue
            m = base_m + lvl.e * j
            w = v - m * step
            if w % lvl.e:
                raise EngineError("construction valuation not divisible by e")
            sub, subt = self.construct(i - 1, cj, w // lvl.e)
            parts.append((m, sub, subt))
            tmax = max(tmax, subt)
        a = []
        for m, sub, subt in parts:
            term = zx.mul(zx.scale(sub, self.p ** (tmax - subt)),
                          zx.pow_int(lvl.phi, m))
            a = zx.add(a, term)
        return a, tmax

    def lift_completed(self, lvl):
        """Monic lift phi_{r+1} of a completed level's residual factor:
        phi^{ef} + sum_j construct(psi_j, (f-j)(eV+h)) phi^{je}."""
        i = self.levels.index(lvl) + 1
        e, h, f, V = lvl.e, lvl.h, lvl.f, lvl.V
        F = self.reslev[i].field
        out = zx.pow_int(lvl.phi, e * f)
        for j in range(f):
            cj = lvl.psi[j]
            if F.is_zero(cj):
                continue
            a, t = self.construct(i, cj, (f - j) * (e * V + h))
            if t:
                raise EngineError("non-integral lift coefficient")
            out = zx.add(out, zx.mul(a, zx.pow_int(lvl.phi, j * e)))
        return out


class PrimeData:
    """A terminal type together with the invariants of its prime ideal."""

    def __init__(self, omtype, position):
        self.type = omtype
        self.p = omtype.p
        self.position = position
        self.e = omtype.ramification()
        self.f = omtype.residual_degree()
        self._phi_p = None

    @property
    def phi_p(self):
        """An Okutsu approximation to the p-adic factor: the lift of the
        terminal level, of degree e(P) f(P)."""
        if self._phi_p is None:
            if getattr(self.type, "exact", False):
                self._phi_p = self.type.levels[-1].phi
            else:
                self._phi_p = self.type.lift_completed(self.type.levels[-1])
        return self._phi_p

    @phi_p.setter
    def phi_p(self, value):
        self._phi_p = value


class DecompositionResult:
    """Outcome of montes_decompose: primes in deterministic position order,
    the p-index of the defining polynomial, and any trace emitted."""

    def __init__(self, f, p, primes, local_index, trace_lines):
        self.f = f
        self.p = p
        self.primes = primes
        self.local_index = local_index
        self.trace_lines = trace_lines


def _next_V(lvl):
    return lvl.e * lvl.f * (lvl.e * lvl.V + lvl.h)


class _Node:
    """Worklist entry: a type whose last level is still open, plus the
    residual multiplicity bound omega."""

    __slots__ = ("omtype", "omega", "refinements")

    def __init__(self, omtype, omega, refinements=0):
        self.omtype = omtype
        self.omega = omega
        self.refinements = refinements


def _render_respol(t, coeffs, var):
    """Render a residue-field polynomial the way the trace prints it."""
    i = len(t.levels)
    F = t.reslev[i].field
    parts = []
    for j in range(len(coeffs) - 1, -1, -1):
        c = coeffs[j]
        if F.is_zero(c):
            continue
        cs = ff.render_tower_element(t.reslev, i, c)
        if j == 0:
            parts.append(cs)
            continue
        yj = var if j == 1 else "%s^%d" % (var, j)
        if cs == "1":
            parts.append(yj)
        elif any(op in cs for op in (" + ", " - ", "*")):
            parts.append("(%s)*%s" % (cs, yj))
        else:
            parts.append("%s*%s" % (cs, yj))
    return " + ".join(parts) if parts else "0"


def _index_count(sides, cut):
    """Lattice points on or below the chain, strictly above the line of
    slope -cut through its right endpoint, abscissa >= 1.  With cut = 0 this
    is the plain polygon index; after a refinement the region below the
    previous (shallower) slope has already been counted."""
    if not sides:
        return 0
    X, Y = sides[-1].x1, sides[-1].y1
    total = 0
    for s in sides:
        for x in range(s.x0 + 1, s.x1 + 1):
            ymax = s.y0 + (x - s.x0) * s.slope
            thr = Y + cut * (X - x)
            hi = ymax.numerator // ymax.denominator
            lo = thr.numerator // thr.denominator  # count y > thr
            if thr.denominator == 1:
                lo = int(thr)
            if hi > lo:
                total += hi - lo
    return total


def montes_decompose(f, p, verbosity=0, trace=None):
    """Decompose p in the number field defined by monic irreducible f.

    Returns a :class:`DecompositionResult` whose primes carry (e, f) and, via
    their types, everything needed for valuations and reductions.  At
    verbosity >= 2 the polygon/side/residual trace is emitted (print + the
    result's ``trace_lines``); verbosity >= 1 reports the order-0 factors.
    """
    f = zx.trim([int(c) for c in f])
    if not zx.is_monic(f) or zx.degree(f) < 1:
        raise DomainError("defining polynomial must be monic of degree >= 1")
    lines = [] if trace is None else trace

    def say(level, text):
        if verbosity >= level:
            lines.append(text)
            print(text)

    primes = []
    local_index = 0
    for psi0, omega in ff.factor_mod_p(f, p):
        say(1, "Analyzing irreducible factor modulo p:  %s"
            % zx.render(psi0, "Y0"))
        say(2, _PLUS)
        say(2, _PLUS)
        t = OMType(p, psi0)
        stack = [_Node(t, omega)]
        while stack:
            node = stack.pop()
            children, terminals, ind = _analyze(node, f, say)
            local_index += ind
            primes.extend(terminals)
            stack.extend(reversed(children))
    primes = [PrimeData(t, i + 1) for i, t in enumerate(primes)]
    if sum(P.e * P.f for P in primes) != zx.degree(f):
        raise EngineError("degree identity violated; is f irreducible?")
    return DecompositionResult(f, p, primes, local_index, lines)


def _analyze(node, f, say):
    """Run one polygon analysis step.  Returns (children, terminal types,
    index contribution)."""
    t = node.omtype
    r = t.order
    lvl = t.levels[-1]
    say(2, "Analyzing type of order  %d" % r)
    say(2, "Phir= %s" % zx.render(lvl.phi))

    coeffs = zx.phi_expansion(f, lvl.phi)
    if len(coeffs) == 2 and not coeffs[0]:
        # f equals the current phi: the approximation is the exact p-adic
        # factor, terminal with trivial contribution at this order
        F = t.top_field().field
        done = lvl.completed(1, 1, [F.one, F.one])
        exact = t.branch(done)
        exact.exact = True
        return [], [exact], 0
    points = []
    vals = {}
    for m in range(min(node.omega, len(coeffs) - 1) + 1):
        a = coeffs[m] if m < len(coeffs) else []
        v = t.vval(r, a)
        vals[m] = v
        points.append((m, None if v is None else v + m * lvl.V))
    sides = newton.principal_polygon(points)
    if not sides or sides[-1].x1 != node.omega:
        raise EngineError("principal polygon has wrong length "
                          "(expected %d)" % node.omega)
    for s in sides:
        if -s.slope <= lvl.cut:
            raise EngineError("polygon side not steeper than the cutting "
                              "slope; input not separable?")
    say(2, "Sides of Newton polygon: [")
    for s in sides:
        say(2, "    %s" % newton.render_side(s))
    say(2, "]")

    weight = t.f0
    for complete in t.levels[:-1]:
        weight *= complete.f
    ind = weight * _index_count(sides, lvl.cut)

    F = t.top_field().field
    children = []
    terminals = []
    for s in sides:
        say(2, _DASH)
        say(2, "Analyzing side  %s" % newton.render_side(s))
        say(2, "Slope:  %s" % s.slope)
        say(2, "Origin: %s" % newton.render_point(s.x0, s.y0))
        say(2, "End point: %s" % newton.render_point(s.x1, s.y1))
        say(2, _DASH)
        respol = []
        for j, m in enumerate(s.abscissas()):
            u = points[m][1]
            on_side = u is not None and \
                Fraction(u) == s.y0 + (m - s.x0) * s.slope
            if on_side:
                respol.append(t.red(r, coeffs[m], 0, vals[m]))
            else:
                respol.append(F.zero)
        # normalize monic
        lead = respol[-1]
        if not lead == F.one:
            inv = F.inv(lead)
            respol = [F.mul(c, inv) for c in respol]
        var = "Y%d" % (r - 1)
        say(2, "Monic Residual Polynomial= %s" % _render_respol(t, respol, var))
        factors = ff.fq_factor(F, respol)
        say(2, "Factors of R.P.:= [")
        for psi, mult in factors:
            say(2, "    <%s, %d>" % (_render_respol(t, psi, var), mult))
        say(2, "]")
        for psi, mult in factors:
            done = lvl.completed(s.h, s.e, psi)
            if mult == 1:
                terminals.append(t.branch(done))
            elif s.e == 1 and len(psi) == 2:
                # refinement: better phi at the same order
                if node.refinements > _MAX_REFINEMENTS:
                    raise EngineError("refinement did not terminate; "
                                      "input not separable?")
                tt = t.branch(done)
                newphi = tt.lift_completed(tt.levels[-1])
                refined = TypeLevel(newphi, lvl.V, cut=Fraction(s.h, s.e))
                child = t.branch(refined)
                children.append(_Node(child, mult, node.refinements + 1))
            else:
                tt = t.branch(done)
                newphi = tt.lift_completed(tt.levels[-1])
                newF = F if done.f == 1 else \
                    ff.FlatField.of_degree(t.p, F.d * done.f)
                newres = ff.TowerLevel(None, r + 1, newF,
                                       prev=t.reslev[r], psi=list(psi))
                newlvl = TypeLevel(newphi, _next_V(done))
                child = tt.branch(done, new_level=newlvl, new_reslev=newres)
                children.append(_Node(child, mult))
    return children, terminals, ind
