"""Normal forms of one-variable formal disk automorphisms.

An automorphism is a series a(t) with valuation 1 and invertible linear
coefficient, acting by substitution.  Over a characteristic-zero field
every such map is conjugate to

    zeta * t + x * t^i + x^2 * y * t^(2i - 1)

where zeta is the linear coefficient, i is the contact order of the first
iterate of finite order (i = 1 with x = y = 0 when zeta is not a root of
unity, i = +infinity with x = y = 0 when some iterate is the identity to
working precision), and x is well defined up to (i - 1)-th powers.
"""

from math import inf

from .errors import (
    FieldMismatch,
    NotCompInvertible,
    NotSolvable,
    PrecisionExhausted,
    UnsupportedField,
)
from .series import DEFAULT_PRECISION, LaurentSeries


class DiskAutomorphism:
    """Invertible substitution t -> image(t) on the formal disk."""

    __slots__ = ("image",)

    def __init__(self, image):
        if image.val_floor() < 1 or image.valuation() != 1:
            raise NotCompInvertible(
                "automorphism image must have valuation 1 with a unit linear term"
            )
        self.image = image

    @staticmethod
    def identity(field, prec=None):
        return DiskAutomorphism(LaurentSeries.variable(field, prec))

    @property
    def field(self):
        return self.image.field

    def linear_coeff(self):
        return self.image.coeffs[1]

    def __eq__(self, other):
        return isinstance(other, DiskAutomorphism) and self.image == other.image

    def __call__(self, series):
        """Apply to a coefficient series: s goes to s(image)."""
        return series.compose(self.image)

    def __repr__(self):
        return "<automorphism t -> %s>" % self.image.format()


def auto_compose(a, b):
    """Composite a after b: (a o b)(t) = a(b(t))."""
    if a.field != b.field:
        raise FieldMismatch("automorphisms over different fields")
    return DiskAutomorphism(a.image.compose(b.image))


def auto_inverse(a, target_prec=None):
    return DiskAutomorphism(a.image.comp_invert(target_prec))


def auto_iterate(a, m):
    """m-fold composite of a with itself, computed by repeated squaring."""
    if m < 0:
        return auto_iterate(auto_inverse(a), -m)
    if m == 0:
        return DiskAutomorphism.identity(a.field, a.image.prec)
    base = a
    out = None
    while m:
        if m & 1:
            out = base if out is None else auto_compose(out, base)
        m >>= 1
        if m:
            base = auto_compose(base, base)
    return out


def conjugate(a, f):
    """f^-1 o a o f, the coordinate change t -> f(t)."""
    finv = auto_inverse(f, target_prec=a.image.prec)
    return auto_compose(finv, auto_compose(a, f))


class NormalFormInvariants:
    """Classification data of a disk automorphism.

    Attributes: zeta, n (None when zeta is not a root of unity), i_alpha
    (int or +infinity), x, y (field elements), x_class (x reduced modulo
    (i_alpha - 1)-th powers when that is decidable), conjugator (a
    DiskAutomorphism f with f^-1 o a o f equal to the normal form),
    normal_form, precision (the working precision actually used).
    """

    def __init__(self, zeta, n, i_alpha, x, y, x_class, conjugator, normal_form, precision):
        self.zeta = zeta
        self.n = n
        self.i_alpha = i_alpha
        self.x = x
        self.y = y
        self.x_class = x_class
        self.conjugator = conjugator
        self.normal_form = normal_form
        self.precision = precision

    def key(self):
        return (self.zeta, self.n, self.i_alpha, self.x, self.y)

    def __repr__(self):
        return "<normal form zeta=%r n=%r i_alpha=%r x=%r y=%r>" % (
            self.zeta,
            self.n,
            self.i_alpha,
            self.x,
            self.y,
        )


def _order_bound(field):
    if field.kind == "cyclotomic":
        n = field.param
        return n if n % 2 == 0 else 2 * n
    return field.default_order_bound()


def _conj_step(field, cur, k, b, prec):
    """Conjugate by t + b t^k and return the new image series."""
    f = DiskAutomorphism(LaurentSeries(field, {1: field.one(), k: b}, prec))
    return conjugate(cur, f)


def normalize(auto, prec=None):
    """Two-pass reduction of a disk automorphism to its normal form.

    Pass one conjugates away every coefficient at exponents k with
    k - 1 not divisible by the order n of the linear part; pass two kills
    the remaining exponents above i_alpha except 2 i_alpha - 1.  Each
    elementary conjugation is verified exactly.
    """
    field = auto.field
    if field.char() != 0:
        raise UnsupportedField(
            "normal forms need characteristic zero (got %s)" % field.name()
        )
    if prec is None:
        prec = auto.image.prec if auto.image.prec is not None else DEFAULT_PRECISION
    if prec < 2:
        raise PrecisionExhausted("normalization needs the linear term", required=2)

    cur = DiskAutomorphism(auto.image.truncate(prec))
    zeta = cur.linear_coeff()
    n = field.root_of_unity_order(zeta, bound=_order_bound(field))
    one = field.one()
    total = DiskAutomorphism.identity(field, prec)
    zero = field.zero()

    def kill(k):
        """Remove the coefficient at t^k; the slope zeta - zeta^k is nonzero."""
        nonlocal cur, total
        a_k = cur.image.coeffs.get(k)
        if a_k is None:
            return
        slope = field.sub(zeta, field.pow(zeta, k))
        b = field.neg(field.div(a_k, slope))
        f = DiskAutomorphism(LaurentSeries(field, {1: one, k: b}, prec))
        cur = conjugate(cur, f)
        total = auto_compose(total, f)
        if not field.is_zero(cur.image.coeffs.get(k, zero)):
            raise NotSolvable("elementary conjugation failed to clear t^%d" % k)

    if n is None:
        # zeta is not a root of unity: every exponent can be cleared
        for k in range(2, prec):
            kill(k)
        nf = DiskAutomorphism(LaurentSeries(field, {1: zeta}, prec))
        return NormalFormInvariants(
            zeta, None, 1, zero, zero, zero, total, nf, prec
        )

    # pass one: exponents k with n not dividing k - 1
    for k in range(2, prec):
        if (k - 1) % n != 0:
            kill(k)

    support = [k for k in sorted(cur.image.coeffs) if k >= 2]
    if not support:
        # identity to working precision (after removing the linear part)
        nf = DiskAutomorphism(LaurentSeries(field, {1: zeta}, prec))
        return NormalFormInvariants(
            zeta, n, inf, zero, zero, zero, total, nf, prec
        )

    i_alpha = support[0]
    if prec < 2 * i_alpha:
        raise PrecisionExhausted(
            "normal form at contact order %d needs precision 2*%d"
            % (i_alpha, i_alpha),
            required=2 * i_alpha,
        )
    x = cur.image.coeffs[i_alpha]

    # pass two: surviving exponents are i_alpha and 2 i_alpha - 1; the
    # dependence of the target coefficient on the conjugation parameter is
    # affine, so one probe determines the slope (solved by secant, then
    # verified exactly)
    for m in range(i_alpha + 1, prec):
        if (m - 1) % n != 0 or m == 2 * i_alpha - 1:
            continue
        a_m = cur.image.coeffs.get(m)
        if a_m is None:
            continue
        k = m - i_alpha + 1
        probe = _conj_step(field, cur, k, one, prec)
        a_probe = probe.image.coeffs.get(m, zero)
        slope = field.sub(a_probe, a_m)
        if field.is_zero(slope):
            raise NotSolvable(
                "coefficient at t^%d does not react to conjugation at t^%d"
                % (m, k)
            )
        b = field.neg(field.div(a_m, slope))
        f = DiskAutomorphism(LaurentSeries(field, {1: one, k: b}, prec))
        cur = conjugate(cur, f)
        total = auto_compose(total, f)
        if not field.is_zero(cur.image.coeffs.get(m, zero)):
            raise NotSolvable("affine solve failed to clear t^%d" % m)

    y_num = cur.image.coeffs.get(2 * i_alpha - 1, zero)
    y = field.div(y_num, field.mul(x, x))
    expected = LaurentSeries(
        field,
        {1: zeta, i_alpha: x, 2 * i_alpha - 1: y_num},
        prec,
    )
    if cur.image != expected:
        raise NotSolvable("reduction left unexpected coefficients")

    d = i_alpha - 1
    x_class = x
    if d >= 1:
        try:
            ok, _ = field.is_dth_power(x, d)
            if ok:
                x_class = one
        except UnsupportedField:
            pass
    return NormalFormInvariants(
        zeta, n, i_alpha, x, y, x_class, total, DiskAutomorphism(expected), prec
    )


def conjugate_test(a, b, prec=None):
    """Decide conjugacy of two automorphisms over the same field.

    Returns "conjugate", "not_conjugate" or "undecided" (the latter only
    when the x-class comparison is not decidable over the field).
    """
    if a.field != b.field:
        raise FieldMismatch("automorphisms over different fields")
    na = normalize(a, prec)
    nb = normalize(b, prec)
    field = a.field
    if na.zeta != nb.zeta or na.n != nb.n or na.i_alpha != nb.i_alpha:
        return "not_conjugate"
    if na.i_alpha == inf or na.n is None:
        return "conjugate"
    if na.y != nb.y:
        return "not_conjugate"
    if na.x == nb.x:
        return "conjugate"
    d = na.i_alpha - 1
    if d == 0:
        return "conjugate" if na.x == nb.x else "not_conjugate"
    q = field.div(na.x, nb.x)
    try:
        ok, _ = field.is_dth_power(q, d)
    except UnsupportedField:
        return "undecided"
    return "conjugate" if ok else "not_conjugate"
