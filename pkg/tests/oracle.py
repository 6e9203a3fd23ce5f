"""Independent symbolic oracle (sympy) for frozen reference values.

Nothing here touches the package's dual-number engine: expressions are
differentiated symbolically and evaluated at exact rational points.
"""

import sympy as sp

x, p = sp.symbols("x p", real=True)
x1, x2, p1, p2 = sp.symbols("x1 x2 p1 p2", real=True)

# fitted ladder multipliers, exact
ALPHA = (sp.Integer(1), sp.Rational(1, 3), sp.Rational(1, 3), sp.Rational(2, 3),
         sp.Rational(1, 3), sp.Rational(13, 27), sp.Rational(2, 27), sp.Rational(14, 27))


def potential(w, b, eps, var=x):
    w, b = sp.nsimplify(w), sp.nsimplify(b)
    s = sp.sqrt(b + var**2)
    return w**2 / 18 * (2 * b + 5 * var**2 + 4 * eps * var * s)


def hamiltonian_1d(w, b, eps):
    return p**2 / 2 + potential(w, b, eps)


def ladder(w, b, eps, alpha=ALPHA, X=x, P=p):
    a = alpha
    w, b = sp.nsimplify(w), sp.nsimplify(b)
    s = sp.sqrt(b + X**2)
    c2 = a[0] * w * X
    c1 = w**2 * (a[1] * b + a[2] * X**2 + a[3] * eps * X * s)
    c0 = w**3 * (a[4] * b * X + a[5] * X**3 + a[6] * eps * b * s + a[7] * eps * X**2 * s)
    return P**3 - sp.I * c2 * P**2 + c1 * P - sp.I * c0


def bracket_1d(f, g):
    return sp.diff(f, x) * sp.diff(g, p) - sp.diff(f, p) * sp.diff(g, x)


def bracket_2d(f, g):
    return sum(sp.diff(f, q) * sp.diff(g, m) - sp.diff(f, m) * sp.diff(g, q)
               for q, m in ((x1, p1), (x2, p2)))


def at(expr, **vals):
    """High-precision complex value of ``expr`` at rational coordinates."""
    subs = {sp.Symbol(k, real=True): sp.nsimplify(v) for k, v in vals.items()}
    return complex(sp.N(expr.subs(subs), 30))


def q_true(w, b):
    """Exact A+A- as a polynomial in H (coefficients ascending)."""
    H = sp.Symbol("H")
    w, b = sp.nsimplify(w), sp.nsimplify(b)
    Q = sp.Rational(2, 729) * (18 * H - b * w**2) ** 2 * (9 * H + b * w**2)
    return [sp.nsimplify(c) for c in reversed(sp.Poly(sp.expand(Q), H).all_coeffs())]
