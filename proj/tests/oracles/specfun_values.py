"""Reference values for the special-function and Askey-Wilson unit tests.

Evaluated with mpmath at 40 digits; the printed numbers are pasted into the
C++ tests.
"""
import mpmath as mp

mp.mp.dps = 40


def H(x):
    x = mp.mpf(x)
    return mp.exp(x * x) * mp.erfc(x)


def calH(a, c):
    a, c = mp.mpf(a), mp.mpf(c)
    r2 = mp.sqrt(2)
    if a == c:
        return (1 + a * a) * H(a / r2) - mp.sqrt(2 / mp.pi) * a
    return (a * H(a / r2) - c * H(c / r2)) / (a - c)


def qp(a, q, n=None):
    if n is None:
        return mp.qp(a, q)
    return mp.qp(a, q, n)


def aw_density(y, a, b, c, d, q):
    th = mp.acos(y)
    e = mp.exp(1j * th)
    num = qp(q, q) * qp(a * b, q) * qp(a * c, q) * qp(a * d, q) * qp(b * c, q) * qp(b * d, q) * qp(c * d, q)
    den = 2 * mp.pi * qp(a * b * c * d, q) * mp.sqrt(1 - y * y)
    w = abs(qp(e * e, q)) ** 2 / abs(qp(a * e, q) * qp(b * e, q) * qp(c * e, q) * qp(d * e, q)) ** 2
    return mp.re(num / den) * w


def atom_masses(e, others, q):
    """Masses of the atoms generated by e, straight from the product formulas."""
    b, c, d = others
    p0 = (qp(1 / e**2, q) * qp(b * c, q) * qp(b * d, q) * qp(c * d, q)) / (
        qp(b / e, q) * qp(c / e, q) * qp(d / e, q) * qp(e * b * c * d, q))
    out = []
    j = 0
    while abs(e * q**j) >= 1:
        if j == 0:
            m = p0
        else:
            m = p0 * (qp(e**2, q, j) * qp(e * b, q, j) * qp(e * c, q, j) * qp(e * d, q, j)) * (1 - e**2 * q**(2 * j)) / (
                (qp(q, q, j) * qp(q * e / b, q, j) * qp(q * e / c, q, j) * qp(q * e / d, q, j)) * (1 - e**2)) * (q / (e * b * c * d))**j
        y = (e * q**j + 1 / (e * q**j)) / 2
        out.append((y, mp.re(m)))
        j += 1
        if q == 0:
            break
    return out


if __name__ == "__main__":
    print("H values")
    for x in ["-10", "-3", "-1", "-0.5", "0", "0.3", "0.74", "0.76", "1", "1.5", "2", "5", "10", "20", "40"]:
        print(x, mp.nstr(H(mp.mpf(x)), 20))
    print("calH")
    for a, c in [(1, -2), (0.5, -1), (-1, 0.25), (0.3, 0.3), (2, 1)]:
        print(a, c, mp.nstr(calH(a, c), 20))
    print("qpoch infinite")
    for a, q in [(0.5, 0.3), (-0.7, 0.6), (0.99, 0.9), (2.5, 0.25)]:
        print(a, q, mp.nstr(qp(mp.mpf(a), mp.mpf(q)), 20))
    print("aw density, complex pair")
    a, b, q = mp.mpf("0.5"), mp.mpf("-0.3"), mp.mpf("0.4")
    c = mp.mpf("0.4") * mp.exp(0.7j)
    d = mp.conj(c)
    for y in ["-0.9", "-0.2", "0.3", "0.95"]:
        print(y, mp.nstr(aw_density(mp.mpf(y), a, b, c, d, q), 20))
    print("atoms (5, -0.2, 0.3, -0.4; q=0.3)")
    for y, m in atom_masses(mp.mpf(5), (mp.mpf("-0.2"), mp.mpf("0.3"), mp.mpf("-0.4")), mp.mpf("0.3")):
        print(mp.nstr(y, 20), mp.nstr(m, 20))
    print("atoms of pi_1 for shock set A=1.3 B=-0.2 C=1.1 D=-0.2 q=0.25")
    A, B, C, D, q = [mp.mpf(v) for v in ("1.3", "-0.2", "1.1", "-0.2", "0.25")]
    for y, m in atom_masses(A, (B, C, D), q) + atom_masses(C, (A, B, D), q):
        print(mp.nstr(y, 20), mp.nstr(m, 20))
