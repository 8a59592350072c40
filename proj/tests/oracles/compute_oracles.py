"""Independent reference values for the unit tests (direct summation, numpy lstsq, mpmath)."""
from fractions import Fraction as F
import numpy as np
import mpmath as mp

mp.mp.dps = 40


def moments(y, x):
    n = len(y)
    my = sum(map(F, y)) / n
    mx = sum(map(F, x)) / n
    vy = sum((F(a) - my) ** 2 for a in y) / (n - 1)
    vx = sum((F(b) - mx) ** 2 for b in x) / (n - 1)
    c = sum((F(a) - my) * (F(b) - mx) for a, b in zip(y, x)) / (n - 1)
    return my, mx, vy, vx, c


def show(label, vals):
    print(label, ["%.17g" % float(v) for v in vals])


# summarize_group on the four-point treatment sample
show("group4", moments(["1.3", "2.7", "0.4", "3.1"], ["0.2", "1.1", "-0.5", "0.9"]))

# summarize_full on a six-point mixed dataset
y6 = ["2.5", "-1.0", "0.75", "3.25", "4.0", "-0.5"]
x6 = ["1.0", "0.5", "-2.0", "1.5", "3.0", "0.25"]
show("full6", moments(y6, x6))

# theta_1 on the symmetric-cancellation dataset
xs = [1, 2, 3, 4, 5, 6]
ys = [1, 2, 3, -4, -5, -6]
my, mx, vy, vx, c = moments(ys, xs)
print("theta1_sym", c / vx, float(c / vx))

# eight-row mixed dataset: delta3 and IR regression
y8 = np.array([3.1, 4.7, 2.2, 5.9, 1.4, 2.8, 0.9, 3.6])
x8 = np.array([0.5, 1.8, -0.3, 2.4, 0.1, 1.2, -0.8, 1.9])
t8 = np.array([1, 1, 1, 1, 0, 0, 0, 0])
xbar = x8.mean()
xc = x8 - xbar
D = np.column_stack([np.ones(8), t8, xc, t8 * xc])
beta, *_ = np.linalg.lstsq(D, y8, rcond=None)
print("ir8 beta", ["%.17g" % b for b in beta])
e = y8 - D @ beta
bread = np.linalg.inv(D.T @ D)
meat = (D * (e ** 2)[:, None]).T @ D
print("ir8 ehw_TT %.17g" % (bread @ meat @ bread)[1, 1])
# delta3 by group slopes, direct
def grp(mask):
    yy, xx = y8[mask], x8[mask]
    th = np.cov(yy, xx, ddof=1)[0, 1] / np.var(xx, ddof=1)
    return yy.mean() - th * (xx.mean() - xbar), th, yy, xx
mt, tht, yt, xt = grp(t8 == 1)
mc, thc, yc, xc_ = grp(t8 == 0)
print("delta3_8 %.17g thetas %.17g %.17g" % (mt - mc, tht, thc))
# residual-based variance_design oracle with group-specific thetas
wt = yt - tht * xt
wc = yc - thc * xc_
print("var_design3_8 %.17g" % (np.var(wt, ddof=1) / 4 + np.var(wc, ddof=1) / 4))
print("correction3_8 %.17g" % ((tht - thc) ** 2 * np.var(x8, ddof=1) / 8))

# AR problem with five points
y5 = np.array([1.0, 2.5, 2.0, 4.5, 3.0])
x5 = np.array([0.0, 1.0, 2.0, 3.0, 1.5])
t5 = np.array([0, 1, 0, 1, 1])
D5 = np.column_stack([np.ones(5), t5, x5 - x5.mean()])
b5 = np.linalg.solve(D5.T @ D5, D5.T @ y5)
print("ar5 beta", ["%.17g" % b for b in b5])

# two-sample p-value on the toy dataset y=(1,2,3,4,5,6,7,8) style
# treatment y=(1,2,3) control y=(5,6,7): delta=-4, var=1/3+1/3
est = mp.mpf(-4)
var = mp.mpf(1) / 3 + mp.mpf(1) / 3
z = est / mp.sqrt(var)
print("toy_p", mp.nstr(mp.erfc(abs(z) / mp.sqrt(2)), 25), "z", mp.nstr(z, 25))
print("p_at_1.96", mp.nstr(mp.erfc(mp.mpf("1.96") / mp.sqrt(2)), 25))
print("q975", mp.nstr(mp.sqrt(2) * mp.erfinv(mp.mpf("0.95")), 25))

# HC1..HC3 on the eight-row IR fit
H = D @ bread @ D.T
h = np.diag(H)
for name, w in [("HC1", np.full(8, 8 / (8 - 4))), ("HC2", 1 / (1 - h)), ("HC3", 1 / (1 - h) ** 2)]:
    m = (D * (w * e ** 2)[:, None]).T @ D
    print("ir8 ehw_TT_%s %.17g" % (name, (bread @ m @ bread)[1, 1]))

# pooled theta on the unbalanced five-point data (n_t = 3, n_c = 2), exact
def grp_moments(mask):
    return moments([str(float(v)) for v in y5[mask]], [str(float(v)) for v in x5[mask]])
_, _, _, vxt, ct = grp_moments(t5 == 1)
_, _, _, vxc, cc = grp_moments(t5 == 0)
th2 = (ct / 3 + cc / 2) / (vxt / 3 + vxc / 2)
print("pooled5", th2, "%.17g" % float(th2))

# population quantities of a five-unit table at theta = 0.5
yt_p = [F(v) for v in ["2.0", "3.5", "1.0", "4.0", "2.5"]]
yc_p = [F(v) for v in ["1.0", "2.0", "1.5", "2.5", "0.5"]]
x_p = [F(v) for v in ["0.5", "1.5", "-1.0", "2.0", "0.0"]]
th = F(1, 2)
xb = sum(x_p) / 5
wt_p = [a - th * (b - xb) for a, b in zip(yt_p, x_p)]
wc_p = [a - th * (b - xb) for a, b in zip(yc_p, x_p)]
def s2(v):
    m = sum(v) / len(v)
    return sum((a - m) ** 2 for a in v) / (len(v) - 1)
dS = sum(yt_p) / 5 - sum(yc_p) / 5
print("popq", ["%.17g" % float(v) for v in
               [dS, sum(wt_p) / 5, sum(wc_p) / 5, s2(wt_p), s2(wc_p),
                s2([a - b for a, b in zip(wt_p, wc_p)])]])
