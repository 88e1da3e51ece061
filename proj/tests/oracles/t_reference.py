"""High-precision two-sample Student t-test references.

Writes tests/data/t_reference.tsv with one case per line:
  name<TAB>a values (comma)<TAB>b values (comma)<TAB>t<TAB>df<TAB>p<TAB>d
p is two-tailed, computed with mpmath's regularized incomplete beta at 50
digits. d uses the pooled standard deviation.

Also writes tests/data/ttest_summary_samples.tsv: two 20-value samples with
means 0.196 / 0.120 and pooled sd 0.11515, matching a df=38 comparison.
"""

import random
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50
DATA = Path(__file__).resolve().parent.parent / "data"


def student(a, b):
    a = [mp.mpf(x) for x in a]
    b = [mp.mpf(x) for x in b]
    na, nb = len(a), len(b)
    ma, mb = sum(a) / na, sum(b) / nb
    va = sum((x - ma) ** 2 for x in a) / (na - 1)
    vb = sum((x - mb) ** 2 for x in b) / (nb - 1)
    df = na + nb - 2
    sp = mp.sqrt(((na - 1) * va + (nb - 1) * vb) / df)
    t = (ma - mb) / (sp * mp.sqrt(mp.mpf(1) / na + mp.mpf(1) / nb))
    p = mp.betainc(mp.mpf(df) / 2, mp.mpf(1) / 2, 0, df / (df + t * t), regularized=True)
    d = (ma - mb) / sp
    return t, df, p, d


def textbook():
    cases = {
        "equal_n": ([19.7, 20.4, 21.1, 18.5, 20.9, 19.3], [17.9, 18.6, 19.2, 18.0, 17.5, 18.8]),
        "unequal_n": ([5.1, 4.9, 6.2, 5.8, 6.0, 5.5, 5.3], [4.1, 4.8, 4.5, 5.0]),
        "no_difference": ([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]),
        "negative_t": ([0.12, 0.08, 0.15, 0.10], [0.31, 0.22, 0.27, 0.35, 0.29]),
        "large_t": ([10.0, 10.1, 9.9, 10.05], [1.0, 1.1, 0.9, 1.02]),
        "two_each": ([1.0, 3.0], [2.0, 6.0]),
    }
    rng = random.Random(11)
    for i in range(6):
        na, nb = rng.randint(3, 30), rng.randint(3, 30)
        shift = rng.uniform(-1, 1)
        a = [round(rng.gauss(shift, 1.0), 6) for _ in range(na)]
        b = [round(rng.gauss(0.0, 1.3), 6) for _ in range(nb)]
        cases[f"random_{i}"] = (a, b)
    return cases


def summary_samples():
    """Two n=20 samples with exact target means and a shared sd."""
    rng = random.Random(3)
    sd = mp.mpf("0.11515")
    out = []
    for mean in (mp.mpf("0.196"), mp.mpf("0.120")):
        z = [mp.mpf(rng.gauss(0, 1)) for _ in range(20)]
        zm = sum(z) / 20
        z = [x - zm for x in z]
        zs = mp.sqrt(sum(x * x for x in z) / 19)
        out.append([mean + sd * x / zs for x in z])
    return out


def fmt(x):
    return mp.nstr(x, 30, strip_zeros=False)


def main():
    with open(DATA / "t_reference.tsv", "w") as f:
        for name, (a, b) in textbook().items():
            if a == b:
                continue
            t, df, p, d = student(a, b)
            f.write("\t".join([name, ",".join(map(repr, a)), ",".join(map(repr, b)),
                               fmt(t), str(df), fmt(p), fmt(d)]) + "\n")
    a, b = summary_samples()
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    t, df, p, d = student(a, b)
    with open(DATA / "ttest_summary_samples.tsv", "w") as f:
        f.write("group\tdelta_q\n")
        for x in a:
            f.write(f"rl\t{x!r}\n")
        for x in b:
            f.write(f"baseline\t{x!r}\n")
    print(f"summary samples: t={fmt(t)} df={df} p={fmt(p)} d={fmt(d)}")


if __name__ == "__main__":
    main()
