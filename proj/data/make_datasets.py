#!/usr/bin/env python3
"""Regenerates the bundled dataset snapshots.

The snapshots are synthetic draws from the study designs documented in
README.md, produced with fixed seeds so the files are reproducible
byte-for-byte. Run from the data/ directory:

    python3 make_datasets.py
"""

import numpy as np


def logistic(x):
    return 1.0 / (1.0 + np.exp(-x))


def write_csv(name, header, rows):
    with open(name, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(row) + "\n")
    print(f"{name}: {len(rows)} rows")


def fmt(x):
    if float(x) == int(x):
        return str(int(x))
    return repr(float(x))


def make_epilepsy(rng):
    n, visits = 59, 4
    treated = rng.permutation(np.array([1] * 31 + [0] * 28))
    base = np.maximum(6, np.round(np.exp(rng.normal(3.1, 0.7, size=n)))).astype(int)
    age = rng.integers(18, 43, size=n)
    b = rng.normal(0.0, 0.5, size=n)
    log_age = np.log(age)
    age_c = log_age - log_age.mean()
    base_cov = np.log(base / 4.0)
    beta = dict(icpt=-0.75, base=0.95, trt=-0.9, age=0.45, base_trt=0.35, v4=-0.1)
    rows = []
    for i in range(n):
        for v in range(1, visits + 1):
            eta = (
                beta["icpt"]
                + beta["base"] * base_cov[i]
                + beta["trt"] * treated[i]
                + beta["age"] * age_c[i]
                + beta["base_trt"] * base_cov[i] * treated[i]
                + beta["v4"] * (v == 4)
                + b[i]
            )
            y = rng.poisson(np.exp(eta))
            rows.append([str(i + 1), str(v), str(y), str(base[i]), str(treated[i]), str(age[i])])
    write_csv("epilepsy.csv", ["id", "visit", "y", "base", "trt", "age"], rows)


def make_toenail(rng):
    n, target_rows = 294, 1908
    treated = rng.permutation(np.array([1] * 147 + [0] * 147))
    u = rng.normal(0.0, 4.0, size=n)
    base_months = np.array([0.0, 1.0, 2.0, 3.0, 6.0, 9.0, 12.0])
    beta = dict(icpt=-1.6, trt=-0.2, t=-0.40, trt_t=-0.14)
    # unbalanced follow-up: drop late visits until exactly target_rows remain
    keep = np.full((n, 7), True)
    order = rng.permutation(n)
    k = 0
    while keep.sum() > target_rows:
        i = order[k % n]
        last = np.max(np.where(keep[i])[0])
        if last > 0:
            keep[i, last] = False
        k += 1
    rows = []
    for i in range(n):
        for v in range(7):
            if not keep[i, v]:
                continue
            month = base_months[v] if v == 0 else base_months[v] + rng.uniform(-0.25, 0.25)
            eta = beta["icpt"] + beta["trt"] * treated[i] + beta["t"] * month \
                + beta["trt_t"] * treated[i] * month + u[i]
            bad = rng.random() < logistic(eta)
            severity = rng.integers(2, 4) if bad else rng.integers(0, 2)
            rows.append([str(i + 1), str(v + 1), repr(round(float(month), 3)), str(treated[i]),
                         str(severity)])
    assert len(rows) == target_rows, len(rows)
    write_csv("toenail.csv", ["id", "visit", "month", "trt", "severity"], rows)


def make_polypharmacy(rng):
    n, years = 500, 7
    gender = rng.integers(0, 2, size=n)
    race = (rng.random(n) < 0.35).astype(int)
    age0 = rng.integers(10, 19, size=n)
    u = rng.normal(0.0, 1.2, size=n)
    rows = []
    for i in range(n):
        for year in range(1, years + 1):
            age = age0[i] + year - 1
            mhv = int(rng.poisson(3.0 * np.exp(rng.normal(0.0, 0.8))))
            inpt = int(rng.random() < 0.08)
            mhv1, mhv2, mhv3 = int(1 <= mhv <= 5), int(6 <= mhv <= 14), int(mhv >= 15)
            eta = (-2.4 + 0.7 * gender[i] + 0.5 * race[i] + 0.06 * age
                   + 0.4 * mhv1 + 0.9 * mhv2 + 1.4 * mhv3 + 0.8 * inpt + u[i])
            y = int(rng.random() < logistic(eta))
            rows.append([str(i + 1), str(year), str(y), str(gender[i]), str(race[i]),
                         str(age), str(mhv), str(inpt)])
    write_csv("polypharmacy.csv", ["id", "year", "y", "gender", "race", "age", "mhv", "inptmhv"],
              rows)


def make_rates(rng, name, n_rates, r0, lam, phi, sigma):
    b = rng.normal(0.0, 1.0 / np.sqrt(1.0 - phi * phi))
    rates = [r0]
    for _ in range(n_rates - 1):
        y = rng.normal(0.0, 1.0) * np.exp(0.5 * (lam + sigma * b))
        rates.append(rates[-1] * np.exp(y / 100.0))
        b = phi * b + rng.normal(0.0, 1.0)
    rows = [[repr(round(float(r), 6))] for r in rates]
    write_csv(name, ["rate"], rows)


def main():
    make_epilepsy(np.random.default_rng(20160901))
    make_toenail(np.random.default_rng(20160902))
    make_polypharmacy(np.random.default_rng(20160903))
    make_rates(np.random.default_rng(20160904), "gbpusd.csv", 946, 1.45, -0.8, 0.98, 0.15)
    make_rates(np.random.default_rng(20160905), "demusd.csv", 1867, 1.95, -0.6, 0.985, 0.12)


if __name__ == "__main__":
    main()
