#!/usr/bin/env python3
"""Independent oracle for p-adic logarithms of units in Z[x]/(f).

For each fixture in fixtures/leopoldt/ and each listed prime, computes
log(u) in (Z[x]/(f)) (x) Z_p to 60 digits two ways:

  * the Mercator series of log(w), with w = u^e and e the multiplicative
    order of u modulo p (found by brute force), divided by e;
  * the limit (w^(p^K) - 1) / p^K for large K, divided by e.

The two must agree mod p^60.  The results reduced mod p^20 are written to
fixtures/golden/leopoldt_logs.json, which the Rust tests compare against.
"""

import json
import sys
from pathlib import Path

HIGH = 60
FROZEN = 20
GUARD = 12


def polymulmod(a, b, f, mod):
    n = len(f) - 1
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    # f is monic: x^n = -(f_0 + ... + f_{n-1} x^{n-1})
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i in range(n):
                prod[d - n + i] -= c * f[i]
    return [c % mod for c in prod[:n]]


def polypow(a, e, f, mod):
    n = len(f) - 1
    result = [1] + [0] * (n - 1)
    base = [c % mod for c in a]
    while e:
        if e & 1:
            result = polymulmod(result, base, f, mod)
        base = polymulmod(base, base, f, mod)
        e >>= 1
    return result


def pad(u, n):
    return list(u) + [0] * (n - len(u))


def order_mod_p(u, f, p):
    n = len(f) - 1
    one = [1] + [0] * (n - 1)
    acc = [c % p for c in u]
    e = 1
    while acc != one:
        acc = polymulmod(acc, u, f, p)
        e += 1
        if e > p ** n:
            raise ValueError("not a unit mod p")
    return e


def vp(k, p):
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


def log_series(w, f, p, digits):
    """log(w) mod p^digits for w = 1 mod p, exact integers throughout."""
    n = len(f) - 1
    # work with extra digits to absorb the p-parts of the denominators k
    extra = digits.bit_length() + GUARD
    mod = p ** (digits + extra)
    y = [(c - (1 if i == 0 else 0)) % mod for i, c in enumerate(w)]
    acc = [0] * n
    power = [1] + [0] * (n - 1)
    k = 1
    while True:
        power = polymulmod(power, y, f, mod)
        # k * v(y) - v(k) >= digits + something stops contributing
        if k - vp(k, p) - extra >= digits + 2 and k > 1:
            break
        v = vp(k, p)
        unit = k // p ** v
        inv = pow(unit, -1, mod)
        sign = 1 if k % 2 == 1 else -1
        for i in range(n):
            assert power[i] % p ** v == 0
            acc[i] = (acc[i] + sign * (power[i] // p ** v) * inv) % mod
        k += 1
    return [c % p ** digits for c in acc]


def log_limit(w, f, p, digits):
    """(w^(p^K) - 1) / p^K, which agrees with log(w) to K + 1 digits."""
    kk = digits + 2
    mod = p ** (digits + kk + 2)
    z = [c % mod for c in w]
    for _ in range(kk):
        z = polypow(z, p, f, mod)
    z[0] -= 1
    return [(c // p ** kk) % p ** digits for c in z]


def unit_log(f, u, p, digits):
    n = len(f) - 1
    u = pad(u, n)
    e = order_mod_p(u, f, p)
    w = polypow(u, e, f, p ** (digits + GUARD))
    inv_e = pow(e, -1, p ** digits)
    series = [c * inv_e % p ** digits for c in log_series(w, f, p, digits)]
    limit = [c * inv_e % p ** digits for c in log_limit(w, f, p, digits)]
    if series != limit:
        raise AssertionError(f"oracle disagreement for f={f}, u={u}, p={p}")
    return series


def main(root):
    fixtures = sorted((root / "fixtures" / "leopoldt").glob("*.json"))
    cases = []
    for path in fixtures:
        spec = json.loads(path.read_text())
        f = spec["field"]
        for p in spec["primes"]:
            logs = [unit_log(f, u, p, HIGH) for u in spec["units"]]
            cases.append({
                "fixture": path.name,
                "field": f,
                "units": spec["units"],
                "p": p,
                "digits": FROZEN,
                "logs": [[str(c % p ** FROZEN) for c in row] for row in logs],
            })
    out = root / "fixtures" / "golden" / "leopoldt_logs.json"
    out.parent.mkdir(exist_ok=True)
    out.write_text(json.dumps({"cases": cases}, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(cases)} cases to {out}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent)
