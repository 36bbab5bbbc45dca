"""Antiderivatives in small towers of characteristic p.

Run with ``python3 demos/integration.py``.
"""

from charp import format_elem, integrate, tower_build

# F_3(X, E) with dE = 2X E: the exponential of X^2 in characteristic 3
t = tower_build({"p": 3, "generators": [{"name": "X", "kind": "base"},
                                       {"name": "E", "kind": "hyperexp", "arg": "2*X"}]})

for src in ("E", "X^3 + 2/X^2", "1/X", "X^2"):
    r = integrate(t, src)
    T = r.extended_tower
    added = ", ".join(f"{name} = log({format_elem(kind.u)})" for name, kind in r.new_generators)
    print(f"integral of {src:<12} = {format_elem(r.value)}" + (f"   [adjoined {added}]" if added else ""))
    assert T.derive(r.value) == T(src)

# the annihilator that drove the computation is returned as a certificate
print("certificate for E:", integrate(t, "E").certificate.format())
