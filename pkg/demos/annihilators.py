"""p-polynomial annihilators and the Carlitz coefficients of exponentials.

Run with ``python3 demos/annihilators.py``.
"""

from charp import carlitz_coefficient, format_elem, joint_annihilator, p_annihilator, tower_build

t = tower_build({"p": 3, "generators": [{"name": "X", "kind": "base"},
                                       {"name": "E", "kind": "hyperexp", "arg": "2*X"}]})

for y in ("X", "E", "X*E + 1/X"):
    P = p_annihilator(t, y)
    print(f"annihilator of {y:<10}: {P.format()}")
    assert P.apply(t(y)) == 0

P = joint_annihilator(t, ["X", "E"])
print("joint annihilator of X and E:", P.format())

# d^(3^r)(E)/E for an exponential of X^2
s = tower_build({"p": 3, "generators": [{"name": "X", "kind": "base"},
                                       {"name": "E", "kind": "exp", "arg": "X^2"}]})
for r in range(3):
    c = carlitz_coefficient(s, s("X^2"), r)
    assert s.derive_n(s("E"), 3**r) == c * s("E")
    print(f"d^{3**r}(E)/E = {format_elem(c)}")
