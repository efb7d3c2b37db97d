"""Regenerate the bundled corpus under src/zhatwitt/corpus.

Run from the repository root: ``python3 tools/make_corpus.py``.
"""

import json
from fractions import Fraction
from pathlib import Path

from zhatwitt.falsetheta import PsiCombination, Term
from zhatwitt.plumbing import PlumbingGraph as G
from zhatwitt.qseries import QSeries

OUT = Path(__file__).resolve().parents[1] / "src" / "zhatwitt" / "corpus"


def psi(c, m, r):
    return Term(Fraction(c), "psi", m, r)


def bfun(c, m, r):
    return Term(Fraction(c), "B", m, r)


def form(label, prefactor, terms, rep, convention):
    data = PsiCombination(Fraction(prefactor), tuple(terms), str(label)).to_json()
    data.update({"label": label, "class_rep": list(rep), "convention": convention})
    return data


CUP = ("H_1 = Z/2, so Theta^2 is the Bockstein of Theta and Theta^3 generates "
       "H^3(Y; Z/2); hence 2 Theta^3 = 2 mod 4")

SEIFERT = {
    "s3_m2_trefoil": dict(
        graph=G.star(-1, [[-2], [-3], [-8]]),
        description="-2 surgery on the right-handed trefoil, M(-1 | 1/2, 1/3, 1/8)",
        closed_forms=[
            form(0, "71/96", [psi(1, 24, 1), psi(-1, 24, 17)], (1, 1, 1, 1), "folded"),
            form(1, "71/96", [psi(-1, 24, 7), psi(1, 24, 23)], (1, 1, 1, -1), "folded")],
        two_theta_cubed=[{"theta": [0, 1, 0, 1], "value": 2, "source": "input", "reason": CUP}]),
    "s3_m3_trefoil": dict(
        graph=G.star(-1, [[-2], [-3], [-9]]),
        description="-3 surgery on the right-handed trefoil, M(-1 | 1/2, 1/3, 1/9)",
        closed_forms=[
            form(0, "71/72", [psi(1, 18, 1), psi(1, 18, 17)], (1, 1, 1, 1), "folded"),
            form(1, "71/72", [psi(-1, 18, 5), psi(-1, 18, 13)], (1, 1, 1, -1), "folded")]),
    "s3_p3_fig8": dict(
        graph=G.star(-1, [[-3], [-3], [-4]]),
        description="+3 surgery on the figure-eight knot, M(-1 | 1/3, 1/3, 1/4)",
        closed_forms=[
            form(0, "-1/48", [psi(1, 12, 1), psi(-1, 12, 7)], (1, 1, 1, 1), "folded"),
            form(1, "-1/48", [psi(-1, 12, 9)], (1, 1, -1, 5), "raw")]),
    "s3_p2_fig8": dict(
        graph=G.star(-1, [[-2], [-4], [-5]]),
        description="+2 surgery on the figure-eight knot, M(-1 | 1/2, 1/4, 1/5)",
        closed_forms=[
            form(0, "19/80", [psi(1, 20, 1), psi(-1, 20, 9)], (1, 1, 1, 1), "folded"),
            form(1, "19/80", [psi(-1, 20, 11), psi(1, 20, 19)], (1, 1, -1, 5), "folded")],
        literal_forms=[
            form(0, "19/80", [psi(1, 12, 1), psi(-1, 12, 9)], (1, 1, 1, 1), "folded"),
            form(1, "19/80", [psi(-1, 12, 11), psi(1, 12, 19)], (1, 1, -1, 5), "folded")],
        two_theta_cubed=[{"theta": [0, 1, 1, 0], "value": 2, "source": "input", "reason": CUP}]),
    "s3_m3_52": dict(
        graph=G.star(-2, [[-2, -2], [-2, -2], [-2, -3]]),
        description="-3 surgery on the knot 5_2, M(-2 | 2/3, 2/3, 3/5)",
        closed_forms=[
            form(0, "-16/15", [psi(1, 15, 2), psi(-1, 15, 8)], (1, 0, 1, 0, 1, 0, 1), "folded"),
            form(1, "-16/15", [psi(-1, 15, 12)], (1, 0, 3, 0, 1, 0, -3), "raw")]),
    "seifert_4fiber": dict(
        graph=G.star(-2, [[-2], [-2, -2], [-3, -2], [-3, -2]]),
        description="M(-2 | 1/2, 2/3, 2/5, 2/5)",
        closed_forms=[
            form(0, "-109/120", [psi(1, 30, 23), bfun(-1, 30, 7), bfun(1, 30, 13),
                                 bfun(-1, 30, 17), bfun(1, 30, 23)], (0, 1, 0, 1, 0, 1, 0, 1), "folded"),
            form(1, "-109/120", [], (0, 1, 0, 1, 0, -1, 0, 3), "folded"),
            form(2, "-109/120", [bfun(2, 30, 5), bfun(-2, 30, 25)], (0, 1, 0, 1, 0, -3, 0, 5), "folded")]),
}

ZHS = {
    "e8": ((2, 3, 5), "T(2,-3)", 1),
    "sigma_2_3_7": ((2, 3, 7), "T(2,3)", 1),
    "sigma_2_3_11": ((2, 3, 11), "T(2,-3)", 2),
    "sigma_2_3_13": ((2, 3, 13), "T(2,3)", 2),
    "sigma_2_3_17": ((2, 3, 17), "T(2,-3)", 3),
    "sigma_2_3_19": ((2, 3, 19), "T(2,3)", 3),
}

# relative exponent -> coefficient inside -q^{-1/2}(...)
HYPERBOLIC_PREFIX = {0: 1, 1: -1, 3: 2, 6: -2, 9: 1, 10: 3, 11: 1, 14: -1, 15: -3, 16: -1, 19: 2, 20: 2}


def dump(name, data):
    (OUT / f"{name}.json").write_text(json.dumps(data, indent=1) + "\n")


def main():
    manifest = {}
    for p in range(1, 25):
        g = G.lens(p)
        dump(g.name, g.to_json())
        manifest[g.name] = {"description": f"-L({p},1), a single vertex of framing -{p}"}
    for name, ((a1, a2, a3), knot, r) in ZHS.items():
        g = G.brieskorn(a1, a2, a3)
        dump(name, g.to_json())
        manifest[name] = {"description": f"Sigma({a1},{a2},{a3})",
                          "surgery": {"knot": knot, "r": r}}
    for name, entry in SEIFERT.items():
        dump(name, entry["graph"].to_json())
        manifest[name] = {k: v for k, v in entry.items() if k != "graph"}
    # -1/2 surgery on the figure-eight knot; only a prefix of its series is known here
    coeffs = {n: -c for n, c in HYPERBOLIC_PREFIX.items()}
    s = QSeries(Fraction(-1, 2), 1, {n: Fraction(c) for n, c in coeffs.items()}, Fraction(21))
    dump("s3_m1_2_fig8_prefix", s.to_json())
    manifest["s3_m1_2_fig8"] = {
        "description": "-1/2 surgery on the figure-eight knot (hyperbolic)",
        "series": "s3_m1_2_fig8_prefix.json",
        "isolated_terms": [[1600, "-2335418615"]],
        "reference_values": {"normalized_arg": -0.17, "modulus": 3.248, "tau6": 1.62}}
    (OUT / "manifolds.json").write_text(json.dumps(manifest, indent=1) + "\n")


if __name__ == "__main__":
    main()
