#!/usr/bin/env python3
# Copyright (c) 2026, the swnprior authors.
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the synthetic test fixtures and prints oracle values.

The fixtures are deterministic (fixed RNG seed); committed outputs must match
a fresh run byte for byte. Oracle values printed at the end are frozen into
the C++ tests; recompute them here rather than trusting the library code.
"""

import random
from fractions import Fraction

OUT = __file__.rsplit("/", 1)[0]


# ---------------------------------------------------------------------------
# independent formula implementations (kept deliberately naive)

def f_fs(v):
    return v[0]


def f_mean(v):
    return sum(v) / len(v)


def f_max(v):
    return max(v)


def f_median(v):
    s = sorted(v)
    n = len(s)
    return (s[(n - 1) // 2] + s[n // 2]) / 2


def f_w1(v):
    ws = [Fraction(1, 2 ** (i + 1)) for i in range(len(v))]
    return float(sum(w * Fraction(x) for w, x in zip(ws, v)) / sum(ws))


def f_w2(v):
    ws = [Fraction(1, i + 1) for i in range(len(v))]
    return float(sum(w * Fraction(x) for w, x in zip(ws, v)) / sum(ws))


def drop_joint_zeros(p, q):
    pairs = [(a, b) for a, b in zip(p, q) if a != 0 or b != 0]
    if not pairs:
        return [], []
    return [a for a, _ in pairs], [b for _, b in pairs]


def two_sided(formula, p, q):
    if formula == "fs":
        return f_fs(p), f_fs(q)
    if formula == "mean":
        return f_mean(p), f_mean(q)
    if formula == "max":
        return f_max(p), f_max(q)
    if formula == "median":
        return f_median(p), f_median(q)
    if formula == "w1":
        return f_w1(p), f_w1(q)
    if formula == "w2":
        return f_w2(p), f_w2(q)
    if formula == "w1s":
        return f_w1(sorted(p, reverse=True)), f_w1(sorted(q, reverse=True))
    if formula == "w2s":
        return f_w2(sorted(p, reverse=True)), f_w2(sorted(q, reverse=True))
    if formula in ("w1n", "w2n", "w1sn", "w2sn"):
        dp, dq = drop_joint_zeros(p, q)
        if not dp:
            return 0.0, 0.0
        if formula.endswith("sn"):
            dp, dq = sorted(dp, reverse=True), sorted(dq, reverse=True)
        return (f_w1(dp), f_w1(dq)) if formula.startswith("w1") else (f_w2(dp), f_w2(dq))
    if formula == "uniw":
        sp = [a for a, b in zip(p, q) if a >= b and a > 0]
        sn = [b for a, b in zip(p, q) if b >= a and b > 0]
        return (sum(sp) / len(sp) if sp else 0.0, sum(sn) / len(sn) if sn else 0.0)
    raise ValueError(formula)


def f_uni(p, q):
    sp = [a for a, b in zip(p, q) if a >= b and a > 0]
    sn = [b for a, b in zip(p, q) if b >= a and b > 0]
    pm = sum(sp) / len(sp) if sp else 0.0
    nm = sum(sn) / len(sn) if sn else 0.0
    if pm > nm:
        return pm
    if nm > pm:
        return -nm
    if len(sp) > len(sn):
        return pm
    if len(sn) > len(sp):
        return -nm
    return 0.0


def variant_m(pos, neg):
    return pos if pos >= neg else -neg


TWO_SIDED = ["fs", "mean", "max", "median", "w1", "w2", "w1s", "w2s",
             "w1n", "w2n", "w1sn", "w2sn", "uniw"]


# ---------------------------------------------------------------------------
# synthetic lexicon

COLD_SENSES = [(0.0, 0.75), (0.0, 0.75), (0.0, 0.0), (0.125, 0.375), (0.625, 0.0)]

WORDS = [
    ("glad", "a", 0.80), ("cheerful", "a", 0.85), ("bright", "a", 0.55),
    ("warm", "a", 0.50), ("gentle", "a", 0.60), ("brave", "a", 0.70),
    ("calm", "a", 0.45), ("sweet", "a", 0.65), ("bitter", "a", -0.60),
    ("cruel", "a", -0.85), ("grim", "a", -0.70), ("bleak", "a", -0.55),
    ("rotten", "a", -0.75), ("weary", "a", -0.40), ("harsh", "a", -0.50),
    ("yellow", "anv", 0.15), ("quiet", "ar", 0.30), ("loud", "ar", -0.20),
    ("joy", "n", 0.90), ("delight", "nv", 0.80), ("comfort", "nv", 0.55),
    ("triumph", "nv", 0.75), ("honor", "nv", 0.60), ("mercy", "n", 0.50),
    ("grief", "n", -0.85), ("misery", "n", -0.80), ("menace", "nv", -0.65),
    ("poison", "nv", -0.70), ("wound", "nv", -0.60), ("dread", "nv", -0.75),
    ("peril", "n", -0.55), ("ruin", "nv", -0.65), ("praise", "nv", 0.70),
    ("cherish", "v", 0.75), ("soothe", "v", 0.55), ("rescue", "nv", 0.65),
    ("betray", "v", -0.80), ("punish", "v", -0.55), ("decay", "nv", -0.50),
    ("shine", "nv", 0.40), ("stumble", "nv", -0.30), ("drift", "nv", -0.05),
    ("murky", "a", -0.35), ("radiant", "a", 0.75), ("solemn", "a", -0.15),
    ("table", "n", 0.0), ("window", "n", 0.0), ("paper", "n", 0.0),
]

EIGHTHS = [i / 8 for i in range(9)]


def to_eighths(x):
    return min(EIGHTHS, key=lambda e: abs(e - x))


def make_senses(rng, valence, n):
    senses = []
    for _ in range(n):
        drift = rng.uniform(-0.25, 0.25)
        v = valence + drift
        if rng.random() < 0.2:
            senses.append((0.0, 0.0))  # empty senses are common in the wild
            continue
        pos = to_eighths(max(0.0, v) * rng.uniform(0.6, 1.2))
        neg = to_eighths(max(0.0, -v) * rng.uniform(0.6, 1.2))
        senses.append((pos, neg))
    return senses


def build_lexicon(seed, version):
    rng = random.Random(seed)
    rows = {}  # (lemma, pos) -> [(p, n), ...]
    for word, pos_tags, valence in WORDS:
        for pos in pos_tags:
            n = rng.randint(1, 6)
            shift = rng.uniform(-0.1, 0.1) if version == 3 else 0.0
            if valence == 0.0:
                senses = [(0.0, 0.0)] * n  # all-zero in both lexica by design
            else:
                senses = make_senses(rng, valence + shift, n)
                if all(p == 0 and q == 0 for p, q in senses):
                    senses[0] = (to_eighths(max(0.0, valence)),
                                 to_eighths(max(0.0, -valence)))
    # cold#a carries the hand-checked sense profile in the v1 lexicon
            rows[(word, pos)] = senses
    if version == 1:
        rows[("cold", "a")] = COLD_SENSES
        rows[("frosty", "a")] = [(0.0, 0.5), (0.125, 0.25)]  # v1-only lemma
    else:
        rows[("cold", "a")] = [(0.0, 0.625), (0.25, 0.125), (0.0, 0.375),
                               (0.0, 0.0), (0.75, 0.0)]
        rows[("gleam", "n")] = [(0.375, 0.0), (0.25, 0.0)]  # v3-only lemma
    return rows


def write_lexicon(rows, path):
    with open(path, "w") as f:
        f.write("# synthetic sentiment lexicon fixture; scores are eighths\n")
        f.write("POS\tID\tPosScore\tNegScore\tSynsetTerms\n")
        idx = 0
        for (word, pos) in sorted(rows):
            for sense_no, (p, n) in enumerate(rows[(word, pos)], start=1):
                idx += 1
                f.write(f"{pos}\t{idx:08d}\t{p:g}\t{n:g}\t{word}#{sense_no}\n")


# ---------------------------------------------------------------------------
# gold standards

def write_anew(rows_v1, path, seed):
    rng = random.Random(seed)
    lemmas = sorted({w for (w, _p) in rows_v1})
    by_word = {w: v for w, _tags, v in WORDS}
    with open(path, "w") as f:
        f.write("Word,ValMn,ValSD,ValMn_M,ValMn_F\n")
        for word, _tags, val in WORDS:
            if by_word[word] == 0.0 and word != "table":
                continue  # keep one all-zero word to exercise the filter
            mean = 5.0 + 4.0 * val * 0.85 + rng.uniform(-0.3, 0.3)
            mean = min(8.8, max(1.2, mean))
            sd = rng.uniform(0.8, 2.4)
            delta = rng.uniform(-0.5, 0.5)
            male = min(8.9, max(1.1, mean + delta))
            female = min(8.9, max(1.1, mean - delta))
            f.write(f"{word},{mean:.2f},{sd:.2f},{male:.2f},{female:.2f}\n")
        f.write("cold,3.10,1.21,3.40,2.80\n")          # hand-checked lemma
        f.write("coldest,2.90,1.40,3.05,2.75\n")        # aligns via lemma map
        f.write("zzgibberish,4.00,1.00,4.10,3.90\n")    # in neither lexicon
        f.write("frosty,3.90,1.10,4.00,3.80\n")         # v1-only -> unaligned
        f.write("overjoyed,9.90,0.50,9.90,9.90\n")      # off the 1-9 scale
        f.write("halfrow,,,,\n")                        # missing valence mean
    _ = lemmas


def write_anew_small(path):
    """Tiny valence file with exactly known alignment accounting."""
    with open(path, "w") as f:
        f.write("Description,Valence Mean,Valence SD\n")
        f.write("cold,3.10,1.21\n")       # aligns, 1 PoS (a)
        f.write("yellow,5.95,1.40\n")     # aligns, 3 PoS (a,n,v)
        f.write("table,4.98,0.90\n")      # aligns, all-zero filtered
        f.write("zzgibberish,4.00,1.00\n")  # unaligned
        f.write("joy,8.21,1.10\n")        # aligns, 1 PoS (n)
        f.write("overjoyed,9.90,0.50\n")  # skipped: out of range
    # words_in = 5 (skipped row never becomes a record)
    # aligned = 4, unaligned = 1
    # expanded = 1 + 3 + 1 + 1 = 6; table#n filtered -> kept = 5


def write_gi(path, seed):
    rng = random.Random(seed)
    tag_for = {"a": "Modif", "n": "Noun", "v": "SUPV", "r": "Modif"}
    with open(path, "w") as f:
        f.write("Entry\tSource\tPositiv\tNegativ\tOthtags\n")
        for word, pos_tags, val in WORDS:
            if abs(val) < 0.12:
                continue  # near-neutral words stay out of the dictionary
            label = "Positiv" if val > 0 else "Negativ"
            tag = tag_for[rng.choice(pos_tags)]
            pos_field = label if label == "Positiv" else ""
            neg_field = label if label == "Negativ" else ""
            f.write(f"{word.upper()}\tH4Lvd\t{pos_field}\t{neg_field}\t{tag}\n")
        f.write("COLD\tH4Lvd\t\tNegativ\tModif\n")
        f.write("COLD#1\tH4Lvd\t\tNegativ\tModif\n")     # sense-suffixed: dropped
        f.write("CHILLY#A\tH4Lvd\t\tNegativ\tModif\n")   # suffix not numeric: kept path
        f.write("BOTHWAYS\tH4Lvd\tPositiv\tNegativ\tModif\n")  # inconsistent
        f.write("NOLABEL\tH4Lvd\t\t\tNoun\n")            # unlabeled
        f.write("ZZGIBBERISH\tH4Lvd\tPositiv\t\tNoun\n")  # unalignable
        f.write("FROSTIEST\tH4Lvd\t\tNegativ\tModif\n")   # aligns via lemma map
        f.write("TABLE\tH4Lvd\tPositiv\t\tNoun\n")        # all-zero filtered


def write_lemma_map(path):
    with open(path, "w") as f:
        f.write("# surface form -> lemma\n")
        f.write("coldest\tcold\n")
        f.write("frostiest\tcold\n")
        f.write("overjoyed\tjoy\n")
        f.write("chilly#a\tbleak\n")


# ---------------------------------------------------------------------------

def print_cold_oracle():
    p = [a for a, _b in COLD_SENSES]
    q = [b for _a, b in COLD_SENSES]
    print("cold#a oracle (formula -> pos, neg, f_m, f_d):")
    for name in TWO_SIDED:
        fp, fq = two_sided(name, p, q)
        print(f"  {name:7s} pos={fp!r} neg={fq!r} m={variant_m(fp, fq)!r} d={fp - fq!r}")
    print(f"  uni     {f_uni(p, q)!r}")


def print_ttest_oracle():
    try:
        from scipy import stats
    except ImportError:
        print("scipy unavailable; skipping t-test oracle")
        return
    a = [0.52, 0.43, 0.61, 0.39, 0.58, 0.47, 0.55, 0.44, 0.50, 0.41,
         0.63, 0.38, 0.57, 0.46, 0.53, 0.42, 0.60, 0.40, 0.56, 0.45]
    b = [0.50, 0.45, 0.58, 0.42, 0.55, 0.49, 0.52, 0.47, 0.51, 0.40,
         0.60, 0.41, 0.55, 0.44, 0.54, 0.45, 0.57, 0.43, 0.53, 0.47]
    t, pv = stats.ttest_rel(a, b)
    print(f"paired t-test oracle: t={t!r} p={pv!r}")


def print_randomization_oracle():
    diffs = [1, -1, 1, 1, 0, -1, 1, 1, 0, 1]
    nz = [d for d in diffs if d != 0]
    obs = abs(sum(nz))
    total = 0
    hits = 0
    for mask in range(1 << len(nz)):
        s = sum(-d if (mask >> i) & 1 else d for i, d in enumerate(nz))
        total += 1
        hits += abs(s) >= obs
    print(f"randomization oracle: diffs={diffs} obs={obs} exact p={hits}/{total} = {hits/total!r}")


def main():
    rows1 = build_lexicon(11, 1)
    rows3 = build_lexicon(23, 3)
    write_lexicon(rows1, f"{OUT}/swn_synth_1.tsv")
    write_lexicon(rows3, f"{OUT}/swn_synth_3.tsv")
    write_anew(rows1, f"{OUT}/anew_eval.csv", 31)
    write_anew_small(f"{OUT}/anew_small.csv")
    write_gi(f"{OUT}/gi_eval.tsv", 47)
    write_lemma_map(f"{OUT}/lemma_map.tsv")
    print_cold_oracle()
    print_ttest_oracle()
    print_randomization_oracle()


if __name__ == "__main__":
    main()
