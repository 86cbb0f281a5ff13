#!/usr/bin/env python3
"""Regenerate the bundled structure corpus under corpus/.

Boolean algebras are encoded with element i standing for the set of atoms
whose bits are set in i, so meet/join/compl are bitwise and/or/xor-with-top.
"""
import itertools
import json
import os
import sys

OUT = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "corpus")


def ba_signature(with_c=False):
    lines = ["signature", "fun meet 2", "fun join 2", "fun compl 1"]
    if with_c:
        lines.append("fun c 1")
    lines += ["const zero", "const one", "end"]
    return lines


def ba_tables(k, c=None):
    n = 1 << k
    top = n - 1
    lines = [f"carrier {n}", "fun meet"]
    lines += [f"{x} {y} -> {x & y}" for x in range(n) for y in range(n)]
    lines += ["end", "fun join"]
    lines += [f"{x} {y} -> {x | y}" for x in range(n) for y in range(n)]
    lines += ["end", "fun compl"]
    lines += [f"{x} -> {top ^ x}" for x in range(n)]
    lines += ["end"]
    if c is not None:
        lines += ["fun c"] + [f"{x} -> {c(x)}" for x in range(n)] + ["end"]
    lines += ["const zero 0", f"const one {top}", "choice min", "choice-empty 0"]
    return lines


def write(name, header, lines):
    with open(os.path.join(OUT, name), "w") as f:
        f.write("".join(f"# {h}\n" for h in header))
        f.write("\n".join(lines) + "\n")


def main():
    os.makedirs(OUT, exist_ok=True)
    manifest = []

    for k in (1, 2, 3, 4):
        n = 1 << k
        write(f"b{n}.struct", [f"{n}-element Boolean algebra, least-index choice"],
              ba_signature() + ba_tables(k))
        manifest.append({"file": f"b{n}.struct", "kind": "ba", "carrier": n})

    for k in (2, 3):
        n = 1 << k
        top = n - 1
        write(f"ca1_simple{n}.struct",
              [f"simple monadic algebra on {n} elements: c(x) = one for x != zero"],
              ba_signature(True) + ba_tables(k, lambda x: 0 if x == 0 else top))
        manifest.append({"file": f"ca1_simple{n}.struct", "kind": "ca1", "carrier": n})
        write(f"ca1_ident{n}.struct",
              [f"monadic algebra on {n} elements with identity cylindrification"],
              ba_signature(True) + ba_tables(k, lambda x: x))
        manifest.append({"file": f"ca1_ident{n}.struct", "kind": "ca1", "carrier": n})

    # Product of two simple 2-element monadic algebras, bit i is factor i.
    def prod_c(x):
        return (1 if x & 1 else 0) | (2 if x & 2 else 0)
    write("ca1_prod4.struct",
          ["product of two simple 2-element monadic algebras (componentwise c)"],
          ba_signature(True) + ba_tables(2, prod_c))
    manifest.append({"file": "ca1_prod4.struct", "kind": "ca1", "carrier": 4})

    lines = ["signature", "fun succ 1", "end", "carrier 3", "fun succ"]
    lines += [f"{x} -> {(x + 1) % 3}" for x in range(3)]
    lines += ["end", "choice min", "choice-empty 0"]
    write("z3_cycle.struct",
          ["3-cycle with successor, no constants; automorphism group acts transitively"],
          lines)
    manifest.append({"file": "z3_cycle.struct", "kind": "other", "carrier": 3})

    write("point.struct", ["one-element structure with an empty unary relation"],
          ["signature", "rel p 1", "end", "carrier 1", "rel p", "end", "choice min"])
    manifest.append({"file": "point.struct", "kind": "other", "carrier": 1})

    # B2 with a hand-picked choice table: the kernel of the epsilon map is the
    # Boolean congruence of the ideal {{}, {0}}.
    table = ["choice table", "{} -> 0", "{0} -> 0", "{1} -> 1", "{0,1} -> 1", "end"]
    b2 = [l for l in ba_tables(1) if not l.startswith("choice")]
    write("b2_table.struct", ["2-element Boolean algebra with an explicit choice table"],
          ba_signature() + b2 + table)
    manifest.append({"file": "b2_table.struct", "kind": "ba", "carrier": 2})

    for m in manifest:
        m["expect"] = {"dim_sensitive": False}

    with open(os.path.join(OUT, "b4_to_b2.hom"), "w") as f:
        f.write("# Boolean homomorphism B4 -> B2: the ultrafilter generated by atom 1\n")
        for x in range(4):
            f.write(f"{x} -> {x & 1}\n")

    with open(os.path.join(OUT, "manifest.json"), "w") as f:
        json.dump({"structures": manifest,
                   "homomorphisms": [{"file": "b4_to_b2.hom", "from": "b4.struct",
                                      "to": "b2.struct"}]}, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
