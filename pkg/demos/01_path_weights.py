"""Leaf-path and root-path counts on a branched simplicial complex.

Every complex is read as its maximal faces; the downward closure is
computed automatically.  LP counts ascending paths to maximal faces, RP
counts descending paths to vertices, and RP is always (k+1)! on k-faces.
"""

from hodgewalk import compute_path_weights, cover_from_complex, leaves_and_roots, parse_complex

complex_text = """
x0 x1 x2
x1 x2 x3
x2 x5
x3 x4 x5 x6
"""

cx = parse_complex(complex_text)
print(f"faces: {cx.n_faces()} total,", {k: cx.n_faces(k) for k in range(cx.dimension + 1)})

cover = cover_from_complex(cx)
pw = compute_path_weights(cover)
leaves, roots = leaves_and_roots(cover)
print(f"leaves: {sorted(cover.labels[q] for q in leaves)}")
print(f"roots:  {sorted(cover.labels[q] for q in roots)}")

print("\n k  face           LP   RP   H=LP/RP")
for q in range(cover.n_quotient):
    print(f" {cover.dims[q]}  {cover.labels[q]:<14} {pw.lp[q]:>3} {pw.rp[q]:>4}   {pw.h(q)}")

# LP(u) * RP(u) counts the root-to-leaf paths through u; summed over a
# component it gives the stationary normalizer
total = sum(pw.through(q) for q in range(cover.n_quotient))
print(f"\nsum of LP*RP over all faces: {total}")
