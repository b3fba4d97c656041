"""Contract a random cubic graph with automatically chosen parameters and
compare the width against the n^(1/4) reference curve."""

import sys

from sparsetww import build_pipeline, gen_regular, select_params, verify


def main(n: int = 4096, seed: int = 1) -> None:
    g = gen_regular(n, 3, seed)
    p = select_params(n, 3)
    print(f"n={n}  a={p.a} b={p.b} r={p.r} q={p.q}  (r clamped: {p.r_clamped})")
    rep = build_pipeline(g, p, seed)
    assert verify(g, rep.sequence, rep.width)
    print(f"m(phi)={rep.m_phi} after {rep.retries_used} attempts, image has {rep.image_size} vertices")
    print(f"fiber-merge prefix width {rep.prefix_width} <= m(phi)*3 = {rep.m_phi * 3}")
    print(f"final width {rep.width}; n^(1/4) = {n ** 0.25:.1f}")
    print(f"large-n size condition met: {rep.theory_precondition}")


if __name__ == "__main__":
    main(*(int(x) for x in sys.argv[1:]))
