"""Figure rendering for the bench report path."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_bench_figure(rows: list[dict], path: str) -> None:
    """Two-panel scaling figure from bench rows (one row per field degree).

    Left: median random-element draws per run vs k.  Right: median group
    multiplications per run vs k, with the k*loglog(q)*log(q) + log(q)
    reference shape calibrated at the smallest k.
    """
    ks = [r["k"] for r in rows]
    rand_med = [r["median_rand"] for r in rows]
    mul_med = [r["median_mul"] for r in rows]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))

    ax1.plot(ks, rand_med, "o-", color="tab:blue")
    ax1.set_xlabel("extension degree k")
    ax1.set_ylabel("median random draws / run")
    ax1.set_xscale("log", base=2)
    ax1.grid(True, alpha=0.3)

    def shape(k, p):
        q = float(p) ** k
        return k * math.log(math.log(q)) * math.log(q) + math.log(q)

    p = rows[0]["p"]
    c = mul_med[0] / shape(ks[0], p)
    bound = [c * shape(k, p) for k in ks]
    ax2.plot(ks, mul_med, "o-", color="tab:red", label="measured")
    ax2.plot(ks, bound, "--", color="gray",
             label="c·(k·loglog q·log q + log q)")
    ax2.set_xlabel("extension degree k")
    ax2.set_ylabel("median group mults / run")
    ax2.set_xscale("log", base=2)
    ax2.set_yscale("log")
    ax2.legend(fontsize=8)
    ax2.grid(True, alpha=0.3)

    fig.suptitle(f"construction cost scaling, p = {p}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
