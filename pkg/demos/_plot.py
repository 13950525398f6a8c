"""Optional plotting: figures are written only when matplotlib is installed and --plot is given."""

import sys


def maybe_plot(name, draw):
    if "--plot" not in sys.argv:
        return
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping figure")
        return
    fig, ax = plt.subplots(figsize=(7, 4))
    draw(ax)
    fig.tight_layout()
    fig.savefig(f"{name}.png", dpi=120)
    print(f"wrote {name}.png")
