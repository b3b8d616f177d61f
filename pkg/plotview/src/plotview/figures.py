"""Figure construction from simulator CSV tables.

Display conventions are fixed per figure: the fig3 population panel
scales the short-lived P population by 1e4 and the S population by 1e2 at
render time only; fig4/fig5/fig7 non-fidelity curves use a logarithmic
y axis; fig6 draws fidelity-vs-mismatch profiles; fig8 the superposition
evolution of an interrupted sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .reader import InputError, Table, read_table  # noqa: E402

FIGURES = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8")

# line-style cycles per figure, in input-file order
_SCAN_STYLES = {
    "fig4": (dict(color="red", linestyle="-", marker="o", mfc="none"),
             dict(color="black", linestyle="-.", marker="x"),
             dict(color="blue", linestyle="--", marker="s")),
    "fig5": (dict(color="blue", linestyle="--", marker="s"),
             dict(color="red", linestyle="-", marker="o", mfc="none"),
             dict(color="green", linestyle="-.", marker="x")),
    "fig6": (dict(color="blue", linestyle="--"),
             dict(color="black", linestyle="-."),
             dict(color="red", linestyle=":"),
             dict(color="green", linestyle="-")),
    "fig7": (dict(color="black", linestyle="-", marker="o"),),
}


@dataclass(frozen=True)
class FigureSpec:
    figure: str
    inputs: tuple[str, ...]
    output: str
    dpi: int = 150
    title: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise InputError(f"unknown figure {self.figure!r}; "
                             f"choose from {', '.join(FIGURES)}")
        if not self.inputs:
            raise InputError("at least one input file is required")


def _laser_label(table: Table) -> str:
    lasers = table.config.get("lasers", {})
    c = lasers.get("C", {})
    b = lasers.get("B", {})
    db = b.get("detuning_over_2pi_MHz")
    parts = []
    if c:
        parts.append(rf"$\Omega_C/2\pi$={c.get('rabi_over_2pi_MHz'):g}, "
                     rf"$\Delta_C/2\pi$={c.get('detuning_over_2pi_MHz'):g} MHz")
    if db is not None:
        parts.append(rf"$\Delta_B/2\pi$={db:g} MHz")
    return "; ".join(parts)


def _rabi_label(table: Table) -> str:
    lasers = table.config.get("lasers", {})
    nb = lasers.get("B", {}).get("rabi_over_2pi_MHz")
    nr = lasers.get("R", {}).get("rabi_over_2pi_MHz")
    return rf"$\Omega_B^0/2\pi$={nb:g}, $\Omega_R^0/2\pi$={nr:g} MHz"


def _population_panel(ax, table: Table, with_p: bool):
    t = table.column("t_us")
    ax.plot(t, table.column("rho_DD"), color="red", linestyle=":",
            label=r"$D_{3/2}$")
    if with_p:
        scaled_p = [1e4 * v for v in table.column("rho_PP")]
        ax.plot(t, scaled_p, color="green", linestyle="-",
                label=r"$P_{1/2}$ ($\times 10^4$)")
    scaled_s = [1e2 * v for v in table.column("rho_SS")]
    ax.plot(t, scaled_s, color="black", linestyle="--",
            label=r"$S_{1/2}$ ($\times 10^2$)")
    ax.plot(t, table.column("rho_QQ"), color="blue", linestyle="-.",
            label=r"$D_{5/2}$")
    ax.set_xlabel(r"t ($\mu$s)")
    ax.set_ylabel("population")
    ax.legend(loc="center left", fontsize=8)


def render(spec: FigureSpec) -> str:
    """Draw one figure from its input tables and write the image file.

    Pure function of the inputs: identical files and spec produce an
    identical image, byte for byte.
    """
    tables = [read_table(path) for path in spec.inputs]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        if spec.figure == "fig3":
            _population_panel(ax, tables[0], with_p=True)
        elif spec.figure in ("fig4", "fig5"):
            for table, style in zip(tables, _style_cycle(spec.figure)):
                label = (_rabi_label(table) if spec.figure == "fig5"
                         else _laser_label(table))
                ax.plot(table.column("axis_value"),
                        table.column("one_minus_F"),
                        label=label, **style)
            ax.set_yscale("log")
            ax.set_xlabel(r"$\tau = \Delta t$ ($\mu$s)")
            ax.set_ylabel(r"$1-F$")
            ax.legend(fontsize=8)
        elif spec.figure == "fig6":
            for table, style in zip(tables, _style_cycle("fig6")):
                fidelity = [1.0 - v for v in table.column("one_minus_F")]
                ax.plot(table.column("axis_value"), fidelity,
                        label=_laser_label(table), **style)
            ax.set_xlabel(r"$\Delta_{\mathrm{eff}}/2\pi$ (MHz)")
            ax.set_ylabel("F")
            ax.legend(fontsize=7)
        elif spec.figure == "fig7":
            table = tables[0]
            ax.plot(table.column("axis_value"), table.column("one_minus_F"),
                    **_style_cycle("fig7")[0])
            ax.set_yscale("log")
            ax.set_xscale("symlog", linthresh=10.0)
            ax.set_xlabel(r"$\Gamma_L$ (Hz, HWHM)")
            ax.set_ylabel(r"$1-F$")
        else:  # fig8
            _population_panel(ax, tables[0], with_p=False)
        if spec.title:
            ax.set_title(spec.title)
        fig.tight_layout()
        fig.savefig(spec.output, dpi=spec.dpi)
    finally:
        plt.close(fig)
    return spec.output


def _style_cycle(figure: str):
    return _SCAN_STYLES[figure]
