"""Named run presets pinning the published figure protocols.

Each preset fixes a command plus the model/protocol parameters of one figure
panel; `scale_j` rebuilds the configuration at a smaller (or larger) spin so
desk-scale replicas of the large-N runs stay one command away.  Values not
fixed by the protocol (sweep grids, a few panel couplings) are reasonable
choices, not pinned constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable


@dataclass(frozen=True)
class Preset:
    command: str
    default_two_j: int
    build: Callable[[int], dict]
    note: str


def _tc(two_j: int, **extra) -> dict:
    """Common settings of the integrable off-resonant runs."""
    cfg = {"omega": 2.0, "omega0": 1.0, "delta": 0.0, "two_j": two_j}
    cfg.update(extra)
    return cfg


def _resonant(two_j: int, delta: float, **extra) -> dict:
    cfg = {"omega": 1.0, "omega0": 1.0, "delta": delta, "two_j": two_j}
    cfg.update(extra)
    return cfg


def _fqp_state(two_j: int, m_factor: int, which: str) -> str:
    """Initial basis state inside the M = m_factor*j subspace at lambda_i = 0.

    For omega > omega0 the subspace energy grows with n, so 'lowest',
    'middle' and 'highest' map onto n = 0, n_span/2 and n_span.
    """
    j2 = two_j // 2 * m_factor  # M value for m_factor in {1, 2} at integer j
    n_span = min(j2, two_j)
    n = {"lowest": 0, "middle": n_span // 2, "highest": n_span}[which]
    two_m = 2 * (j2 - n) - two_j
    return f"basis:{n},{two_m / 2:g}"


PRESETS: dict[str, Preset] = {}


def _register(name: str, command: str, default_two_j: int, note: str):
    def deco(fn: Callable[[int], dict]):
        PRESETS[name] = Preset(command=command, default_two_j=default_two_j, build=fn, note=note)
        return fn

    return deco


# -- level dynamics / phase diagrams ---------------------------------------

@_register("fig1a", "levels", 6, "level dynamics, integrable limit, j=3, resonance")
def _fig1a(two_j: int) -> dict:
    return _resonant(two_j, 0.0, sector="both", lambda_grid="0:2:81")


@_register("fig1b", "levels", 6, "level dynamics, delta=0.3, j=3, resonance")
def _fig1b(two_j: int) -> dict:
    return _resonant(two_j, 0.3, sector="both", lambda_grid="0:2:81")


@_register("fig2a", "levels", 40, "critical M=2j subspace spectra, omega=2 omega0=1")
def _fig2a(two_j: int) -> dict:
    return _tc(two_j, sector=f"M={2 * (two_j // 2)}", lambda_grid="0:2.5:101")


@_register("fig2b", "levels", 40, "non-critical M=j subspace spectra")
def _fig2b(two_j: int) -> dict:
    return _tc(two_j, sector=f"M={two_j // 2}", lambda_grid="0:2.5:101")


@_register("fig2-dispersion", "dispersion", 40,
           "interaction dispersion of lowest states of every M subspace, j=20")
def _fig2disp(two_j: int) -> dict:
    return _tc(two_j, lowest_per_m=2 * two_j)


# -- forward quenches in the integrable limit (j=2000 at paper scale) -------

def _fig3(two_j: int, m_factor: int, which: str) -> dict:
    m_tot = two_j // 2 * m_factor
    return _tc(
        two_j,
        sector=f"M={m_tot}",
        lambda_i=0.0,
        lambda_f=2.5,
        initial=_fqp_state(two_j, m_factor, which),
    )


for _name, _mf, _which in (
    ("fig3a", 2, "highest"), ("fig3b", 2, "middle"), ("fig3c", 2, "lowest"),
    ("fig3d", 1, "highest"), ("fig3e", 1, "middle"), ("fig3f", 1, "lowest"),
):
    _register(
        _name, "quench", 4000,
        f"FQP, M={'2j' if _mf == 2 else 'j'} subspace, {_which} state, lam 0 -> 2.5",
    )(lambda two_j, _mf=_mf, _which=_which: _fig3(two_j, _mf, _which))


# -- backward quenches in the critical subspace ------------------------------

def _fig4(two_j: int, lam_f: float) -> dict:
    return _tc(
        two_j,
        sector=f"M={2 * (two_j // 2)}",
        lambda_i=2.5,
        lambda_f=lam_f,
        initial="ground",
    )


for _name, _lf in (("fig4a", 0.5), ("fig4b", 0.772), ("fig4c", 0.8), ("fig4d", 1.0)):
    _register(_name, "quench", 4000, f"BQP in M=2j, lam 2.5 -> {_lf}")(
        lambda two_j, _lf=_lf: _fig4(two_j, _lf)
    )


@_register("fig5a", "sweep", 4000, "BQP sweep in the critical M=2j subspace")
def _fig5a(two_j: int) -> dict:
    return _tc(two_j, sector=f"M={2 * (two_j // 2)}", lambda_i=2.5,
               initial="ground", lambda_f_grid="0.5:1.1:31")


@_register("fig5b", "sweep", 4000, "BQP sweep in the non-critical M=j subspace")
def _fig5b(two_j: int) -> dict:
    return _tc(two_j, sector=f"M={two_j // 2}", lambda_i=2.5,
               initial="ground", lambda_f_grid="0.5:1.1:31")


# -- non-integrable delta=0.3 protocols (j=20 at paper scale) ----------------

@_register("fig6a", "quench", 40, "FQP to the saddle-line energy, delta=0.3")
def _fig6a(two_j: int) -> dict:
    return _resonant(two_j, 0.3, sector="even", n_max=10 * two_j // 2,
                     lambda_i=0.0, lambda_f=1.1, initial="ground")


@_register("fig6b", "quench", 40, "FQP with near-perfect localization, delta=0.3")
def _fig6b(two_j: int) -> dict:
    return _resonant(two_j, 0.3, sector="even", n_max=10 * two_j // 2,
                     lambda_i=0.0, lambda_f=2.5, initial="ground")


def _fig7(two_j: int, lam_f: float) -> dict:
    return _resonant(two_j, 0.3, sector="even", lambda_i=6.0,
                     lambda_f=lam_f, initial="ground")


for _name, _lf in (("fig7a", 2.9), ("fig7b", 3.1), ("fig7c", 3.4), ("fig7d", 3.27)):
    _register(_name, "quench", 40, f"BQP from lam=6 superradiant ground state to {_lf}")(
        lambda two_j, _lf=_lf: _fig7(two_j, _lf)
    )


@_register("fig8", "peres", 40, "Peres lattice at lam=3.27 with the critical-quench overlay")
def _fig8(two_j: int) -> dict:
    return _resonant(two_j, 0.3, lam=3.27, sector="even",
                     lambda_i=6.0, initial="ground")


@_register("fig9", "sweep", 40, "BQP sweep, delta=0.3, lam_i=6")
def _fig9(two_j: int) -> dict:
    return _resonant(two_j, 0.3, sector="even", lambda_i=6.0,
                     initial="ground", lambda_f_grid="3.0:3.4:9")


def _fig10(two_j: int, lam_f: float) -> dict:
    return _resonant(two_j, 1.0, sector="even", lambda_i=4.0,
                     lambda_f=lam_f, initial="ground")


for _name, _lf in (("fig10a", 1.8), ("fig10b", 2.06), ("fig10c", 2.3)):
    _register(_name, "quench", 40, f"BQP in the full Dicke model, lam 4 -> {_lf}")(
        lambda two_j, _lf=_lf: _fig10(two_j, _lf)
    )


@_register("fig10-peres", "peres", 40, "Peres lattice at lam=2.06, delta=1, with overlay")
def _fig10peres(two_j: int) -> dict:
    return _resonant(two_j, 1.0, lam=2.06, sector="even",
                     lambda_i=4.0, initial="ground")


def _fig11(two_j: int, delta: float, lam_i: float, lam_f: float) -> dict:
    return _resonant(two_j, delta, sector="even", lambda_i=lam_i,
                     lambda_f=lam_f, initial="ground", observable="photon_number")


for _name, _delta, _li, _lf in (
    ("fig11a", 0.3, 6.0, 3.1), ("fig11b", 0.3, 6.0, 3.27), ("fig11c", 0.3, 6.0, 3.4),
    ("fig11d", 1.0, 4.0, 1.8), ("fig11e", 1.0, 4.0, 2.06), ("fig11f", 1.0, 4.0, 2.3),
):
    _register(_name, "observable", 40,
              f"photon-number evolution, delta={_delta}, lam {_li} -> {_lf}")(
        lambda two_j, d=_delta, li=_li, lf=_lf: _fig11(two_j, d, li, lf)
    )


def resolve_preset(name: str, scale_j: float | None = None) -> tuple[str, dict]:
    """Config dict of a preset, optionally rebuilt at spin j = scale_j."""
    if name not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown preset {name!r}; available: {known}")
    preset = PRESETS[name]
    two_j = preset.default_two_j if scale_j is None else int(round(2 * scale_j))
    if two_j < 1:
        raise ValueError(f"scale_j={scale_j} yields two_j={two_j} < 1")
    cfg = preset.build(two_j)
    cfg["two_j"] = two_j
    return preset.command, cfg
