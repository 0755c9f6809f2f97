"""Named figure presets resolving exact parameter bundles and overlays."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .limits import LimitSpec
from .params import ModelParams


@dataclass(frozen=True)
class Panel:
    """One sub-panel: full model parameters, time grid, and overlay curves."""

    slug: str
    params: ModelParams
    t_max: float
    n_steps: int
    overlays: tuple[LimitSpec, ...]
    target_deficit: float = 1e-6
    max_half_width: float = 300000.0


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    panels: tuple[Panel, ...]


def continuum_params(big_gamma: float, gamma: float, delta: float, e_phi: float = 0.0) -> ModelParams:
    """Model parameters with prescribed decay rate and resonance width.

    Inverts Gamma = 2 pi v^2/delta and gamma = a*delta at the given spacing.
    """
    v = math.sqrt(big_gamma * delta / (2.0 * math.pi))
    return ModelParams(v=v, delta=delta, a=gamma / delta, e_phi=e_phi)


def _ladder_sweep(name: str, v: float, widths: tuple[float, ...]) -> Preset:
    panels = []
    for a in widths:
        p = ModelParams(v=v, delta=1.0, a=a)
        overlays = (
            LimitSpec("rabi", {"e1": p.e_phi, "v": p.v}),
            LimitSpec("bj", {"v": p.v, "delta": p.delta, "e_phi": p.e_phi}),
            LimitSpec("ww", {"big_gamma": p.big_gamma}),
        )
        panels.append(Panel(slug=f"a{a:g}", params=p, t_max=14.0, n_steps=1400, overlays=overlays))
    return Preset(
        name=name,
        description=f"ladder-spacing units, v={v}, width sweep a={list(widths)}",
        panels=tuple(panels),
    )


def _continuum_sweep(name: str, big_gamma: float, w: float, spacings: tuple[float, ...], t_max: float, extra_ww: bool) -> Preset:
    gamma = 2.0 * w * w / big_gamma
    panels = []
    for delta in spacings:
        p = continuum_params(big_gamma, gamma, delta)
        overlays = [LimitSpec("fano", {"w": w, "gamma": gamma, "e_phi": 0.0})]
        if extra_ww:
            overlays.append(LimitSpec("ww", {"big_gamma": big_gamma}))
        panels.append(
            Panel(
                slug=f"delta{delta:g}",
                params=p,
                t_max=t_max,
                n_steps=600,
                overlays=tuple(overlays),
            )
        )
    return Preset(
        name=name,
        description=f"continuum approach, W={w}, Gamma={big_gamma}, gamma={gamma:g}, spacing sweep",
        panels=tuple(panels),
    )


def _intermediate() -> Preset:
    # caption values: Gamma=3, gamma=0.5, W=sqrt(Gamma*gamma/2)=0.866,
    # panel pairs (a, v) with delta = gamma/a
    gamma, big_gamma = 0.5, 3.0
    w = math.sqrt(big_gamma * gamma / 2.0)
    pairs = ((0.5, 0.69), (0.71, 0.57), (1.25, 0.43), (5.0, 0.21))
    panels = []
    for a, v in pairs:
        delta = gamma / a
        p = ModelParams(v=v, delta=delta, a=a)
        overlays = (LimitSpec("fano", {"w": w, "gamma": gamma, "e_phi": 0.0}),)
        panels.append(Panel(slug=f"a{a:g}", params=p, t_max=6.0, n_steps=600, overlays=overlays))
    return Preset(
        name="intermediate",
        description="intermediate W/gamma ratio, Gamma=3, gamma=0.5, W=0.866",
        panels=tuple(panels),
    )


def _rabi_continuum() -> Preset:
    # small spacing throughout; the coupling width shrinks panel to panel,
    # reducing decay until the dynamics approach pure two-state oscillation
    delta, v = 0.005, 0.16
    panels = []
    for gamma in (0.5, 0.1, 0.02, 0.004):
        p = ModelParams(v=v, delta=delta, a=gamma / delta)
        overlays = (LimitSpec("rabi", {"e1": 0.0, "v": v}),)
        panels.append(Panel(slug=f"gamma{gamma:g}", params=p, t_max=30.0, n_steps=1500, overlays=overlays))
    return Preset(
        name="rabi-continuum",
        description="delta=0.005 with shrinking coupling width gamma",
        panels=tuple(panels),
    )


def build_presets() -> dict[str, Preset]:
    presets = [
        _ladder_sweep("beta05", v=0.16, widths=(0.1, 1.0, 5.0, 20.0)),
        _ladder_sweep("beta3", v=0.39, widths=(0.1, 1.0, 5.0, 20.0)),
        _continuum_sweep("overdamped", big_gamma=0.5, w=8.66, spacings=(1.0, 0.1, 0.01), t_max=6.0, extra_ww=True),
        _continuum_sweep("underdamped", big_gamma=12.25, w=1.75, spacings=(0.5, 0.1, 0.01), t_max=3.0, extra_ww=False),
        _intermediate(),
        _rabi_continuum(),
    ]
    return {p.name: p for p in presets}


PRESETS = build_presets()
PRESET_NAMES = tuple(sorted(PRESETS))


def resolve(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}") from None
