"""Renderers for the LaTeX snapshot corpus (texts stored in latex_snapshots.json)."""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from . import latex
from .curvature import delta, glob_lambda, n_measure
from .curved import kinematic_lambda, iso_push
from .local import K_generator
from .scalars import PI
from .valuations import chi, kinematic


def _renderers():
    return {
        "kinematic_n1_mu": lambda: latex.tensor(kinematic(chi(1), "mu")),
        "kinematic_n2_prim": lambda: latex.tensor(kinematic(chi(2), "prim")),
        "kinematic_n2_u_tau": lambda: latex.tensor(kinematic(chi(2), "u", "tau")),
        "scalar_rational_function": lambda: latex.scalar((PI + 1) / (PI * PI - 3) - 1 / PI),
        "delta_n3": lambda: latex.curvature(delta(3, 3, 1) + n_measure(3, 2, 0)),
        "glob_half_n2": lambda: latex.curved_valuation(glob_lambda(n_measure(2, 1, 0), Fraction(1, 2))),
        "curved_kinematic_n1": lambda: latex.curved_tensor(kinematic_lambda(iso_push(chi(1), 3))),
        "local_delta_n1": lambda: latex.free_tensor(K_generator("Delta00", 1)),
    }


def render_snapshot(name: str) -> str:
    return _renderers()[name]()


def _load():
    text = resources.files("hig").joinpath("latex_snapshots.json").read_text(encoding="utf-8")
    return json.loads(text)


SNAPSHOTS = _load()


def regenerate() -> dict:
    return {name: f() for name, f in sorted(_renderers().items())}
