"""Closed-form test manifolds with contact data and quadrature specs.

Every entry is a single almost-everywhere chart; all structure fields are
evaluable expressions over jets, never sampled tables, so differentiation
stays exact.  Entries are addressable by stable string ids:

    t3-blair         flat 3-torus, Blair's non-K-contact structure (normalised)
    t3-unnormalized  the same 1-form on the unit flat torus; negative fixture
                     whose phi^2 = -(Id - eta (x) xi)/4 misses the axiom by 3/4
    s3-round         unit round S^3 in Hopf-type coordinates, three Reeb fields
                     from the ambient quaternion structures
    s5-round         unit round S^5, standard Sasakian Reeb field

The torus structure follows the normalisation g -> g/4, eta -> eta/2 under
which the defining axiom holds exactly; the unnormalised entry keeps the
plain unit metric so the axiom failure itself can be asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .chart import ManifoldChart
from .geometry import TensorField
from .jets import cos, sin

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class StructureSpec:
    """Named candidate Reeb field with its expected classification."""

    name: str
    xi: TensorField
    expected: str  # sasakian | contact-metric | not-contact-metric


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    chart: ManifoldChart
    structures: Tuple[StructureSpec, ...]
    quadrature: Tuple[int, ...]      # default nodes per coordinate
    known_values: Dict[str, float] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return (self.chart.dim - 1) // 2

    def structure(self, name: str = None) -> StructureSpec:
        if name is None:
            return self.structures[0]
        for s in self.structures:
            if s.name == name:
                return s
        raise KeyError(f"no structure named {name!r} in {self.key}")


def _vec(fn):
    def wrapped(x):
        comps = fn(x)
        out = np.empty(len(comps), object)
        for i, c in enumerate(comps):
            out[i] = c if not isinstance(c, (int, float)) else x[0] * 0.0 + c
        return out

    return TensorField((1, 0), wrapped)


# -- flat torus entries -------------------------------------------------------


def blair_t3() -> CatalogEntry:
    """Blair's contact metric structure on the flat torus, normalised.

    g = (dt^2 + dx^2 + dy^2)/4 on periods 2 pi, xi = 2(cos t d_x + sin t d_y);
    flat and Einstein with constant 0, yet not K-contact.
    """
    chart = ManifoldChart(
        dim=3,
        coords=("t", "x", "y"),
        domain=((0.0, TWO_PI),) * 3,
        periodic=(TWO_PI,) * 3,
        metric=lambda x: [[0.25, 0.0, 0.0], [0.0, 0.25, 0.0], [0.0, 0.0, 0.25]],
        label="t3-blair",
    )
    xi = _vec(lambda x: [x[0] * 0.0, 2.0 * cos(x[0]), 2.0 * sin(x[0])])
    return CatalogEntry(
        key="t3-blair",
        chart=chart,
        structures=(StructureSpec("blair", xi, "contact-metric"),),
        quadrature=(32, 32, 32),
        known_values={
            "volume": np.pi**3,
            "scalar_curvature": 0.0,
            "einstein_constant": 0.0,
            "ricci_reeb_deficit": -2.0,
        },
    )


def flat_t3_unnormalized() -> CatalogEntry:
    """The torus structure as printed with the unit metric; negative fixture."""
    chart = ManifoldChart(
        dim=3,
        coords=("t", "x", "y"),
        domain=((0.0, TWO_PI),) * 3,
        periodic=(TWO_PI,) * 3,
        metric=lambda x: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        label="t3-unnormalized",
    )
    xi = _vec(lambda x: [x[0] * 0.0, cos(x[0]), sin(x[0])])
    return CatalogEntry(
        key="t3-unnormalized",
        chart=chart,
        structures=(StructureSpec("printed", xi, "not-contact-metric"),),
        quadrature=(32, 32, 32),
        known_values={"volume": TWO_PI**3, "kc_residual": 0.75},
    )


# -- round spheres ------------------------------------------------------------


def _s3_chart() -> ManifoldChart:
    def metric(x):
        al = x[0]
        c, s = cos(al), sin(al)
        return [[1.0, 0.0, 0.0], [0.0, c * c, 0.0], [0.0, 0.0, s * s]]

    return ManifoldChart(
        dim=3,
        coords=("alpha", "beta", "gamma"),
        domain=((0.0, np.pi / 2), (0.0, TWO_PI), (0.0, TWO_PI)),
        periodic=(None, TWO_PI, TWO_PI),
        metric=metric,
        label="s3-round",
    )


def s3_reeb_i() -> TensorField:
    """Hopf field of the ambient complex structure i: d_beta + d_gamma."""
    return _vec(lambda x: [x[0] * 0.0, x[0] * 0.0 + 1.0, x[0] * 0.0 + 1.0])


def s3_reeb_j() -> TensorField:
    def comps(x):
        al, be, ga = x[0], x[1], x[2]
        phase = be + ga
        t = sin(al) / cos(al)
        ct = cos(al) / sin(al)
        return [cos(phase), t * sin(phase), -(ct * sin(phase))]

    return _vec(comps)


def s3_reeb_k() -> TensorField:
    def comps(x):
        al, be, ga = x[0], x[1], x[2]
        phase = be + ga
        t = sin(al) / cos(al)
        ct = cos(al) / sin(al)
        return [sin(phase), -(t * cos(phase)), ct * cos(phase)]

    return _vec(comps)


def s3_reeb_combination(a: float, b: float, c: float) -> TensorField:
    """Unit combination a*i + b*j + c*k of the ambient quaternion fields."""
    fi, fj, fk = s3_reeb_i(), s3_reeb_j(), s3_reeb_k()

    def comps(x):
        vi, vj, vk = fi.fn(x), fj.fn(x), fk.fn(x)
        return [a * vi[m] + b * vj[m] + c * vk[m] for m in range(3)]

    return _vec(comps)


def round_sphere(n: int) -> CatalogEntry:
    """Unit round S^{2n+1} (n = 1 or 2) with its Sasakian Reeb data."""
    if n == 1:
        structures = (
            StructureSpec("i", s3_reeb_i(), "sasakian"),
            StructureSpec("j", s3_reeb_j(), "sasakian"),
            StructureSpec("k", s3_reeb_k(), "sasakian"),
        )
        return CatalogEntry(
            key="s3-round",
            chart=_s3_chart(),
            structures=structures,
            quadrature=(24, 16, 16),
            known_values={
                "volume": 2 * np.pi**2,
                "scalar_curvature": 6.0,
                "einstein_constant": 2.0,
                "ricci_reeb_deficit": 0.0,
            },
        )
    if n == 2:

        def metric(x):
            al, th = x[0], x[1]
            sa, ca = sin(al), cos(al)
            st, ct = sin(th), cos(th)
            z = x[0] * 0.0
            return [
                [1.0, z, z, z, z],
                [z, sa * sa, z, z, z],
                [z, z, ca * ca, z, z],
                [z, z, z, sa * sa * (ct * ct), z],
                [z, z, z, z, sa * sa * (st * st)],
            ]

        chart = ManifoldChart(
            dim=5,
            coords=("alpha", "theta", "beta", "gamma", "delta"),
            domain=((0.0, np.pi / 2), (0.0, np.pi / 2),
                    (0.0, TWO_PI), (0.0, TWO_PI), (0.0, TWO_PI)),
            periodic=(None, None, TWO_PI, TWO_PI, TWO_PI),
            metric=metric,
            label="s5-round",
        )
        one = lambda x: x[0] * 0.0 + 1.0
        xi = _vec(lambda x: [x[0] * 0.0, x[0] * 0.0, one(x), one(x), one(x)])
        return CatalogEntry(
            key="s5-round",
            chart=chart,
            structures=(StructureSpec("i", xi, "sasakian"),),
            quadrature=(16, 16, 12, 12, 12),
            known_values={
                "volume": np.pi**3,
                "scalar_curvature": 20.0,
                "einstein_constant": 4.0,
                "ricci_reeb_deficit": 0.0,
            },
        )
    raise ValueError("round spheres are catalogued for n = 1 and n = 2 only")


_BUILDERS = {
    "t3-blair": blair_t3,
    "t3-unnormalized": flat_t3_unnormalized,
    "s3-round": lambda: round_sphere(1),
    "s5-round": lambda: round_sphere(2),
}


def keys():
    return tuple(_BUILDERS)


def get(key: str) -> CatalogEntry:
    try:
        return _BUILDERS[key]()
    except KeyError:
        raise KeyError(f"unknown manifold id {key!r}; known: {', '.join(keys())}")
