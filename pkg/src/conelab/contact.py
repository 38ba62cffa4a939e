"""Contact metric structures and their cone symplectic data.

A candidate Reeb field xi on a chart (dim 2n+1) is promoted to a contact
metric structure by deriving eta = g(xi, .) and the endomorphism phi from
half the exterior derivative of eta (solve g(phi X, Y) = (d eta)(X, Y) / 2),
then validating the defining axiom phi^2 = -Id + eta (x) xi at probe points.
Classification is by residual magnitude, never a bare boolean: the engine
reports how badly an axiom fails and where.

On the cone the structure induces the 2-form

    Omega = r dr ^ eta + (r^2 / 2) d eta,

compatible with the cone metric; J is solved from Omega by raising an index.
Omega is parallel exactly when the structure is Sasakian, which is what the
residual suites quantify.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .chart import ManifoldChart, jet_point
from .cone import ConeChart, build_cone
from .errors import IncompatibleStructureError, NotContactMetricError
from .geometry import (
    PointGeometry,
    TensorField,
    exterior_derivative,
    norm_squared,
    orthonormal_frame_values,
    tvalues,
)
from .jets import Jet
from .rng import SplitMix64


@dataclass(frozen=True)
class ContactMetricStructure:
    """Validated (xi, eta, phi) bundle on a chart."""

    chart: ManifoldChart
    xi: TensorField
    name: str = "xi"

    @property
    def n(self) -> int:
        return (self.chart.dim - 1) // 2

    # -- derived fields, all evaluable on jet coordinates -------------------

    def eta(self, geo: PointGeometry):
        """eta = g(xi, .) as an object 1-form."""
        x = self.xi.fn(geo.x)
        d = self.chart.dim
        out = np.empty(d, object)
        for i in range(d):
            acc = None
            for a in range(d):
                term = geo.g[i, a] * x[a]
                acc = term if acc is None else acc + term
            out[i] = acc
        return out

    def half_deta(self, geo: PointGeometry):
        eta = self.eta(geo)
        deta = exterior_derivative(eta, self.chart.dim, 1)
        return np.array([[0.5 * deta[i, j] for j in range(self.chart.dim)]
                         for i in range(self.chart.dim)], dtype=object)

    def phi(self, geo: PointGeometry):
        """phi[a, i] = phi^a_i solved from g(phi X, Y) = (d eta)(X, Y)/2."""
        h = self.half_deta(geo)
        d = self.chart.dim
        out = np.empty((d, d), object)
        for a in range(d):
            for i in range(d):
                acc = None
                for b in range(d):
                    term = geo.ginv[a, b] * h[i, b]
                    acc = term if acc is None else acc + term
                out[a, i] = acc
        return out


def kc_residuals(structure: ContactMetricStructure, points, order=2):
    """Max orthonormal-frame residual of phi^2 + Id - eta (x) xi per point."""
    geo = PointGeometry(structure.chart, jet_point(structure.chart, points, order))
    d = structure.chart.dim
    phi = tvalues(structure.phi(geo))
    eta = tvalues(structure.eta(geo))
    xi = tvalues(structure.xi.fn(geo.x))
    phi2 = np.einsum("bam,bmi->bai", phi, phi)
    defect = phi2 + np.eye(d)[None, :, :] - np.einsum("ba,bi->bai", xi, eta)
    return np.sqrt(np.abs(norm_squared(geo.g_values, geo.ginv_values, defect, "ul")))


def kc_max_component_residuals(structure, points, order=2):
    """Largest orthonormal-frame entry of the axiom defect.

    For the unnormalised flat-torus fixture this is exactly 3/4 at every
    point (the defect is 3/4 of the projector onto ker eta).
    """
    geo = PointGeometry(structure.chart, jet_point(structure.chart, points, order))
    d = structure.chart.dim
    phi = tvalues(structure.phi(geo))
    eta = tvalues(structure.eta(geo))
    xi = tvalues(structure.xi.fn(geo.x))
    phi2 = np.einsum("bam,bmi->bai", phi, phi)
    defect = phi2 + np.eye(d)[None, :, :] - np.einsum("ba,bi->bai", xi, eta)
    E = orthonormal_frame_values(geo.g_values)
    E_dual = np.einsum("bai,bij->baj", E, geo.g_values)
    on = np.einsum("baj,bji,bci->bac", E_dual, defect, E)
    return np.max(np.abs(on), axis=(1, 2))


def unit_length_residuals(structure, points):
    g = structure.chart.metric_values(points)
    geo = PointGeometry(structure.chart, jet_point(structure.chart, points, 0))
    xi = tvalues(structure.xi.fn(geo.x))
    return np.abs(np.einsum("bi,bij,bj->b", xi, g, xi) - 1.0)


def reeb_residuals(structure, points, order=2):
    """Derived Reeb conditions: eta(xi) = 1, phi(xi) = 0, xi i d(eta) = 0."""
    geo = PointGeometry(structure.chart, jet_point(structure.chart, points, order))
    xi = tvalues(structure.xi.fn(geo.x))
    eta = tvalues(structure.eta(geo))
    phi = tvalues(structure.phi(geo))
    deta = 2.0 * tvalues(structure.half_deta(geo))
    pairing = np.abs(np.einsum("bi,bi->b", eta, xi) - 1.0)
    kernel = np.sqrt(np.abs(norm_squared(
        geo.g_values, geo.ginv_values, np.einsum("bai,bi->ba", phi, xi), "u")))
    interior = np.sqrt(np.abs(norm_squared(
        geo.g_values, geo.ginv_values, np.einsum("bi,bij->bj", xi, deta), "l")))
    return {"reeb-pairing": pairing, "reeb-kernel": kernel,
            "reeb-interior": interior}


def build_contact(chart: ManifoldChart, xi: TensorField, name: str = "xi",
                  tol: float = 1e-6, probes: int = 50,
                  rng: Optional[SplitMix64] = None) -> ContactMetricStructure:
    """Validate the axioms at probe points; raise with a witness on failure."""
    rng = rng or SplitMix64(515)
    pts = chart.sample_points(probes, rng)
    candidate = ContactMetricStructure(chart, xi, name)
    unit = unit_length_residuals(candidate, pts)
    if np.max(unit) > 1e-9:
        k = int(np.argmax(unit))
        raise NotContactMetricError(
            f"|xi| != 1 (residual {unit[k]:.3e})", residual=float(unit[k]),
            witness=tuple(pts[k]))
    kc = kc_residuals(candidate, pts)
    if np.max(kc) > tol:
        k = int(np.argmax(kc))
        raise NotContactMetricError(
            f"phi^2 != -Id + eta (x) xi (residual {kc[k]:.3e} at {tuple(pts[k])})",
            residual=float(kc[k]), witness=tuple(pts[k]))
    reeb = reeb_residuals(candidate, pts)
    worst = max(float(np.max(v)) for v in reeb.values())
    if worst > 1e-6:
        raise NotContactMetricError(
            f"derived Reeb conditions failed (residual {worst:.3e})",
            residual=worst)
    return candidate


def killing_residuals(structure, points, order=2):
    """Max orthonormal component of L_xi g per point."""
    geo = PointGeometry(structure.chart, jet_point(structure.chart, points, order))
    nab_xi = tvalues(geo.covd(structure.xi.fn(geo.x), (1, 0)))  # (B, m, a)
    lowered = np.einsum("bma,bai->bmi", nab_xi, geo.g_values)
    lie = lowered + np.swapaxes(lowered, 1, 2)
    E = orthonormal_frame_values(geo.g_values)
    lie_on = np.einsum("bai,bcj,bij->bac", E, E, lie)
    return np.max(np.abs(lie_on), axis=(1, 2))


def ricci_reeb_deficit(structure, points, order=3):
    """Ric(xi, xi) - 2n, signed, per point."""
    geo = PointGeometry(structure.chart, jet_point(structure.chart, points, order))
    ric = tvalues(geo.ricci)
    xi = tvalues(structure.xi.fn(geo.x))
    return np.einsum("bi,bij,bj->b", xi, ric, xi) - 2.0 * structure.n


def sasaki_residuals(structure, points, order=3):
    """Residual of nab_X(nab xi) = g(xi, .) X - g(X, .) xi, frame norm."""
    geo = PointGeometry(structure.chart, jet_point(structure.chart, points, order))
    d = structure.chart.dim
    xi_j = structure.xi.fn(geo.x)
    nab_xi = geo.covd(xi_j, (1, 0))           # [i, a] = (nab_i xi)^a
    endo = np.moveaxis(nab_xi, 0, 1)          # [a, i] endomorphism layout
    nab2 = tvalues(geo.covd(endo, (1, 1)))    # (B, m, a, i)
    eta = np.einsum("bij,bj->bi", geo.g_values, tvalues(xi_j))
    xi_v = tvalues(xi_j)
    wedge = (np.einsum("bi,am->bmai", eta, np.eye(d))
             - np.einsum("bmi,ba->bmai", geo.g_values, xi_v))
    defect = nab2 - wedge
    # signature: m covariant, a contravariant, i covariant
    defect = np.moveaxis(defect, 2, 1)        # (B, a, m, i)
    return np.sqrt(np.abs(norm_squared(
        geo.g_values, geo.ginv_values, defect, "ull")))


# -- cone symplectic data -----------------------------------------------------


@dataclass(frozen=True)
class ConeSymplecticData:
    """Cone 2-form Omega and the solved almost complex structure J."""

    cone: ConeChart
    structure: ContactMetricStructure

    def omega(self, geo: PointGeometry):
        """Omega = r dr ^ eta + (r^2/2) d eta on cone jet coordinates."""
        d = self.cone.base.dim
        base_geo = _base_view(self.cone, geo)
        eta = self.structure.eta(base_geo)
        h = self.structure.half_deta(base_geo)  # (d, d) object, = d(eta)/2
        r = geo.x[-1]
        r2 = r * r
        out = np.empty((d + 1, d + 1), object)
        for i in range(d):
            for j in range(d):
                out[i, j] = r2 * h[i, j]
            out[d, i] = r * eta[i]
            out[i, d] = -(r * eta[i])
        out[d, d] = Jet.constant(np.zeros(r.batch), r.dim, r.order)
        return out

    def complex_structure(self, geo: PointGeometry):
        """J[a, i] = J^a_i with Omega(X, Y) = g_cone(J X, Y)."""
        om = self.omega(geo)
        d = self.cone.dim
        out = np.empty((d, d), object)
        for a in range(d):
            for i in range(d):
                acc = None
                for b in range(d):
                    term = geo.ginv[a, b] * om[i, b]
                    acc = term if acc is None else acc + term
                out[a, i] = acc
        return out

    @property
    def omega_field(self) -> TensorField:
        return TensorField((0, 2), lambda x: self.omega(
            PointGeometry(self.cone.chart, x)))

    @property
    def j_field(self) -> TensorField:
        return TensorField((1, 1), lambda x: self.complex_structure(
            PointGeometry(self.cone.chart, x)))


def _base_view(cone: ConeChart, geo: PointGeometry) -> PointGeometry:
    """Base-chart geometry over the base slice of cone jet coordinates."""
    return PointGeometry(cone.base, geo.x[:-1])


def build_cone_symplectic(structure: ContactMetricStructure,
                          r_range=(0.25, 4.0), tol: float = 1e-8,
                          probes: int = 25,
                          rng: Optional[SplitMix64] = None) -> ConeSymplecticData:
    cone = build_cone(structure.chart, r_range)
    data = ConeSymplecticData(cone, structure)
    rng = rng or SplitMix64(1202)
    pts = cone.chart.sample_points(probes, rng)
    geo = PointGeometry(cone.chart, jet_point(cone.chart, pts, 2))
    j = tvalues(data.complex_structure(geo))
    d = cone.dim
    defect = np.einsum("bam,bmi->bai", j, j) + np.eye(d)[None, :, :]
    worst = np.max(np.sqrt(np.abs(norm_squared(
        geo.g_values, geo.ginv_values, defect, "ul"))))
    if worst > tol:
        raise IncompatibleStructureError(
            f"J^2 + Id residual {worst:.3e}; base structure violates the "
            "contact metric axiom")
    return data


def symplectic_residuals(data: ConeSymplecticData, points, order=2):
    """dOmega = 0, |Omega|^2 = dim, J isometry; per-point residuals."""
    cone = data.cone
    geo = PointGeometry(cone.chart, jet_point(cone.chart, points, order))
    d = cone.dim
    om = data.omega(geo)
    dom = tvalues(exterior_derivative(om, d, 2))
    closed = np.sqrt(np.abs(norm_squared(
        geo.g_values, geo.ginv_values, dom, "lll")))
    om_v = tvalues(om)
    norm = np.abs(norm_squared(geo.g_values, geo.ginv_values, om_v, "ll") - d)
    j = tvalues(data.complex_structure(geo))
    pulled = np.einsum("zai,zab,zbj->zij", j, geo.g_values, j)
    isometry = np.sqrt(np.abs(norm_squared(
        geo.g_values, geo.ginv_values, pulled - geo.g_values, "ll")))
    square = np.einsum("bam,bmi->bai", j, j) + np.eye(d)[None, :, :]
    sq_res = np.sqrt(np.abs(norm_squared(
        geo.g_values, geo.ginv_values, square, "ul")))
    return {"symplectic-closed": closed, "symplectic-norm": norm,
            "complex-square": sq_res, "complex-isometry": isometry}


def parallel_omega_residuals(data: ConeSymplecticData, points, order=3):
    """|nab Omega| per cone point (vanishes iff the base is Sasakian)."""
    geo = PointGeometry(data.cone.chart, jet_point(data.cone.chart, points, order))
    nab = tvalues(geo.covd(data.omega(geo), (0, 2)))
    return np.sqrt(np.abs(norm_squared(
        geo.g_values, geo.ginv_values, nab, "lll")))


# -- report-producing operations ------------------------------------------------


def killing_residual(structure: ContactMetricStructure, points,
                     tolerance: float = 1e-7):
    """Lie-derivative residual of the metric along xi, as a report."""
    from .report import make_report

    return make_report(f"killing-field:{structure.name}",
                       "K-contact (xi Killing)",
                       killing_residuals(structure, points), tolerance, points)


def kcontact_via_ricci(structure: ContactMetricStructure, points,
                       tolerance: float = 1e-7):
    """Pointwise Ric(xi, xi) - 2n, reported with its sign folded into |.|."""
    from .report import make_report

    return make_report(f"ricci-reeb-criterion:{structure.name}",
                       "Ric(xi,xi) = 2n",
                       np.abs(ricci_reeb_deficit(structure, points)),
                       tolerance, points)


def sasaki_residual(structure: ContactMetricStructure, points,
                    tolerance: float = 1e-7):
    from .report import make_report

    return make_report(f"sasaki-defect:{structure.name}", "Eq. (xd)",
                       sasaki_residuals(structure, points), tolerance, points)


def parallel_omega_residual(data: ConeSymplecticData, cone_points,
                            tolerance: float = 1e-7):
    from .report import make_report

    return make_report(f"parallel-omega:{data.structure.name}",
                       "parallel Omega iff Sasakian",
                       parallel_omega_residuals(data, cone_points), tolerance,
                       cone_points)
