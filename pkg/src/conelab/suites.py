"""Identity suites: deterministic sampling, dispatch, report assembly.

Each suite draws its sample sets from a single splitmix64 stream seeded by
the config, runs the module kernels, and emits one CheckReport per identity.
Failing identities are reported, not raised: the torus fixtures are supposed
to fail some of these checks, and the reports are the point.
"""

from __future__ import annotations

import numpy as np

from . import catalog, cone as cone_mod, contact, pairs, quadrature, weitzenboeck
from .errors import EngineError
from .jets import cos, sin
from .report import SuiteConfig, error_report, make_report
from .rng import SplitMix64

SUITES = ("cone-identities", "contact-axioms", "kcontact", "sasaki",
          "weitzenboeck", "hypersasaki", "integration")

R_LO, R_HI = 0.5, 3.0


class SuiteUsageError(Exception):
    """Bad suite/manifold combination or unknown name (CLI exit 2)."""


def run_suite(config: SuiteConfig):
    if config.suite not in SUITES:
        raise SuiteUsageError(
            f"unknown suite {config.suite!r}; known: {', '.join(SUITES)}")
    try:
        entry = catalog.get(config.manifold)
    except KeyError as exc:
        raise SuiteUsageError(str(exc)) from None
    runner = {
        "cone-identities": _cone_identities,
        "contact-axioms": _contact_axioms,
        "kcontact": _kcontact,
        "sasaki": _sasaki,
        "weitzenboeck": _weitzenboeck,
        "hypersasaki": _hypersasaki,
        "integration": _integration,
    }[config.suite]
    return runner(entry, config)


# -- sampling -----------------------------------------------------------------


def _draw(entry, config, n=None):
    """Points, radii and three direction fields, all from one stream."""
    rng = SplitMix64(config.seed)
    B = n if n is not None else config.samples
    pts = entry.chart.sample_points(B, rng)
    radii = rng.uniforms(B, R_LO, R_HI)
    d = entry.chart.dim
    dirs = [np.array([rng.unit_vector(d) for _ in range(B)]) for _ in range(3)]
    return rng, pts, radii, dirs


def _cone_points(pts, radii):
    return np.column_stack([pts, radii])


def _guarded(reports, identity, anchor, tol, builder):
    """Run one identity builder, catching engine errors into a report."""
    try:
        residuals, points = builder()
        reports.append(make_report(identity, anchor, residuals, tol, points))
    except EngineError:
        reports.append(error_report(identity, anchor, tol))


# -- lemma test fixtures --------------------------------------------------------


def _lemma_functions():
    return [
        lambda x: x[0] * 0.0 + 1.0,
        lambda x: sin(x[0]),
        lambda x: cos(x[0]),
        lambda x: sin(x[0]) * cos(x[1]),
        lambda x: sin(x[0]) * sin(x[0]) + cos(x[1]),
    ]


def _lemma_oneforms(dim):
    def build(coeffs):
        def fn(x):
            out = np.empty(dim, object)
            zero = x[0] * 0.0
            for i in range(dim):
                out[i] = zero
            for i, c in coeffs(x):
                out[i] = out[i] + c
            return out

        return fn

    return [
        build(lambda x: [(0, x[0] * 0.0 + 1.0)]),
        build(lambda x: [(0, sin(x[0]))]),
        build(lambda x: [(1, cos(x[0]))]),
        build(lambda x: [(0, cos(x[1])), (1, sin(x[0]))]),
        build(lambda x: [(1, sin(x[0]) * cos(x[1]))]),
    ]


def _test_twoform(dim):
    def fn(x):
        zero = x[0] * 0.0
        out = np.empty((dim, dim), object)
        for i in range(dim):
            for j in range(dim):
                out[i, j] = zero
        c = cos(x[0])
        out[0, 1] = c
        out[1, 0] = zero - c
        return out

    return fn


# -- suites ---------------------------------------------------------------------


def _cone_identities(entry, config):
    cn = cone_mod.build_cone(entry.chart)
    _, pts, radii, dirs = _draw(entry, config)
    cpts = _cone_points(pts, radii)
    order = config.jet_order or 3
    geo = cone_mod.cone_geometry(cn, pts, radii, order)
    bgeo = cone_mod.base_geometry(cn, pts, order)
    reports = []

    def tol(identity, default=1e-7):
        return config.tolerance(identity, default)

    _guarded(reports, "cone-block-metric", "ConeChart (g = dr^2 + r^2 g_M)",
             tol("cone-block-metric", 1e-12),
             lambda: (cone_mod.block_metric_residuals(cn, pts, radii), cpts))

    def conn():
        res = cone_mod.connection_relation_residuals(
            cn, pts, radii, dirs[0], dirs[1], geo=geo, bgeo=bgeo)
        return res

    try:
        conn_res = conn()
        names = {
            "cone-radial-geodesic": "radial-geodesic",
            "cone-radial-lift": "radial-lift",
            "cone-radial-transport": "radial-transport",
            "cone-mixed-symmetry": "mixed-symmetry",
            "cone-horizontal-connection": "horizontal-connection",
        }
        for identity, key in names.items():
            reports.append(make_report(identity, "Eq. (1)", conn_res[key],
                                       tol(identity), cpts))
    except EngineError:
        reports.append(error_report("cone-connection", "Eq. (1)", 1e-7))

    for degree, prefix in ((1, "cone-oneform"), (2, "cone-twoform")):
        form_fn = (_lemma_oneforms(entry.chart.dim)[3] if degree == 1
                   else _test_twoform(entry.chart.dim))

        def forms(fn=form_fn, p=degree):
            res = cone_mod.form_relation_residuals(
                cn, pts, radii, dirs[0], fn, p, geo=geo, bgeo=bgeo)
            return res

        try:
            fr = forms()
            reports.append(make_report(f"{prefix}-radial", "Eq. (2)",
                                       fr["form-radial"],
                                       tol(f"{prefix}-radial"), cpts))
            reports.append(make_report(f"{prefix}-directional", "Eq. (2)",
                                       fr["form-directional"],
                                       tol(f"{prefix}-directional"), cpts))
        except EngineError:
            reports.append(error_report(f"{prefix}", "Eq. (2)", 1e-7))

    def drres():
        res = cone_mod.dr_relation_residuals(cn, pts, radii, dirs[0],
                                             geo=geo, bgeo=bgeo)
        return res

    try:
        dr = drres()
        reports.append(make_report("cone-dr-radial", "Eq. (3)",
                                   dr["dr-radial"], tol("cone-dr-radial"), cpts))
        reports.append(make_report("cone-dr-hessian", "Eq. (3)",
                                   dr["dr-hessian"], tol("cone-dr-hessian"), cpts))
    except EngineError:
        reports.append(error_report("cone-dr", "Eq. (3)", 1e-7))

    def curv():
        return cone_mod.curvature_relation_residuals(
            cn, pts, radii, dirs[0], dirs[1], dirs[2], geo=geo, bgeo=bgeo)

    try:
        cv = curv()
        reports.append(make_report("cone-curvature-radial", "Eq. (4)",
                                   cv["curvature-radial"],
                                   tol("cone-curvature-radial"), cpts))
        reports.append(make_report("cone-curvature-horizontal", "Eq. (4)",
                                   cv["curvature-horizontal"],
                                   tol("cone-curvature-horizontal"), cpts))
    except EngineError:
        reports.append(error_report("cone-curvature", "Eq. (4)", 1e-7))

    # Lemma sweep: k in {-2, 0, 1, 2, 3} across five trig fixtures each
    ks = (-2, 0, 1, 2, 3)

    def codiff_sweep():
        worst = None
        for k in ks:
            for fn in _lemma_oneforms(entry.chart.dim):
                r, _, _ = cone_mod.lemma_codifferential_residuals(
                    cn, pts, radii, fn, k, geo=geo, bgeo=bgeo)
                worst = r if worst is None else np.maximum(worst, r)
        return worst, cpts

    _guarded(reports, "cone-codifferential-weights", "Lemma 2.2(i)",
             tol("cone-codifferential-weights", 1e-6), codiff_sweep)

    def lap_sweep():
        worst = None
        for k in ks:
            for fn in _lemma_functions():
                r, _, _ = cone_mod.lemma_laplacian_residuals(
                    cn, pts, radii, fn, k, geo=geo, bgeo=bgeo)
                worst = r if worst is None else np.maximum(worst, r)
        return worst, cpts

    _guarded(reports, "cone-laplacian-weights", "Lemma 2.2(ii)",
             tol("cone-laplacian-weights", 1e-6), lap_sweep)

    def lap_r2():
        one = lambda x: x[0] * 0.0 + 1.0
        _, lhs, _ = cone_mod.lemma_laplacian_residuals(
            cn, pts, radii, one, 2, geo=geo, bgeo=bgeo)
        target = -2.0 * (2 * cn.n + 2)
        return np.abs(lhs - target), cpts

    _guarded(reports, "cone-laplacian-radial-quadratic", "Lemma 2.2(ii)",
             tol("cone-laplacian-radial-quadratic", 1e-9), lap_r2)

    return reports


def _structures(entry):
    return [(spec, contact.ContactMetricStructure(entry.chart, spec.xi, spec.name))
            for spec in entry.structures]


def _contact_axioms(entry, config):
    _, pts, radii, _ = _draw(entry, config)
    cpts = _cone_points(pts, radii)
    reports = []
    for spec, st in _structures(entry):
        tag = f":{spec.name}" if len(entry.structures) > 1 else ""

        _guarded(reports, f"contact-unit-length{tag}", "ContactMetricStructure",
                 config.tolerance(f"contact-unit-length{tag}", 1e-9),
                 lambda st=st: (contact.unit_length_residuals(st, pts), pts))
        _guarded(reports, f"contact-metric-axiom{tag}", "Eq. (kc)",
                 config.tolerance(f"contact-metric-axiom{tag}", 1e-8),
                 lambda st=st: (contact.kc_residuals(st, pts), pts))

        def reeb(st=st):
            res = contact.reeb_residuals(st, pts)
            return np.maximum(res["reeb-pairing"],
                              np.maximum(res["reeb-kernel"],
                                         res["reeb-interior"])), pts

        _guarded(reports, f"contact-reeb-conditions{tag}", "Eq. (kc)",
                 config.tolerance(f"contact-reeb-conditions{tag}", 1e-8), reeb)

        sympl = contact.ConeSymplecticData(cone_mod.build_cone(entry.chart), st)

        def sympl_checks(sympl=sympl):
            res = contact.symplectic_residuals(sympl, cpts)
            return res

        try:
            res = sympl_checks()
            for key, anchor in (("symplectic-closed", "Eq. (om)"),
                                ("symplectic-norm", "Eq. (om)"),
                                ("complex-square", "Eq. (om)"),
                                ("complex-isometry", "Eq. (om)")):
                identity = f"cone-{key}{tag}"
                reports.append(make_report(identity, anchor, res[key],
                                           config.tolerance(identity, 1e-8),
                                           cpts))
        except EngineError:
            reports.append(error_report(f"cone-symplectic{tag}", "Eq. (om)", 1e-8))
    return reports


def _kcontact(entry, config):
    _, pts, _, _ = _draw(entry, config)
    reports = []
    for spec, st in _structures(entry):
        tag = f":{spec.name}" if len(entry.structures) > 1 else ""
        _guarded(reports, f"killing-field{tag}", "K-contact (xi Killing)",
                 config.tolerance(f"killing-field{tag}", 1e-7),
                 lambda st=st: (contact.killing_residuals(st, pts), pts))
        _guarded(reports, f"ricci-reeb-criterion{tag}", "Ric(xi,xi) = 2n",
                 config.tolerance(f"ricci-reeb-criterion{tag}", 1e-7),
                 lambda st=st: (np.abs(contact.ricci_reeb_deficit(st, pts)), pts))
    return reports


def _sasaki(entry, config):
    _, pts, radii, _ = _draw(entry, config)
    cpts = _cone_points(pts, radii)
    reports = []
    for spec, st in _structures(entry):
        tag = f":{spec.name}" if len(entry.structures) > 1 else ""
        sas = par = None

        def sasaki_res(st=st):
            nonlocal sas
            sas = contact.sasaki_residuals(st, pts)
            return sas, pts

        _guarded(reports, f"sasaki-defect{tag}", "Eq. (xd)",
                 config.tolerance(f"sasaki-defect{tag}", 1e-7), sasaki_res)

        sympl = contact.ConeSymplecticData(cone_mod.build_cone(entry.chart), st)

        def parallel_res(sympl=sympl):
            nonlocal par
            par = contact.parallel_omega_residuals(sympl, cpts)
            return par, cpts

        _guarded(reports, f"parallel-omega{tag}", "parallel Omega iff Sasakian",
                 config.tolerance(f"parallel-omega{tag}", 1e-7), parallel_res)

        if sas is not None and par is not None:
            equiv_tol = config.tolerance(f"sasaki-parallel-equivalence{tag}", 0.5)
            agree = (np.max(sas) < 1e-6) == (np.max(par) < 1e-6)
            reports.append(make_report(
                f"sasaki-parallel-equivalence{tag}",
                "parallel Omega iff Sasakian",
                np.array([0.0 if agree else 1.0]), equiv_tol))
    return reports


def _weitzenboeck(entry, config):
    spec = entry.structures[0]
    st = contact.ContactMetricStructure(entry.chart, spec.xi, spec.name)
    sympl = contact.ConeSymplecticData(cone_mod.build_cone(entry.chart), st)
    rng, pts, radii, dirs = _draw(entry, config)
    cpts = _cone_points(pts, radii)
    order = config.jet_order or weitzenboeck.DEFAULT_ORDER
    reports = []

    try:
        data = weitzenboeck.weitzenboeck_data(sympl, pts, radii, order)
    except EngineError:
        return [error_report("weitzenboeck-data", "Eq. (la)", 1e-5)]

    def tol(identity, default):
        return config.tolerance(identity, default)

    reports.append(make_report(
        "omega-radial-parallel", "nab_r Omega = 0",
        weitzenboeck.radial_parallel_residuals(data),
        tol("omega-radial-parallel", 1e-8), cpts))

    reports.append(make_report(
        "star-scalar-consistency", "s* - s = |nab Omega|^2",
        weitzenboeck.star_scalar_consistency(data),
        tol("star-scalar-consistency", 1e-6), cpts))

    dirs4 = np.array([rng.unit_vector(entry.chart.dim + 1)
                      for _ in range(len(pts))])
    reports.append(make_report(
        "phi-norm-identity", "|nab_X Omega|^2 = -phi(X, JX)",
        weitzenboeck.phi_identity_residuals(data, dirs4),
        tol("phi-norm-identity", 1e-7), cpts))

    reports.append(make_report(
        "phi-invariance", "Eq. (la) (phi term)",
        weitzenboeck.phi_invariance_residuals(data),
        tol("phi-invariance", 1e-7), cpts))

    reports.append(make_report(
        "ricci-split-invariance", "Eq. (la) (Ric'' term)",
        weitzenboeck.ricci_split_residuals(data),
        tol("ricci-split-invariance", 1e-8), cpts))

    reports.append(make_report(
        "weitzenboeck-nonnegativity", "Eq. (la)",
        np.maximum(0.0, -data.solved_rpp_sq),
        tol("weitzenboeck-nonnegativity", 1e-5), cpts))

    # radial structure: two more sweeps at fixed radii over the same points
    rad = tuple(config.radii) + (1.0, 2.0)
    r1, r2 = float(rad[0]), float(rad[1])
    try:
        d1 = weitzenboeck.weitzenboeck_data(sympl, pts, np.full(len(pts), r1), order)
        d2 = weitzenboeck.weitzenboeck_data(sympl, pts, np.full(len(pts), r2), order)
    except EngineError:
        reports.append(error_report("weitzenboeck-radial-scaling", "Eq. (la2)", 1e-4))
        return reports

    f1 = d1.s_star * r1**2
    f2 = d2.s_star * r2**2
    prof = np.abs(f1 - f2) / np.maximum(np.maximum(np.abs(f1), np.abs(f2)), 1.0)
    reports.append(make_report(
        "star-scalar-radial-profile", "Eq. (op)", prof,
        tol("star-scalar-radial-profile", 1e-6), pts))

    active = d1.nab_omega_sq > 1e-8
    fpos = np.where(active, np.maximum(0.0, -f1), 0.0)
    reports.append(make_report(
        "radial-profile-positive", "Eq. (op)", fpos,
        tol("radial-profile-positive", 1e-9), pts))

    a1 = d1.pairing_form * r1**2
    a2 = d2.pairing_form * r2**2
    alpha_resid = np.maximum(np.max(np.abs(a1 - a2), axis=1),
                             np.abs(a1[:, -1]))
    reports.append(make_report(
        "pairing-form-profile", "Eq. (op2)", alpha_resid,
        tol("pairing-form-profile", 1e-6), pts))

    b1, m1 = weitzenboeck.omega_derivative_blocks(d1)
    b2, m2 = weitzenboeck.omega_derivative_blocks(d2)
    blocks = np.maximum(np.max(np.abs(b1 - b2), axis=(1, 2, 3)),
                        np.max(np.abs(m1 - m2), axis=(1, 2)))
    reports.append(make_report(
        "omega-derivative-blocks", "nab_X Omega = r^2 w + r dr ^ tau", blocks,
        tol("omega-derivative-blocks", 1e-8), pts))

    term_names = ("lap_s_diff", "div_term", "ric_div_term", "ric_anti_sq",
                  "rough_sq", "phi_sq", "rho_phi", "rho_rough",
                  "solved_rpp_sq")
    worst = None
    for name in term_names:
        v1 = getattr(d1, name)
        v2 = getattr(d2, name)
        ratio = weitzenboeck.scaling_ratio(v1, v2, r1, r2, power=4)
        worst = ratio if worst is None else np.maximum(worst, ratio)
    reports.append(make_report(
        "weitzenboeck-radial-scaling", "Eq. (la2)", worst,
        tol("weitzenboeck-radial-scaling", 1e-4), pts))
    return reports


def _hypersasaki(entry, config):
    sasakian = [s for s in entry.structures if s.expected == "sasakian"]
    if len(sasakian) < 2:
        raise SuiteUsageError(
            f"manifold {entry.key!r} does not catalogue two Sasakian "
            "structures; hypersasaki needs a pair")
    rng, pts, radii, _ = _draw(entry, config)
    cpts = _cone_points(pts, radii)
    cn = cone_mod.build_cone(entry.chart)

    def sympl_for(spec):
        st = contact.ContactMetricStructure(entry.chart, spec.xi, spec.name)
        return contact.ConeSymplecticData(cn, st)

    pair = pairs.StructurePair(sympl_for(sasakian[0]), sympl_for(sasakian[1]))
    reports = []
    try:
        lam, qres, variation = pairs.anticommutator_lambda(pair, cpts)
    except EngineError:
        return [error_report("pair-anticommutator", "Q = JJ' + J'J", 1e-8)]

    reports.append(make_report(
        "pair-anticommutator", "Q = lambda Id",
        np.maximum(qres, variation),
        config.tolerance("pair-anticommutator", 1e-8), cpts))
    reports.append(make_report(
        "pair-cauchy-schwarz", "|lambda| <= 2",
        np.array([max(0.0, abs(lam) - 2.0)]),
        config.tolerance("pair-cauchy-schwarz", 1e-9)))

    _guarded(reports, "pair-commutator-square", "A^2 = (lambda^2 - 4) Id",
             config.tolerance("pair-commutator-square", 1e-8),
             lambda: (pairs.commutator_square_residuals(pair, cpts, lam), cpts))

    def third():
        res = pairs.third_structure_residuals(pair, cpts, lam)
        return np.maximum.reduce(list(res.values())), cpts

    _guarded(reports, "third-structure", "I = A / sqrt(4 - lambda^2)",
             config.tolerance("third-structure", 1e-8), third)

    _guarded(reports, "third-structure-parallel", "nab I = 0",
             config.tolerance("third-structure-parallel", 1e-7),
             lambda: (pairs.parallel_third_structure_residuals(pair, cpts, lam),
                      cpts))

    def quaternion():
        res = pairs.quaternion_relation_residuals(pair, cpts, lam)
        return np.maximum.reduce(list(res.values())), cpts

    _guarded(reports, "quaternion-relations", "(g, I, J, K = IJ) hyperkaehler",
             config.tolerance("quaternion-relations", 1e-8), quaternion)

    if len(sasakian) >= 3:
        def family():
            third_sympl = sympl_for(sasakian[2])
            _, resid, unit = pairs.s2_family_coefficients(
                pair, third_sympl, cpts, lam)
            return np.maximum(resid, unit), cpts

        _guarded(reports, "s2-family-unit", "S^2-family of Sasakian structures",
                 config.tolerance("s2-family-unit", 1e-8), family)

    # a random unit quaternion combination must itself be Sasakian and land
    # back on the unit sphere of the triple
    if entry.key == "s3-round":
        raw = np.array([rng.uniform(-1, 1) for _ in range(3)])
        raw = raw / np.linalg.norm(raw)

        def random_member():
            xi = catalog.s3_reeb_combination(*raw)
            st = contact.ContactMetricStructure(entry.chart, xi, "combo")
            sas = contact.sasaki_residuals(st, pts)
            combo_sympl = contact.ConeSymplecticData(cn, st)
            _, resid, unit = pairs.s2_family_coefficients(
                pair, combo_sympl, cpts, lam)
            return np.maximum(sas, np.maximum(resid, unit)), pts

        _guarded(reports, "s2-family-sasaki", "S^2-family of Sasakian structures",
                 config.tolerance("s2-family-sasaki", 1e-6), random_member)
    return reports


# -- integration ---------------------------------------------------------------


INTEGRANDS = ("one", "divergence-pairing", "divergence-ricci", "f-term",
              "solved-curvature", "rough-laplacian", "phi-norm")

_DIVERGENCE = ("divergence-pairing", "divergence-ricci")
_NONNEGATIVE = ("f-term", "solved-curvature", "rough-laplacian", "phi-norm")

# one pipeline pass serves every integrand of its family on the same grid
_WDATA_CACHE = {}


def _cached_wdata(entry, points, r, order, mode, cache_key):
    key = (entry.key, cache_key, float(r), order, mode)
    if key not in _WDATA_CACHE:
        if len(_WDATA_CACHE) > 8:
            _WDATA_CACHE.clear()
        spec = entry.structures[0]
        st = contact.ContactMetricStructure(entry.chart, spec.xi, spec.name)
        sympl = contact.ConeSymplecticData(cone_mod.build_cone(entry.chart), st)
        radii = np.full(len(points), float(r))
        _WDATA_CACHE[key] = weitzenboeck.weitzenboeck_data(
            sympl, points, radii, order, mode=mode)
    return _WDATA_CACHE[key]


def integrand_values(entry, name, points, r, order=None, cache_key=None):
    """Evaluate a named level-set integrand at batched base points."""
    if name == "one":
        return np.ones(len(points))
    if cache_key is None:
        cache_key = len(points)
    if name in _DIVERGENCE:
        data = _cached_wdata(entry, points, r, order or 4, "divergence",
                             cache_key)
        vals = data.div_term if name == "divergence-pairing" else data.ric_div_term
        return vals * r**4
    if name in _NONNEGATIVE:
        data = _cached_wdata(entry, points, r,
                             order or weitzenboeck.DEFAULT_ORDER, "full",
                             cache_key)
        if name == "f-term":
            n = entry.n
            return 2.0 * (2 * n - 2) * (data.s_star * r**2) / r**4
        if name == "solved-curvature":
            return data.solved_rpp_sq
        if name == "rough-laplacian":
            return data.rough_sq
        return data.phi_sq
    raise SuiteUsageError(
        f"unknown integrand {name!r}; known: {', '.join(INTEGRANDS)}")


def integrate_level_set(manifold: str, r: float, integrand: str, grid=None):
    """Named-integrand quadrature over the level set M_r."""
    try:
        entry = catalog.get(manifold)
    except KeyError as exc:
        raise SuiteUsageError(str(exc)) from None
    if integrand not in INTEGRANDS:
        raise SuiteUsageError(
            f"unknown integrand {integrand!r}; known: {', '.join(INTEGRANDS)}")
    cn = cone_mod.build_cone(entry.chart)
    counts = grid if grid is not None else _integration_grid(entry, integrand)
    if isinstance(counts, int):
        counts = (counts,) * entry.chart.dim
    return quadrature.integrate_level_set(
        cn, r,
        lambda pts, rr: integrand_values(entry, integrand, pts, rr,
                                         cache_key=tuple(counts)),
        counts)


def _integration_grid(entry, integrand):
    """Default node counts; curvature-heavy integrands use tuned grids.

    On the torus every structure scalar depends on the t coordinate alone
    (trapezoidal exactness needs only a handful of nodes transversally), and
    on the round-sphere cone the nonnegative integrands vanish pointwise, so
    positive-weight quadrature bounds the integral by the sup.  Tuned counts
    are recorded with the catalog entry.
    """
    if integrand == "one":
        return entry.quadrature
    heavy = {
        "t3-blair": (32, 8, 8),
        "t3-unnormalized": (32, 8, 8),
        "s3-round": (8, 6, 6),
        "s5-round": (6, 6, 4, 4, 4),  # dim-6 cone: keep the node count sane
    }
    if entry.key in heavy:
        return heavy[entry.key]
    return entry.quadrature


def _integration(entry, config):
    reports = []
    grid = config.grid
    counts = grid if grid is not None else entry.quadrature
    vol = quadrature.chart_volume(entry.chart, counts)
    expected = entry.known_values.get("volume")
    if expected:
        rel = abs(vol - expected) / abs(expected)
        reports.append(make_report(
            "volume", "catalog closed form", np.array([rel]),
            config.tolerance("volume", 1e-9)))

    r = float(config.radii[0]) if config.radii else 1.0
    if entry.key in ("t3-blair", "t3-unnormalized"):
        for name, identity in (("divergence-pairing", "integral-divergence-pairing"),
                               ("divergence-ricci", "integral-divergence-ricci")):
            def run(name=name):
                val = integrate_level_set(entry.key, r, name, grid)
                return np.array([abs(val)]), None

            _guarded(reports, identity, "level-set integral of Eq. (la)",
                     config.tolerance(identity, 1e-6), run)
    if entry.key == "s3-round":
        for name, identity in (("f-term", "integral-f-term"),
                               ("solved-curvature", "integral-solved-curvature"),
                               ("rough-laplacian", "integral-rough-laplacian"),
                               ("phi-norm", "integral-phi-norm")):
            def run(name=name):
                val = integrate_level_set(entry.key, r, name, grid)
                return np.array([abs(val)]), None

            _guarded(reports, identity, "level-set integral of Eq. (la)",
                     config.tolerance(identity, 1e-8), run)
    return reports
