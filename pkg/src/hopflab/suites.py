"""Named verification suites behind ``hopflab verify``.

Each suite runs a battery of checks with explicit tolerances and returns a
structured result; everything is deterministic given the seed. The suites
double as the acceptance battery (tests/test_acceptance.py drives them).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import catalog as cat
from .actions import LABELS, hopf_directions, load_action, orbit_geometry, orbit_shape_operator, phi_profile
from .ambient import AmbientPoint, AmbientTangent, SpaceForm, parallel_transport_along_geodesic
from .constructor import (
    CurveLaw,
    build_hypersurface,
    integrate_sigma,
    leviflat_cmc_certify,
    strongly_2hopf_certify,
)
from .hypersurface import (
    TAU_MULT,
    TAU_PROJ,
    _frame_of,
    _h_of,
    bracket_by_flows,
    frame_derivative_data,
    hopf_cmc_relation_check,
    shape_data,
    verify_connection_formulas,
    verify_gauss_codazzi,
)

SUITE_NAMES = ("ambient", "actions", "frames", "connection", "gauss-codazzi",
               "austere", "cmc", "levi-flat")


@dataclass
class Check:
    name: str
    value: float
    tol: float
    passed: bool

    def to_dict(self):
        return {"name": self.name, "value": self.value, "tol": self.tol,
                "passed": self.passed}


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)

    def expect(self, name, value, tol):
        """Record value < tol."""
        self.checks.append(Check(name, float(value), float(tol), bool(value < tol)))

    def expect_true(self, name, flag):
        self.checks.append(Check(name, 1.0 if flag else 0.0, 0.5, bool(flag)))

    def expect_above(self, name, value, floor):
        self.checks.append(Check(name, float(value), float(floor), bool(value > floor)))

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {"suite": self.name, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks]}


class Workspace:
    """Per-run cache of constructed patches (deterministic content)."""

    def __init__(self, seed: int):
        self.seed = seed
        self._cmc = {}
        self._wp = {}
        self._austere = {}
        self._catalog = {}

    def rng(self, tag: str):
        digest = hashlib.sha256(tag.encode()).digest()
        return np.random.default_rng((self.seed, int.from_bytes(digest[:8], "big")))

    def catalog_entry(self, name):
        if name not in self._catalog:
            self._catalog[name] = cat.get_entry(name)
        return self._catalog[name]

    def launch_data(self, label):
        """Deterministic regular launch point and the w_p data there."""
        spec = load_action(label)
        q0 = np.array([0.12, 0.07])
        z0 = spec.section.point(q0)
        p0 = AmbientPoint(spec.space, z0)
        zeros = hopf_directions(spec, p0, n_samples=360, tol=1e-12)
        return spec, p0, z0, zeros

    def cmc_patch(self, label, eta=1.0):
        if (label, eta) not in self._cmc:
            spec, p0, z0, zeros = self.launch_data(label)
            f1, f2 = spec.section.tangent_frame(z0)
            angles = np.array([d["theta"] for d in zeros])
            cand = np.linspace(0.0, 2 * np.pi, 181)
            sep = np.min(np.abs((cand[:, None] - angles[None, :] + np.pi) % (2 * np.pi) - np.pi), axis=1)
            theta0 = float(cand[np.argmax(sep)])
            w0 = np.cos(theta0) * f1 + np.sin(theta0) * f2
            sigma = integrate_sigma(spec, p0, w0, CurveLaw("cmc", eta=eta), n_steps=200)
            ehs = build_hypersurface(spec, sigma, s_extent=0.15)
            self._cmc[(label, eta)] = ehs
        return self._cmc[(label, eta)]

    def wp_patch(self, label, eta=1.0):
        """Construction launched exactly at a found w_p direction."""
        if (label, eta) not in self._wp:
            spec, p0, z0, zeros = self.launch_data(label)
            w0 = zeros[0]["direction"]
            sigma = integrate_sigma(spec, p0, w0, CurveLaw("cmc", eta=eta), n_steps=60)
            ehs = build_hypersurface(spec, sigma, s_extent=0.12, t_margin=0.005)
            self._wp[(label, eta)] = ehs
        return self._wp[(label, eta)]

    def austere_candidates(self, label):
        if label not in self._austere:
            from .constructor import austere_search

            spec = load_action(label)
            uu = np.linspace(-0.3, 0.3, 5)
            grid = np.stack([m.ravel() for m in np.meshgrid(uu, uu, indexing="ij")], axis=-1)
            self._austere[label] = (spec, austere_search(spec, grid, n_steps=120))
        return self._austere[label]


# -- ambient -------------------------------------------------------------------


def fd_curvature_residual(sp: SpaceForm, rng, n_points=50, h=2e-5):
    """Max relative deviation of the closed-form curvature from the FD oracle.

    The oracle applies nested covariant differences to fields z -> P_h(A z)
    for fixed matrices A (phase-equivariant, hence well defined on the
    manifold), entirely independent of the closed-form expression.
    """
    worst = 0.0
    for _ in range(n_points):
        p = sp.random_point(rng)
        mats = rng.standard_normal((3, 3, 3)) + 1j * rng.standard_normal((3, 3, 3))

        def fld(a):
            return lambda z: sp.project_horizontal(z, z @ a.T)

        X, Y, Z = fld(mats[0]), fld(mats[1]), fld(mats[2])

        def nabla_at(vfield, wfield, q):
            v = vfield(q)
            zp = sp.exp(q, v, h)
            zm = sp.exp(q, v, -h)
            up = sp.phase_align(q, zp)
            um = sp.phase_align(q, zm)
            return sp.project_horizontal(q, (up * wfield(zp) - um * wfield(zm)) / (2 * h))

        def second(vf, wf, zf, q):
            """nabla_{vf} (r -> nabla_{wf} zf) at q."""
            v = vf(q)
            zp = sp.exp(q, v, h)
            zm = sp.exp(q, v, -h)
            up = sp.phase_align(q, zp)
            um = sp.phase_align(q, zm)
            return sp.project_horizontal(
                q, (up * nabla_at(wf, zf, zp) - um * nabla_at(wf, zf, zm)) / (2 * h))

        lie = nabla_at(X, Y, p) - nabla_at(Y, X, p)
        r_fd = (second(X, Y, Z, p) - second(Y, X, Z, p)
                - nabla_at(lambda q: sp.project_horizontal(q, lie), Z, p))
        r_cf = sp.curvature(X(p), Y(p), Z(p))
        denom = max(float(sp.norm(r_cf)), 1e-6)
        worst = max(worst, float(sp.norm(r_fd - r_cf)) / denom)
    return worst


def suite_ambient(ws: Workspace) -> SuiteResult:
    res = SuiteResult("ambient")
    for c in (4.0, -4.0):
        sp = SpaceForm(c)
        rng = ws.rng(f"ambient{c}")
        hol = treal = sym = bianchi = 0.0
        for _ in range(50):
            p = sp.random_point(rng)
            x = sp.random_tangent(rng, p)
            y = sp.random_tangent(rng, p)
            y_tr = y - sp.g(y, x) * x - sp.g(y, 1j * x) * (1j * x)
            y_tr = y_tr / sp.norm(y_tr)
            hol = max(hol, abs(float(sp.g(sp.curvature(x, 1j * x, 1j * x), x)) - c))
            treal = max(treal, abs(float(sp.g(sp.curvature(x, y_tr, y_tr), x)) - c / 4))
            z = sp.random_tangent(rng, p)
            w = sp.random_tangent(rng, p)
            r1 = sp.curvature(x, y, z)
            sym = max(sym,
                      float(sp.norm(r1 + sp.curvature(y, x, z))),
                      abs(float(sp.g(r1, w)) + float(sp.g(sp.curvature(x, y, w), z))))
            bianchi = max(bianchi, float(sp.norm(
                r1 + sp.curvature(y, z, x) + sp.curvature(z, x, y))))
        res.expect(f"holomorphic_curvature_c{c:+g}", hol, 1e-8)
        res.expect(f"totally_real_curvature_c{c:+g}", treal, 1e-8)
        res.expect(f"curvature_symmetries_c{c:+g}", sym, 1e-10)
        res.expect(f"bianchi_c{c:+g}", bianchi, 1e-10)
        res.expect(f"fd_curvature_oracle_c{c:+g}",
                   fd_curvature_residual(sp, ws.rng(f"fd{c}"), n_points=50), 1e-3)
        # Kaehler identity along random geodesics: transport commutes with J
        kah = 0.0
        rngk = ws.rng(f"kahler{c}")
        for _ in range(20):
            p = AmbientPoint(sp, sp.random_point(rngk))
            d = AmbientTangent(p, sp.random_tangent(rngk, p.rep))
            v = AmbientTangent(p, sp.random_tangent(rngk, p.rep))
            tv = parallel_transport_along_geodesic(p, d, 0.5, v, n_steps=100)
            jtv = parallel_transport_along_geodesic(p, d, 0.5,
                                                    AmbientTangent(p, 1j * v.vec), n_steps=100)
            kah = max(kah, float(sp.norm(1j * tv.vec - jtv.vec)))
        res.expect(f"kahler_parallel_J_c{c:+g}", kah, 1e-6)
        # exp_map against an RK4 geodesic oracle, and distance additivity
        rngg = ws.rng(f"geo{c}")
        geo = dist_add = 0.0
        for _ in range(10):
            p = sp.random_point(rngg)
            v = sp.random_tangent(rngg, p)
            z, w = p.copy(), v.copy()
            n, dt = 200, 1.0 / 200

            def acc(zz, ww):
                return -(sp.g(ww, ww) / sp.kappa) * zz

            for _ in range(n):
                k1z, k1w = w, acc(z, w)
                k2z, k2w = w + dt / 2 * k1w, acc(z + dt / 2 * k1z, w + dt / 2 * k1w)
                k3z, k3w = w + dt / 2 * k2w, acc(z + dt / 2 * k2z, w + dt / 2 * k2w)
                k4z, k4w = w + dt * k3w, acc(z + dt * k3z, w + dt * k3w)
                z = z + dt / 6 * (k1z + 2 * k2z + 2 * k3z + k4z)
                w = w + dt / 6 * (k1w + 2 * k2w + 2 * k3w + k4w)
            geo = max(geo, float(sp.dist(sp.exp(p, v, 1.0), z)))
            for t in (0.3, 0.9, 1.3):
                dist_add = max(dist_add, abs(float(sp.dist(p, sp.exp(p, v, t))) - t))
        res.expect(f"exp_vs_rk_oracle_c{c:+g}", geo, 1e-6)
        res.expect(f"distance_additivity_c{c:+g}", dist_add, 1e-6)
    return res


# -- actions -------------------------------------------------------------------


def suite_actions(ws: Workspace) -> SuiteResult:
    res = SuiteResult("actions")
    for label in LABELS:
        spec = load_action(label)
        sp = spec.space
        sec = spec.section
        rng = ws.rng(f"act-{label}")
        # isometries
        iso = 0.0
        for _ in range(5):
            s = rng.uniform(-1.0, 1.0, size=2)
            m = spec.group_element(s)
            z = sp.random_point(rng)
            v = sp.random_tangent(rng, z)
            w = sp.random_tangent(rng, z)
            iso = max(iso, abs(float(sp.g(m @ v, m @ w)) - float(sp.g(v, w))))
        res.expect(f"{label}:isometry", iso, 1e-8)
        # section invariants at 20 chart points
        rr = 0.45 if sp.c > 0 else 0.6
        pts = rng.uniform(-rr, rr, size=(20, 2))
        treal = korth = ii = 0.0
        for q in pts:
            z = sec.point(q)
            f1, f2 = sec.tangent_frame(z)
            treal = max(treal, abs(float(sp.g(1j * f1, f2))))
            k = spec.killing_basis(z)
            korth = max(korth, max(abs(float(sp.g(k[i], f))) for i in range(2)
                                   for f in (f1, f2)))
            ii = max(ii, sec.second_fundamental_form_residual(q))
        res.expect(f"{label}:section_totally_real", treal, 1e-8)
        res.expect(f"{label}:killing_orthogonal_to_section", korth, 1e-8)
        res.expect(f"{label}:section_II", ii, 1e-6)
        # flow oracle: velocity of exp(tG).p matches the Killing field
        z0 = sec.point(np.array([0.2, 0.1]))
        flow = 0.0
        for idx in range(2):
            h = 1e-5
            zp = spec.translate(np.eye(2)[idx] * h, z0)
            zm = spec.translate(-np.eye(2)[idx] * h, z0)
            up = sp.phase_align(z0, zp)
            um = sp.phase_align(z0, zm)
            vel = sp.project_horizontal(z0, (up * zp - um * zm) / (2 * h))
            flow = max(flow, float(sp.norm(vel - spec.killing_vec(idx, z0))))
        res.expect(f"{label}:flow_oracle", flow, 1e-6)
        # orbit curvature constancy along 10 group translates
        f1, f2 = sec.tangent_frame(z0)
        od0 = orbit_shape_operator(spec, AmbientPoint(sp, z0), f1)
        spread = 0.0
        for _ in range(10):
            s = rng.uniform(-1.0, 1.0, size=2)
            m = spec.group_element(s)
            od = orbit_shape_operator(spec, AmbientPoint(sp, sp.normalize_rep(m @ z0)),
                                      sp.project_horizontal(m @ z0, m @ f1))
            spread = max(spread,
                         abs(od.orbit_principal_curvatures[0] - od0.orbit_principal_curvatures[0]),
                         abs(od.orbit_principal_curvatures[1] - od0.orbit_principal_curvatures[1]))
        res.expect(f"{label}:orbit_curvature_equivariance", spread, 1e-6)
        # mean curvature field tangent to the section
        htan = 0.0
        for q in pts[:8]:
            z = sec.point(q)
            if not spec.is_regular(z):
                continue
            geo = orbit_geometry(spec, z)
            htan = max(htan, max(abs(float(sp.g(geo.mean_curvature, geo.basis[i])))
                                 for i in range(2)))
        res.expect(f"{label}:mean_curvature_in_section", htan, 1e-8)
        # Phi: nonvanishing, odd, zero set even and resolution-stable
        phimax_min = np.inf
        parity_ok = True
        stable_ok = True
        refined = 0.0
        odd = 0.0
        npts = 0
        attempts = 0
        while npts < 5 and attempts < 40:
            attempts += 1
            q = rng.uniform(-rr, rr, size=2)
            z = sec.point(q)
            if not spec.is_regular(z, tol=1e-6):
                continue
            npts += 1
            thetas = np.linspace(0, 2 * np.pi, 720, endpoint=False)
            vals = phi_profile(spec, z, thetas)
            phimax_min = min(phimax_min, float(np.max(np.abs(vals))))
            odd = max(odd, float(np.max(np.abs(
                vals + phi_profile(spec, z, thetas + np.pi)))))
            p = AmbientPoint(sp, z)
            z360 = hopf_directions(spec, p, n_samples=360, tol=1e-12)
            z720 = hopf_directions(spec, p, n_samples=720, tol=1e-12)
            parity_ok &= len(z720) % 2 == 0 and len(z720) >= 2
            stable_ok &= len(z360) == len(z720)
            refined = max(refined, max(d["phi"] for d in z720))
        res.expect_above(f"{label}:phi_not_identically_zero", phimax_min, 1e-6)
        res.expect(f"{label}:phi_odd", odd, 1e-10)
        res.expect_true(f"{label}:phi_zeros_even_and_at_least_two", parity_ok)
        res.expect_true(f"{label}:phi_zero_count_stable", stable_ok)
        res.expect(f"{label}:phi_zero_refinement", refined, 1e-10)
    # fixed points of the torus actions
    cp = load_action("cp2-torus")
    fp = cp.space.normalize_rep(np.eye(3, dtype=complex)[0])
    res.expect("cp2-torus:fixed_point_killing", max(
        float(cp.space.norm(cp.killing_vec(i, fp))) for i in range(2)), 1e-12)
    ch = load_action("ch2-torus")
    fph = ch.space.normalize_rep(np.eye(3, dtype=complex)[0])
    res.expect("ch2-torus:fixed_point_killing", max(
        float(ch.space.norm(ch.killing_vec(i, fph))) for i in range(2)), 1e-12)
    # minimal Clifford orbit at the torus-center point
    geo = orbit_geometry(cp, cp.section.point(np.zeros(2)))
    res.expect("cp2-torus:clifford_orbit_minimal",
               float(cp.space.norm(geo.mean_curvature)), 1e-8)
    return res


# -- frames ---------------------------------------------------------------------


def suite_frames(ws: Workspace) -> SuiteResult:
    res = SuiteResult("frames")
    ehs = ws.cmc_patch("cp2-torus")
    grid = ehs.patch.grid((6, 3, 3), margin=0.05)
    sd = shape_data(ehs.patch, grid)
    worst = ab = 0.0
    for i in range(len(grid)):
        fr = _frame_of(sd, i, TAU_PROJ, TAU_MULT)
        worst = max(worst, max(fr.residuals.values()))
        ab = max(ab, abs(fr.a ** 2 + fr.b ** 2 - 1.0))
    res.expect("cmc_patch:prop_frame_identities", worst, 1e-6)
    res.expect("cmc_patch:a2_plus_b2", ab, 1e-10)
    res.expect("cmc_patch:shape_symmetry", float(np.max(sd.asym)), 1e-8)
    loh = ws.catalog_entry("lohnherr")
    sdl = shape_data(loh.patch, loh.patch.grid((4, 3, 3), margin=0.06))
    frl = _frame_of(sdl, 0, TAU_PROJ, TAU_MULT)
    res.expect("lohnherr:a_equals_b_1_over_sqrt2",
               max(abs(frl.a - 1 / np.sqrt(2)), abs(frl.b - 1 / np.sqrt(2))), 1e-6)
    sphere = ws.catalog_entry("geodesic-sphere")
    probe = sphere.patch.grid((2, 2, 2), margin=0.2)
    sds = shape_data(sphere.patch, probe)
    hvals = {_h_of(sds, i, TAU_PROJ, TAU_MULT) for i in range(len(probe))}
    res.expect_true("geodesic_sphere:h_equals_1", hvals == {1})
    try:
        _frame_of(sds, 0, TAU_PROJ, TAU_MULT)
        raised = False
    except Exception:
        raised = True
    res.expect_true("geodesic_sphere:frame_rejects_h1", raised)
    return res


# -- connection -----------------------------------------------------------------


def suite_connection(ws: Workspace) -> SuiteResult:
    res = SuiteResult("connection")
    for label in ("cp2-torus", "ch2-g0"):
        ehs = ws.cmc_patch(label)
        box = ehs.patch.box
        mid = [0.3 * (box[0][0] + box[0][1]) + 0.2 * box[0][1], 0.03, -0.04]
        for mode in ("strong", "generic"):
            rep = verify_connection_formulas(ehs.patch, np.array(mid), mode=mode)
            if rep.get("skipped_degenerate"):
                res.expect_true(f"{label}:{mode}_skipped_degenerate_ok", True)
                continue
            res.expect(f"{label}:{mode}_connection_entries", rep["max_entry_residual"], 1e-3)
            res.expect(f"{label}:{mode}_derivative_identities", rep["max_identity_residual"], 1e-3)
        # Prop 4.2 strongly-2-Hopf specifics
        sd = shape_data(ehs.patch, np.array(mid)[None])
        fr, scalars, nabla, _ = frame_derivative_data(ehs.patch, sd, 0)
        sp = ehs.space
        res.expect(f"{label}:nabla_AA", float(sp.norm(nabla[("A", "A")])), 1e-4)
        res.expect(f"{label}:D_derivatives_vanish",
                   max(abs(scalars["Ualpha"]), abs(scalars["Valpha"]),
                       abs(scalars["Ubeta"]), abs(scalars["Vbeta"])), 1e-4)
        # independent flow-composition bracket versus the connection route
        def u_fn(p, _patch=ehs.patch):
            return _frame_of(shape_data(_patch, p[None]), 0, TAU_PROJ, TAU_MULT).U

        def v_fn(p, _patch=ehs.patch):
            return _frame_of(shape_data(_patch, p[None]), 0, TAU_PROJ, TAU_MULT).V

        br_flow = bracket_by_flows(ehs.patch, np.array(mid), u_fn, v_fn)
        br_conn = nabla[("U", "V")] - nabla[("V", "U")]
        res.expect(f"{label}:bracket_flow_vs_connection",
                   float(sp.norm(br_flow - br_conn)), 1e-5)
        res.expect(f"{label}:integrability",
                   abs(float(sp.g(br_conn, fr.A))), 1e-5)
    return res


# -- gauss-codazzi ---------------------------------------------------------------


def suite_gauss_codazzi(ws: Workspace) -> SuiteResult:
    res = SuiteResult("gauss-codazzi")
    rng = ws.rng("gc")
    for name in cat.CATALOG_NAMES:
        entry = ws.catalog_entry(name)
        probe = entry.patch.grid((2, 2, 2), margin=0.25)[::3][:2]
        worst_g = worst_c = 0.0
        for p in probe:
            out = verify_gauss_codazzi(entry.patch, p, rng=rng, n_random=20)
            worst_g = max(worst_g, out["gauss"])
            worst_c = max(worst_c, out["codazzi"])
        res.expect(f"{name}:gauss", worst_g, 1e-4)
        res.expect(f"{name}:codazzi", worst_c, 1e-4)
    for label in LABELS:
        ehs = ws.cmc_patch(label)
        p = ehs.patch.grid((3, 3, 3), margin=0.2)[13]
        out = verify_gauss_codazzi(ehs.patch, p, rng=rng, n_random=20)
        res.expect(f"cmc-{label}:gauss", out["gauss"], 1e-4)
        res.expect(f"cmc-{label}:codazzi", out["codazzi"], 1e-4)
    # negative control: corrupted shape operator must blow the residuals up
    entry = ws.catalog_entry("geodesic-sphere")
    pert = np.zeros((3, 3)); pert[0, 1] = pert[1, 0] = 0.05
    out = verify_gauss_codazzi(entry.patch, entry.patch.grid((2, 2, 2), margin=0.3)[0],
                               rng=rng, n_random=20, shape_perturbation=pert)
    res.expect_above("negative_control:corrupted_codazzi",
                     max(out["codazzi"], out["gauss"]), 1e-2)
    return res


# -- austere ---------------------------------------------------------------------


def suite_austere(ws: Workspace) -> SuiteResult:
    from .hypersurface import classify

    res = SuiteResult("austere")
    expected_nonempty = {"cp2-torus": True, "ch2-torus": True, "ch2-g0": True,
                         "ch2-k0-g2a": False, "ch2-line-g2a": True}
    for label in LABELS:
        spec, found = ws.austere_candidates(label)
        if not expected_nonempty[label]:
            res.expect_true(f"{label}:no_austere_curves", len(found) == 0)
            continue
        res.expect_true(f"{label}:austere_curves_found", len(found) > 0)
        if not found:
            continue
        cand = found[0]
        ehs = build_hypersurface(spec, cand.curve, s_extent=0.2)
        rep = classify(ehs.patch, ehs.patch.grid((5, 4, 4), margin=0.05),
                       derivative_subsample=3)
        res.expect(f"{label}:austere_residual", rep.residuals["austere"], 1e-3)
        res.expect_true(f"{label}:ruled", rep.ruled)
        res.expect_true(f"{label}:levi_flat", rep.levi_flat)
        sd = shape_data(ehs.patch, ehs.patch.grid((3, 2, 2), margin=0.1))
        fr = _frame_of(sd, 0, TAU_PROJ, TAU_MULT)
        res.expect(f"{label}:a_b_sqrt2",
                   max(abs(fr.a - 1 / np.sqrt(2)), abs(fr.b - 1 / np.sqrt(2))), 1e-4)
        # Prop 5.2 exclusion: no J xi projection onto the 0-eigenvalue space
        mid_idx = np.argsort(np.abs(sd.eigvals[0]))[0]
        coords = np.array([float(np.real(sd._sp.herm(sd.eigvecs[0, i], 1j * sd.frames.xi[0])))
                           for i in range(3)])
        res.expect(f"{label}:no_projection_on_zero_eigenspace",
                   abs(coords[mid_idx]), TAU_PROJ)
    # Lohnherr spectrum at 20 grid points (c = -4)
    loh = ws.catalog_entry("lohnherr")
    grid = loh.patch.grid((20, 1, 1), margin=0.03)
    sd = shape_data(loh.patch, grid)
    target = np.array([1.0, 0.0, -1.0])
    res.expect("lohnherr:spectrum_1_0_m1",
               float(np.max(np.abs(sd.eigvals - target))), 1e-4)
    res.expect("lohnherr:spectrum_spread",
               float(np.max(sd.eigvals.max(axis=0) - sd.eigvals.min(axis=0))), 1e-4)
    # cross-construction: search output lies on the catalog Clifford cone
    spec, found = ws.austere_candidates("ch2-torus")
    if found:
        cone = ws.catalog_entry("clifford-cone-ch2")
        ehs = build_hypersurface(spec, found[0].curve, s_extent=0.15)
        res.expect("ch2_cone_vs_search_hausdorff",
                   _one_sided_hausdorff(ehs, cone), 1e-4)
    return res


def _one_sided_hausdorff(ehs, cone_entry, n_probe=5):
    """Max over probe points of the distance to the cone patch (refined)."""
    from scipy.optimize import minimize

    sp = ehs.space
    probes = ehs.patch.eval(ehs.patch.grid((n_probe, 1, 1), margin=0.2))
    box = cone_entry.patch.box
    worst = 0.0
    for z in probes:
        def obj(q):
            qq = np.clip(q, [b[0] for b in box], [b[1] for b in box])
            return float(sp.dist(cone_entry.patch.eval(qq[None])[0], z))

        seeds = cone_entry.patch.grid((4, 4, 4), margin=0.05)
        d0 = [obj(s) for s in seeds]
        best = seeds[int(np.argmin(d0))]
        r = minimize(obj, best, method="Nelder-Mead",
                     options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 600})
        worst = max(worst, float(r.fun))
    return worst


# -- cmc -------------------------------------------------------------------------


def suite_cmc(ws: Workspace) -> SuiteResult:
    res = SuiteResult("cmc")
    for label in LABELS:
        ehs = ws.cmc_patch(label, eta=1.0)
        cert = strongly_2hopf_certify(ehs, grid_shape=(20, 5, 5))
        res.expect_true(f"{label}:h2_everywhere",
                        cert.residuals["h_values"] == [2])
        res.expect(f"{label}:integrability", cert.residuals["integrability"], 1e-5)
        res.expect(f"{label}:D_spectrum_constancy",
                   cert.residuals["spectrum_constancy_D"], 1e-4)
        res.expect(f"{label}:leaf_flat", cert.residuals["leaf_intrinsic_curvature"], 1e-3)
        res.expect(f"{label}:leaf_totally_real",
                   cert.residuals["leaf_totally_real_defect"], 1e-6)
        res.expect(f"{label}:nabla_AA", cert.residuals["nabla_AA"], 1e-4)
        res.expect_true(f"{label}:certified", cert.passed)
        grid = ehs.patch.grid((6, 3, 3), margin=0.05)
        traces = shape_data(ehs.patch, grid).eigvals.sum(axis=1)
        res.expect(f"{label}:mean_curvature_eq_eta",
                   float(np.max(np.abs(traces - 1.0))), 1e-3)
        # launch exactly at a w_p direction: Hopf at the launch point
        wp = ws.wp_patch(label)
        sd = shape_data(wp.patch, np.array([[0.0, 0.0, 0.0]]))
        res.expect_true(f"{label}:wp_launch_hopf_at_p",
                        _h_of(sd, 0, TAU_PROJ, TAU_MULT) == 1)
    # Hopf rigidity across the catalog (Theorem-level relation + constancy)
    for name in ("geodesic-sphere", "horosphere", "tube-rp2", "tube-ch1"):
        entry = ws.catalog_entry(name)
        grid = entry.patch.grid((3, 3, 3), margin=0.1)
        sd = shape_data(entry.patch, grid)
        res.expect(f"{name}:spectrum_spread",
                   float(np.max(sd.eigvals.max(axis=0) - sd.eigvals.min(axis=0))), 1e-4)
        rel = max(hopf_cmc_relation_check(entry.patch, grid[k]) for k in (0, len(grid) // 2))
        res.expect(f"{name}:hopf_cmc_relation", rel, 1e-6)
    horo = ws.catalog_entry("horosphere")
    sd = shape_data(horo.patch, horo.patch.grid((3, 3, 3), margin=0.1))
    res.expect("horosphere:spectrum_2_1_1",
               float(np.max(np.abs(np.sort(sd.eigvals, axis=1)[:, ::-1]
                                   - np.array([2.0, 1.0, 1.0])))), 1e-4)
    # time-reversal oracle: restarting from the far endpoint with the
    # reversed velocity (and hence flipped Frenet normal, so eta -> -eta)
    # must retrace the same points
    spec, p0, z0, zeros = ws.launch_data("cp2-torus")
    f1, f2 = spec.section.tangent_frame(z0)
    w0 = np.cos(0.4) * f1 + np.sin(0.4) * f2
    fwd = integrate_sigma(spec, p0, w0, CurveLaw("cmc", eta=1.0),
                          n_steps=40, two_sided=False)
    end = AmbientPoint(spec.space, fwd.zs[-1])
    bwd = integrate_sigma(spec, end, -fwd.ws[-1], CurveLaw("cmc", eta=-1.0),
                          n_steps=40, two_sided=False)
    rev = max(float(spec.space.dist(fwd.zs[-1 - k], bwd.zs[k]))
              for k in range(len(fwd.ts)))
    res.expect("cmc_time_reversal_oracle", rev, 1e-7)
    return res


# -- levi-flat -------------------------------------------------------------------


def suite_leviflat(ws: Workspace) -> SuiteResult:
    from .hypersurface import levi_form

    res = SuiteResult("levi-flat")
    # minimal Levi-flat: relaunch the Lohnherr data under the Levi-flat law
    spec, found = ws.austere_candidates("ch2-line-g2a")
    res.expect_true("lohnherr_curve_available", bool(found))
    if found:
        sig0 = found[0].curve
        k = len(sig0.ts) // 2
        sigma = integrate_sigma(spec, AmbientPoint(spec.space, sig0.zs[k]), sig0.ws[k],
                                CurveLaw("levi-flat"), n_steps=120)
        ehs = build_hypersurface(spec, sigma, s_extent=0.2)
        cert = leviflat_cmc_certify(ehs, eta=0.0)
        res.expect_true("minimal_leviflat_certifies", cert.passed)
        res.expect("minimal_leviflat_levi_sup", cert.residuals["levi_sup"], 1e-3)
        grid = ehs.patch.grid((5, 3, 3), margin=0.05)
        sd = shape_data(ehs.patch, grid)
        gam = beta_plus_alpha = 0.0
        for i in range(len(grid)):
            fr = _frame_of(sd, i, TAU_PROJ, TAU_MULT)
            gam = max(gam, abs(fr.gamma))
            beta_plus_alpha = max(beta_plus_alpha, abs(fr.alpha + fr.beta))
        res.expect("minimal_leviflat_gamma_eq_eta_over_4", gam, 1e-3)
        res.expect("minimal_leviflat_beta_eq_minus_alpha", beta_plus_alpha, 1e-3)
    # Levi-flat law from a generic start: Levi form vanishes along the patch
    spec2, p0, z0, zeros = ws.launch_data("ch2-g0")
    f1, f2 = spec2.section.tangent_frame(z0)
    w0 = np.cos(0.9) * f1 + np.sin(0.9) * f2
    sigma2 = integrate_sigma(spec2, p0, w0, CurveLaw("levi-flat"), n_steps=150)
    ehs2 = build_hypersurface(spec2, sigma2, s_extent=0.15)
    certs = leviflat_cmc_certify(ehs2, eta=0.0)
    res.expect("leviflat_law_levi_sup", certs.residuals["levi_sup"], 1e-3)
    # the nonminimal Levi-flat + CMC attempt must fail with witnesses
    cert1 = leviflat_cmc_certify(ehs2, eta=1.0)
    res.expect_true("nonminimal_attempt_fails", not cert1.passed)
    res.expect_above("nonminimal_attempt_witness",
                     max(cert1.residuals["mean_curvature_error"],
                         cert1.residuals["mean_curvature_spread"],
                         cert1.residuals["levi_sup"]), 1e-3)
    # pointwise Levi form: symmetry and the frame formula
    ehs3 = ws.cmc_patch("cp2-torus")
    mid = np.array([0.02, 0.01, -0.03])
    sd = shape_data(ehs3.patch, mid[None])
    fr = _frame_of(sd, 0, TAU_PROJ, TAU_MULT)
    sp = ehs3.space
    laa = levi_form(ehs3.patch, mid, fr.A, fr.A)
    res.expect("levi_form_frame_formula",
               abs(laa - (fr.gamma + fr.b ** 2 * fr.alpha + fr.a ** 2 * fr.beta)), 1e-6)
    jA = 1j * fr.A
    res.expect("levi_form_symmetric",
               abs(levi_form(ehs3.patch, mid, fr.A, jA) - levi_form(ehs3.patch, mid, jA, fr.A)),
               1e-8)
    loh = ws.catalog_entry("lohnherr")
    gridl = loh.patch.grid((4, 2, 2), margin=0.1)
    sdl = shape_data(loh.patch, gridl)
    from .hypersurface import _levi_scalar

    res.expect("lohnherr_levi_flat",
               max(abs(_levi_scalar(sdl, i)) for i in range(len(gridl))), 1e-4)
    return res


_SUITES = {
    "ambient": suite_ambient,
    "actions": suite_actions,
    "frames": suite_frames,
    "connection": suite_connection,
    "gauss-codazzi": suite_gauss_codazzi,
    "austere": suite_austere,
    "cmc": suite_cmc,
    "levi-flat": suite_leviflat,
}


def run_suites(names, seed: int = 7):
    """Run the named suites (or 'all') sharing one workspace; deterministic."""
    if isinstance(names, str):
        names = [names]
    if "all" in names:
        names = list(SUITE_NAMES)
    unknown = [n for n in names if n not in _SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s) {unknown}; choose from {SUITE_NAMES + ('all',)}")
    ws = Workspace(seed)
    return [_SUITES[n](ws) for n in names]
