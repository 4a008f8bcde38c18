"""Extrinsic analysis of parametrized real hypersurfaces.

A patch is a batched chart ``params (N,3) -> representatives (N,3)`` over a
rectangular box. Shape operators come from central differences of the unit
normal (phase-aligned representatives, horizontally projected), the adapted
frame {U, V, A} and the functions a, b follow the positive-projection
conventions, and the classification predicates (Hopf, austere, Levi-flat,
ruled, CMC) are decided at explicit, reported tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ambient import AmbientPoint, AmbientTangent, GeometryError, SpaceForm

TAU_MULT = 1e-4       # eigenvalue clustering, relative to spectrum spread
TAU_PROJ = 1e-4       # Hopf projection threshold
IMMERSION_TOL = 1e-10

DEFAULT_TOLERANCES = {
    "tau_mult": TAU_MULT,
    "tau_proj": TAU_PROJ,
    "integrable": 1e-5,
    "spectrum_constancy": 1e-4,
    "austere": 1e-3,
    "levi_flat": 1e-3,
    "ruled": 1e-4,
    "cmc_spread": 1e-3,
}


class ImmersionError(GeometryError):
    """Coordinate velocities degenerate at the requested parameters."""


class FrameError(GeometryError):
    """Adapted frame unavailable (h != 2 or unresolved clusters)."""


@dataclass(eq=False)
class HypersurfacePatch:
    """Parametrized hypersurface patch with a finite-difference scheme."""

    space: SpaceForm
    chart: Callable[[np.ndarray], np.ndarray]   # (N, 3) params -> (N, 3) reps
    box: tuple                                   # ((t0,t1), (a0,a1), (b0,b1))
    # 1e-4 balances O(h^2) truncation against the eps/h^2 noise of the
    # nested normal-field differences
    diff_step: float = 1e-4
    orientation: float = 1.0

    def eval(self, params):
        params = np.asarray(params, dtype=float)
        flat = params.reshape(-1, 3)
        out = self.chart(flat)
        return out.reshape(params.shape[:-1] + (3,))

    def grid(self, shape, margin=0.0):
        """Uniform parameter grid of the given shape inside the box."""
        axes = []
        for (lo, hi), n in zip(self.box, shape):
            pad = margin * (hi - lo)
            axes.append(np.linspace(lo + pad, hi - pad, n))
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def contains(self, params, slack=1e-9):
        params = np.atleast_2d(np.asarray(params, dtype=float))
        for k, (lo, hi) in enumerate(self.box):
            if np.any(params[:, k] < lo - slack) or np.any(params[:, k] > hi + slack):
                return False
        return True

    def with_diff_step(self, h):
        """Twin patch with a different differentiation step.

        Frame-field differencing wants a coarser step than pointwise shape
        data: the eps/h^2 noise of the nested normal stencils passes through
        the eigenvector pipeline and dominates second-level derivatives.
        """
        return HypersurfacePatch(self.space, self.chart, self.box,
                                 diff_step=h, orientation=self.orientation)


# -- frames: coordinate tangents and the oriented unit normal ----------------


@dataclass(eq=False)
class PointFrames:
    params: np.ndarray   # (N, 3)
    z: np.ndarray        # (N, 3) representatives
    v: np.ndarray        # (N, 3, 3) coordinate velocities v[n, k]
    xi: np.ndarray       # (N, 3) oriented unit normal
    gram_det: np.ndarray # (N,)


def _phases(sp: SpaceForm, z_ref, z):
    w = sp.herm(z_ref, z)
    return np.sign(sp.kappa) * np.conj(w) / np.abs(w)


def _complex_frame(sp: SpaceForm, z):
    """Deterministic H-orthonormal basis (f1, f2) of the horizontal space."""
    n = z.shape[0]
    eye = np.eye(3, dtype=complex)
    cands = np.stack([np.broadcast_to(eye[i], (n, 3)) for i in range(3)], axis=1)
    proj = sp.project_horizontal(z[:, None, :], cands)
    norms = np.real(sp.herm(proj, proj))
    best = np.argmax(norms, axis=1)
    f1 = np.take_along_axis(proj, best[:, None, None], axis=1)[:, 0]
    f1 = f1 / np.sqrt(np.real(sp.herm(f1, f1)))[:, None]
    rest = proj - sp.herm(f1[:, None, :], proj)[..., None] * f1[:, None, :]
    rnorms = np.real(sp.herm(rest, rest))
    rnorms[np.arange(n), best] = -1.0
    best2 = np.argmax(rnorms, axis=1)
    f2 = np.take_along_axis(rest, best2[:, None, None], axis=1)[:, 0]
    f2 = f2 / np.sqrt(np.real(sp.herm(f2, f2)))[:, None]
    return f1, f2


def _det3(a, b, c):
    return (a[..., 0] * (b[..., 1] * c[..., 2] - b[..., 2] * c[..., 1])
            - a[..., 1] * (b[..., 0] * c[..., 2] - b[..., 2] * c[..., 0])
            + a[..., 2] * (b[..., 0] * c[..., 1] - b[..., 1] * c[..., 0]))


def _oriented_normal(sp: SpaceForm, z, v, orientation):
    """Unit normal to span{v1,v2,v3} in the horizontal space at z.

    The sign convention makes (v1, v2, v3, xi) positively oriented for the
    complex orientation of the horizontal plane; ``orientation`` flips it.
    """
    f1, f2 = _complex_frame(sp, z)

    def coords(u):
        a = sp.herm(f1, u)
        b = sp.herm(f2, u)
        return np.stack([a.real, a.imag, b.real, b.imag], axis=-1)

    rows = np.stack([coords(v[:, k]) for k in range(3)], axis=-1)  # (N, 4, 3)
    r0, r1, r2, r3 = rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]
    x0 = -_det3(r1, r2, r3)
    x1 = _det3(r0, r2, r3)
    x2 = -_det3(r0, r1, r3)
    x3 = _det3(r0, r1, r2)
    xi = (x0 + 1j * x1)[:, None] * f1 + (x2 + 1j * x3)[:, None] * f2
    norms = sp.norm(xi)
    if np.any(norms < 1e-14):
        raise ImmersionError("degenerate tangent frame; no unit normal")
    return orientation * xi / norms[:, None]


def frames_at(patch: HypersurfacePatch, params) -> PointFrames:
    """Coordinate velocities and oriented unit normal at each parameter."""
    sp = patch.space
    params = np.atleast_2d(np.asarray(params, dtype=float))
    n = params.shape[0]
    h = patch.diff_step
    offsets = np.zeros((7, 3))
    for k in range(3):
        offsets[1 + 2 * k, k] = h
        offsets[2 + 2 * k, k] = -h
    stencil = params[:, None, :] + offsets[None, :, :]
    zs = patch.eval(stencil)                 # (N, 7, 3)
    z0 = zs[:, 0]
    u = _phases(sp, z0[:, None, :], zs[:, 1:])
    aligned = u[..., None] * zs[:, 1:]
    v = np.empty((n, 3, 3), dtype=complex)
    for k in range(3):
        dz = (aligned[:, 2 * k] - aligned[:, 2 * k + 1]) / (2.0 * h)
        v[:, k] = sp.project_horizontal(z0, dz)
    g = np.real(sp.herm(v[:, :, None, :], v[:, None, :, :]))
    gram = np.linalg.det(g)
    if np.any(gram <= IMMERSION_TOL):
        bad = params[gram <= IMMERSION_TOL][0]
        raise ImmersionError(f"immersion fails at params {bad} (gram det <= {IMMERSION_TOL})")
    xi = _oriented_normal(sp, z0, v, patch.orientation)
    return PointFrames(params=params, z=z0, v=v, xi=xi, gram_det=gram)


# -- shape operator -----------------------------------------------------------


@dataclass(eq=False)
class ShapeData:
    """Batched second-order data: orthonormal tangents, S, spectrum."""

    frames: PointFrames
    E: np.ndarray          # (N, 3, 3) orthonormal tangent basis
    W: np.ndarray          # (N, 3, 3) E_a = sum_k W[n, k, a] v[n, k]
    S: np.ndarray          # (N, 3, 3) symmetric shape matrix in the E basis
    eigvals: np.ndarray    # (N, 3) descending
    eigvecs: np.ndarray    # (N, 3, 3) ambient eigenvectors, eigvecs[n, i]
    jxi_coords: np.ndarray # (N, 3) coordinates of J xi in the E basis
    asym: np.ndarray       # (N,) symmetry defect of S before symmetrization
    _sp: SpaceForm = None

    def tangent_coords(self, n, u):
        """Coordinates of an ambient tangent u in the E basis at point n."""
        sp = self._sp
        return np.array([sp.g(u, self.E[n, a]) for a in range(3)])


def _gram_schmidt_with_coeffs(sp: SpaceForm, v):
    """Orthonormalize coordinate tangents, tracking E_a = sum_k W[k,a] v_k."""
    n = v.shape[0]
    E = np.empty_like(v)
    W = np.zeros((n, 3, 3))
    for a in range(3):
        vec = v[:, a].copy()
        coef = np.zeros((n, 3))
        coef[:, a] = 1.0
        for b in range(a):
            proj = sp.g(E[:, b], v[:, a])
            vec -= proj[:, None] * E[:, b]
            coef -= proj[:, None] * W[:, :, b]
        nrm = sp.norm(vec)
        E[:, a] = vec / nrm[:, None]
        W[:, :, a] = coef / nrm[:, None]
    return E, W


def shape_data(patch: HypersurfacePatch, params) -> ShapeData:
    """Shape operator, spectrum and eigenvectors at each parameter point."""
    sp = patch.space
    params = np.atleast_2d(np.asarray(params, dtype=float))
    n = params.shape[0]
    h = patch.diff_step
    base = frames_at(patch, params)
    offsets = np.zeros((6, 3))
    for k in range(3):
        offsets[2 * k, k] = h
        offsets[2 * k + 1, k] = -h
    displaced = (params[:, None, :] + offsets[None, :, :]).reshape(-1, 3)
    disp = frames_at(patch, displaced)
    xi_d = disp.xi.reshape(n, 6, 3)
    z_d = disp.z.reshape(n, 6, 3)
    u = _phases(sp, base.z[:, None, :], z_d)
    xi_al = u[..., None] * xi_d
    nabla_xi = np.empty((n, 3, 3), dtype=complex)   # nabla_{v_k} xi
    for k in range(3):
        d = (xi_al[:, 2 * k] - xi_al[:, 2 * k + 1]) / (2.0 * h)
        nabla_xi[:, k] = sp.project_horizontal(base.z, d)
    E, W = _gram_schmidt_with_coeffs(sp, base.v)
    # S_tilde[k, b] = -g(nabla_{v_k} xi, E_b)
    st = -np.real(sp.herm(nabla_xi[:, :, None, :], E[:, None, :, :]))
    s = np.einsum("nka,nkb->nab", W, st)
    asym = np.abs(s - np.swapaxes(s, 1, 2)).max(axis=(1, 2))
    s = 0.5 * (s + np.swapaxes(s, 1, 2))
    vals, vecs = np.linalg.eigh(s)
    vals = vals[:, ::-1]
    vecs = vecs[:, :, ::-1]
    ambient = np.einsum("nai,nak->nik", vecs, E)   # (N, i, 3)
    jxi = 1j * base.xi
    jc = np.real(sp.herm(E, jxi[:, None, :]))
    out = ShapeData(frames=base, E=E, W=W, S=s, eigvals=vals, eigvecs=ambient,
                    jxi_coords=jc, asym=asym)
    out._sp = sp
    return out


# -- spectrum, clusters, Hopf count ------------------------------------------


@dataclass(frozen=True)
class ShapeSpectrum:
    """Principal curvatures (descending) with clustering at tau_mult."""

    eigenvalues: tuple
    frames: np.ndarray        # (3, 3) ambient eigenvectors
    clusters: tuple           # tuple of index tuples
    tau_mult: float

    @property
    def multiplicities(self):
        return tuple(len(cl) for cl in self.clusters)


def _clusters(vals, tau_mult):
    spread = float(vals[0] - vals[-1])
    thr = tau_mult * max(spread, 1e-6)
    groups = [[0]]
    for i in range(1, len(vals)):
        if vals[i - 1] - vals[i] > thr:
            groups.append([i])
        else:
            groups[-1].append(i)
    return tuple(tuple(g) for g in groups)


def _cluster_projections(sd: ShapeData, n, tau_mult):
    clusters = _clusters(sd.eigvals[n], tau_mult)
    coords = np.array([float(np.real(sd._sp.herm(sd.eigvecs[n, i], 1j * sd.frames.xi[n])))
                       for i in range(3)])
    norms = [float(np.sqrt(np.sum(coords[list(cl)] ** 2))) for cl in clusters]
    return clusters, coords, norms


def shape_operator(patch: HypersurfacePatch, params, tau_mult=TAU_MULT):
    """Public per-point shape operator: (ShapeSpectrum, unit normal)."""
    sd = shape_data(patch, np.atleast_2d(params)[:1])
    clusters = _clusters(sd.eigvals[0], tau_mult)
    point = AmbientPoint(patch.space, sd.frames.z[0])
    spectrum = ShapeSpectrum(tuple(float(x) for x in sd.eigvals[0]),
                             sd.eigvecs[0], clusters, tau_mult)
    return spectrum, AmbientTangent(point, sd.frames.xi[0])


def hopf_projection_count(patch: HypersurfacePatch, params,
                          tau_proj=TAU_PROJ, tau_mult=TAU_MULT) -> int:
    """h = number of eigenvalue clusters onto which J xi projects."""
    sd = shape_data(patch, np.atleast_2d(params)[:1])
    return _h_of(sd, 0, tau_proj, tau_mult)


def _h_of(sd: ShapeData, n, tau_proj, tau_mult):
    _, _, norms = _cluster_projections(sd, n, tau_mult)
    return int(sum(1 for x in norms if x > tau_proj))


# -- adapted frame ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AdaptedFrame:
    """Orthonormal frame {U, V, A} with J xi = a U + b V (a, b > 0)."""

    U: np.ndarray
    V: np.ndarray
    A: np.ndarray
    xi: np.ndarray
    a: float
    b: float
    alpha: float
    beta: float
    gamma: float
    residuals: dict


def _frame_of(sd: ShapeData, n, tau_proj=TAU_PROJ, tau_mult=TAU_MULT) -> AdaptedFrame:
    sp = sd._sp
    clusters, coords, norms = _cluster_projections(sd, n, tau_mult)
    proj_idx = [i for i, x in enumerate(norms) if x > tau_proj]
    if len(proj_idx) != 2:
        raise FrameError(f"adapted frame needs h = 2, found h = {len(proj_idx)}")
    ca, cb = proj_idx[0], proj_idx[1]   # clusters sorted by descending eigenvalue

    def cluster_vec(cl):
        vec = np.zeros(3, dtype=complex)
        for i in cl:
            vec += coords[i] * sd.eigvecs[n, i]
        return vec

    def isolation(cl):
        ins = [sd.eigvals[n, i] for i in cl]
        outs = [sd.eigvals[n, i] for c2 in clusters for i in c2 if i not in cl]
        return min(abs(x - y) for x in ins for y in outs) if outs else np.inf

    # J xi has no component outside the two projected clusters, so the
    # second vector is the complement of the better-isolated projection:
    # this stays well conditioned when the third eigenvalue nearly crosses
    # one of the projected ones.
    full = cluster_vec(range(3))
    if isolation(clusters[ca]) >= isolation(clusters[cb]):
        uvec = cluster_vec(clusters[ca])
        vvec = full - uvec
    else:
        vvec = cluster_vec(clusters[cb])
        uvec = full - vvec
    a = float(sp.norm(uvec))
    b = float(sp.norm(vvec))
    U = uvec / a
    V = vvec / b
    alpha = float(np.mean([sd.eigvals[n, i] for i in clusters[ca]]))
    beta = float(np.mean([sd.eigvals[n, i] for i in clusters[cb]]))
    xi = sd.frames.xi[n]
    A = -(1j * U + a * xi) / b
    # gamma from the quadratic form; robust when gamma's cluster merged
    acoords = np.array([sp.g(A, sd.E[n, k]) for k in range(3)])
    gamma = float(acoords @ sd.S[n] @ acoords)
    jxi = 1j * xi
    res = {
        "frame_jxi": float(sp.norm(jxi - a * U - b * V)),
        "frame_ju": float(sp.norm(1j * U + b * A + a * xi)),
        "frame_jv": float(sp.norm(1j * V - a * A + b * xi)),
        "frame_ja": float(sp.norm(1j * A - b * U + a * V)),
        "a2b2": float(abs(a * a + b * b - 1.0)),
        "A_unit": float(abs(sp.norm(A) - 1.0)),
    }
    return AdaptedFrame(U=U, V=V, A=A, xi=xi, a=a, b=b,
                        alpha=alpha, beta=beta, gamma=gamma, residuals=res)


def adapted_frame(patch: HypersurfacePatch, params,
                  tau_proj=TAU_PROJ, tau_mult=TAU_MULT) -> AdaptedFrame:
    """Adapted frame of the h = 2 structure at a single parameter point."""
    sd = shape_data(patch, np.atleast_2d(params)[:1])
    return _frame_of(sd, 0, tau_proj, tau_mult)


# -- Levi form and pointwise predicates ----------------------------------------


def _complex_distribution_basis(sd: ShapeData, n):
    """Unit X tangent with g(X, J xi) = 0; (X, JX) spans (J xi)^perp cap TM."""
    sp = sd._sp
    jxi = 1j * sd.frames.xi[n]
    best, best_norm = None, -1.0
    for a in range(3):
        cand = sd.E[n, a] - sp.g(sd.E[n, a], jxi) * jxi
        nn = float(sp.norm(cand))
        if nn > best_norm:
            best, best_norm = cand, nn
    return best / best_norm


def _apply_S(sd: ShapeData, n, u):
    sp = sd._sp
    coords = np.array([sp.g(u, sd.E[n, a]) for a in range(3)])
    out_coords = sd.S[n] @ coords
    return np.einsum("a,ak->k", out_coords, sd.E[n])


def levi_form(patch: HypersurfacePatch, params, X, Y, tol=1e-6) -> float:
    """L(X, Y) = <S X, Y> + <S JX, JY> for X, Y in the complex distribution."""
    sd = shape_data(patch, np.atleast_2d(params)[:1])
    sp = sd._sp
    xv = X.vec if isinstance(X, AmbientTangent) else np.asarray(X, dtype=complex)
    yv = Y.vec if isinstance(Y, AmbientTangent) else np.asarray(Y, dtype=complex)
    jxi = 1j * sd.frames.xi[0]
    for u in (xv, yv):
        if abs(sp.g(u, jxi)) > tol * max(1.0, float(sp.norm(u))):
            raise GeometryError("Levi form arguments must be orthogonal to J xi")
    return float(sp.g(_apply_S(sd, 0, xv), yv) + sp.g(_apply_S(sd, 0, 1j * xv), 1j * yv))


def _levi_scalar(sd: ShapeData, n) -> float:
    x = _complex_distribution_basis(sd, n)
    sp = sd._sp
    return float(sp.g(_apply_S(sd, n, x), x) + sp.g(_apply_S(sd, n, 1j * x), 1j * x))


def _ruled_residual(sd: ShapeData, n) -> float:
    sp = sd._sp
    jxi = 1j * sd.frames.xi[n]
    x = _complex_distribution_basis(sd, n)
    worst = 0.0
    for u in (x, 1j * x):
        su = _apply_S(sd, n, u)
        worst = max(worst, float(sp.norm(su - sp.g(su, jxi) * jxi)))
    return worst


# -- directional machinery -----------------------------------------------------


def tangent_param_coords(sd: ShapeData, n, u):
    """Coordinates c with u = sum_k c_k v_k (solve the Gram system)."""
    sp = sd._sp
    v = sd.frames.v[n]
    g = np.real(sp.herm(v[:, None, :], v[None, :, :]))
    rhs = np.array([sp.g(v[k], u) for k in range(3)])
    return np.linalg.solve(g, rhs)


def _displaced_params(sd: ShapeData, n, u, step):
    c = tangent_param_coords(sd, n, u)
    p0 = sd.frames.params[n]
    return p0 + step * c, p0 - step * c


def covariant_fd(patch, sd: ShapeData, n, u, field_fn, step):
    """nabla_u of an ambient tangent field given by field_fn(params) -> vec.

    field_fn must return the field at the representative the patch chart
    produces for those params; phases are aligned here.
    """
    sp = sd._sp
    pp, pm = _displaced_params(sd, n, u, step)
    z0 = sd.frames.z[n]
    zp = patch.eval(pp[None])[0]
    zm = patch.eval(pm[None])[0]
    up = _phases(sp, z0, zp)
    um = _phases(sp, z0, zm)
    wp = up * field_fn(pp)
    wm = um * field_fn(pm)
    zdot = (up * zp - um * zm) / (2.0 * step)
    wdot = (wp - wm) / (2.0 * step)
    w0 = field_fn(sd.frames.params[n])
    vec = sp.project_horizontal(z0, wdot) - (sp.herm(z0, zdot) / sp.kappa) * w0
    return sp.project_horizontal(z0, vec)


# -- classification ------------------------------------------------------------


@dataclass
class ClassificationReport:
    """Grid-level classification with every backing residual."""

    h: int
    hopf: bool
    two_hopf: bool
    strongly_two_hopf: bool
    austere: bool
    levi_flat: bool
    ruled: bool
    mean_curvature: float
    residuals: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "h": self.h,
            "hopf": self.hopf,
            "two_hopf": self.two_hopf,
            "strongly_two_hopf": self.strongly_two_hopf,
            "austere": self.austere,
            "levi_flat": self.levi_flat,
            "ruled": self.ruled,
            "mean_curvature": self.mean_curvature,
            "residuals": {k: (v if isinstance(v, (int, float, str, list)) else float(v))
                          for k, v in sorted(self.residuals.items())},
            "tolerances": dict(sorted(self.tolerances.items())),
        }


def _frame_field_fn(patch, which, tau_proj, tau_mult):
    """Pointwise evaluator of one adapted-frame vector as a field."""

    def fn(params):
        sd = shape_data(patch, params[None])
        fr = _frame_of(sd, 0, tau_proj, tau_mult)
        return getattr(fr, which)

    return fn


FD_FRAME_STEP = 4e-4   # diff step of the twin patch used for frame-field FD


def frame_derivative_data(patch, sd: ShapeData, n, step=1e-3,
                          tau_proj=TAU_PROJ, tau_mult=TAU_MULT, fd_patch=None):
    """Directional derivatives of (alpha, beta, gamma, a, b) and the frame
    fields along U, V, A, plus covariant derivatives nabla_X Y for
    X, Y in {U, V, A}. Returns (frame, scalars dict, nabla dict, extras).

    Displaced frames are evaluated on a coarser-step twin patch so that the
    differencing amplifies ~1e-9 noise instead of ~1e-8.
    """
    sp = sd._sp
    if fd_patch is None:
        fd_patch = patch.with_diff_step(max(patch.diff_step, FD_FRAME_STEP))
    fr = _frame_of(sd, n, tau_proj, tau_mult)
    dirs = {"U": fr.U, "V": fr.V, "A": fr.A}
    frames_pm = {}
    for name, u in dirs.items():
        pp, pm = _displaced_params(sd, n, u, step)
        sd_p = shape_data(fd_patch, pp[None])
        sd_m = shape_data(fd_patch, pm[None])
        frames_pm[name] = (_frame_of(sd_p, 0, tau_proj, tau_mult), sd_p,
                           _frame_of(sd_m, 0, tau_proj, tau_mult), sd_m)
    scalars = {}
    for name in dirs:
        frp, _, frm, _ = frames_pm[name]
        for attr in ("alpha", "beta", "gamma", "a", "b"):
            scalars[f"{name}{attr}"] = (getattr(frp, attr) - getattr(frm, attr)) / (2.0 * step)
    nabla = {}
    z0 = sd.frames.z[n]
    xi0 = sd.frames.xi[n]
    for xname, u in dirs.items():
        pp, pm = _displaced_params(sd, n, u, step)
        frp, sd_p, frm, sd_m = frames_pm[xname]
        up = _phases(sp, z0, sd_p.frames.z[0])
        um = _phases(sp, z0, sd_m.frames.z[0])
        zdot = (up * sd_p.frames.z[0] - um * sd_m.frames.z[0]) / (2.0 * step)
        for yname in dirs:
            wp = up * getattr(frp, yname)
            wm = um * getattr(frm, yname)
            wdot = (wp - wm) / (2.0 * step)
            vec = sp.project_horizontal(z0, wdot) - (sp.herm(z0, zdot) / sp.kappa) * dirs[yname]
            vec = sp.project_horizontal(z0, vec)
            tang = vec - sp.g(vec, xi0) * xi0
            nabla[(xname, yname)] = tang
    return fr, scalars, nabla, frames_pm


def classify(patch: HypersurfacePatch, params_grid, tolerances=None,
             derivative_subsample=8, derivative_step=1e-3) -> ClassificationReport:
    """Evaluate the classification predicates over a parameter grid."""
    tols = dict(DEFAULT_TOLERANCES)
    if tolerances:
        tols.update(tolerances)
    params_grid = np.atleast_2d(np.asarray(params_grid, dtype=float))
    if not patch.contains(params_grid):
        raise GeometryError("classification grid leaves the parameter box")
    sd = shape_data(patch, params_grid)
    n = params_grid.shape[0]
    tau_proj, tau_mult = tols["tau_proj"], tols["tau_mult"]
    hs = np.array([_h_of(sd, i, tau_proj, tau_mult) for i in range(n)])
    traces = sd.eigvals.sum(axis=1)
    levi = np.array([_levi_scalar(sd, i) for i in range(n)])
    ruled_res = np.array([_ruled_residual(sd, i) for i in range(n)])
    austere_res = np.empty(n)
    frame_res = np.zeros(n)
    for i in range(n):
        if hs[i] == 2:
            fr = _frame_of(sd, i, tau_proj, tau_mult)
            austere_res[i] = max(abs(fr.alpha + fr.beta), abs(fr.gamma))
            frame_res[i] = max(fr.residuals.values())
        else:
            austere_res[i] = max(abs(sd.eigvals[i, 0] + sd.eigvals[i, 2]),
                                 abs(sd.eigvals[i, 1]))
    # directional data on a deterministic subsample of h=2 points
    idx2 = [i for i in range(n) if hs[i] == 2]
    take = idx2[:: max(1, len(idx2) // derivative_subsample)] if idx2 else []
    integ = spec_const = bracket_norm = 0.0
    for i in take:
        fr, scalars, nabla, _ = frame_derivative_data(
            patch, sd, i, step=derivative_step, tau_proj=tau_proj, tau_mult=tau_mult)
        sp = sd._sp
        bracket = nabla[("U", "V")] - nabla[("V", "U")]
        integ = max(integ, abs(float(sp.g(bracket, fr.A))))
        spec_const = max(spec_const, abs(scalars["Ualpha"]), abs(scalars["Valpha"]),
                         abs(scalars["Ubeta"]), abs(scalars["Vbeta"]))
    h_counts = {int(k): int((hs == k).sum()) for k in sorted(set(hs.tolist()))}
    h_mode = max(h_counts, key=lambda k: (h_counts[k], -k))
    all_h1 = bool(np.all(hs == 1))
    all_h2 = bool(np.all(hs == 2))
    two_hopf = all_h2 and integ < tols["integrable"]
    strongly = two_hopf and spec_const < tols["spectrum_constancy"]
    levi_flat = bool(np.max(np.abs(levi)) < tols["levi_flat"])
    ruled = bool(np.max(ruled_res) < tols["ruled"]) and levi_flat
    austere = bool(np.max(austere_res) < tols["austere"])
    spread = float(traces.max() - traces.min())
    report = ClassificationReport(
        h=int(h_mode),
        hopf=all_h1,
        two_hopf=two_hopf,
        strongly_two_hopf=strongly,
        austere=austere,
        levi_flat=levi_flat,
        ruled=ruled,
        mean_curvature=float(np.mean(traces)),
        residuals={
            "h_counts": [[k, v] for k, v in sorted(h_counts.items())],
            "integrability": float(integ),
            "spectrum_constancy_D": float(spec_const),
            "austere": float(np.max(austere_res)),
            "levi_sup": float(np.max(np.abs(levi))),
            "ruled": float(np.max(ruled_res)),
            "mean_curvature_spread": spread,
            "shape_asymmetry": float(np.max(sd.asym)),
            "frame_identities": float(np.max(frame_res)),
            "derivative_points": len(take),
        },
        tolerances=tols,
    )
    return report


# -- CMC / Hopf relation -------------------------------------------------------


def hopf_cmc_relation_check(patch: HypersurfacePatch, params, tol=1e-6,
                            tau_proj=TAU_PROJ, tau_mult=TAU_MULT) -> float:
    """|2 alpha (beta+gamma) - 4 beta gamma + c| at a Hopf point.

    alpha is the principal curvature of the J xi direction; beta, gamma the
    remaining ones. Raises unless the point is Hopf (h = 1).
    """
    sd = shape_data(patch, np.atleast_2d(params)[:1])
    clusters, coords, norms = _cluster_projections(sd, 0, tau_mult)
    proj = [i for i, x in enumerate(norms) if x > tau_proj]
    if len(proj) != 1:
        raise GeometryError(f"hopf_cmc_relation_check requires a Hopf point (h = {len(proj)})")
    hopf_cluster = clusters[proj[0]]
    alpha = float(np.mean([sd.eigvals[0, i] for i in hopf_cluster]))
    others = [sd.eigvals[0, i] for cl in clusters for i in cl if i not in hopf_cluster]
    if len(others) == 1:   # Hopf cluster has multiplicity 2
        others = others + [alpha]
        alpha = float(np.mean([sd.eigvals[0, i] for i in hopf_cluster]))
    beta, gamma = float(others[0]), float(others[1])
    c = patch.space.c
    return abs(2.0 * alpha * (beta + gamma) - 4.0 * beta * gamma + c)


# -- connection and curvature verifiers ----------------------------------------


def _nabla_table_generic(c, fr, s):
    """Prop-style Levi-Civita table for h = 2 with three distinct curvatures."""
    a, b = fr.a, fr.b
    al, be, ga = fr.alpha, fr.beta, fr.gamma
    Ua, Va, Aa = s["Ua"], s["Va"], s["Aa"]
    Ub, Vb, Ab = s["Ub"], s["Vb"], s["Ab"]
    Ual, Val, Aal = s["Ualpha"], s["Valpha"], s["Aalpha"]
    Ube, Vbe, Abe = s["Ubeta"], s["Vbeta"], s["Abeta"]
    Uga, Vga = s["Ugamma"], s["Vgamma"]
    t = {}
    t[("U", "U")] = (0.0, Val / (al - be), -(3 * a * b * c - 4 * Aal) / (4 * (al - ga)))
    t[("U", "V")] = (-Val / (al - be), 0.0,
                     al + (3 * a * a * b * c - 4 * a * Aal) / (4 * b * (al - ga)))
    t[("V", "V")] = (-Ube / (al - be), 0.0, (3 * a * b * c + 4 * Abe) / (4 * (be - ga)))
    t[("V", "U")] = (0.0, Ube / (al - be),
                     -(be + (3 * a * b * b * c + 4 * b * Abe) / (4 * a * (be - ga))))
    t[("A", "U")] = (0.0, ga - Ab / a, Uga / (al - ga))
    t[("U", "A")] = ((3 * a * b * c - 4 * Aal) / (4 * (al - ga)),
                     -(al + (3 * a * a * b * c - 4 * a * Aal) / (4 * b * (al - ga))), 0.0)
    t[("A", "V")] = (-ga + Ab / a, 0.0, Vga / (be - ga))
    t[("V", "A")] = (be + (3 * a * b * b * c + 4 * b * Abe) / (4 * a * (be - ga)),
                     -(3 * a * b * c + 4 * Abe) / (4 * (be - ga)), 0.0)
    t[("A", "A")] = (-Uga / (al - ga), -Vga / (be - ga), 0.0)
    return t


def _nabla_table_strong(c, fr):
    """Levi-Civita table under the strongly 2-Hopf conditions."""
    a, b = fr.a, fr.b
    al, be, ga = fr.alpha, fr.beta, fr.gamma
    q = c / (4 * (al - be))
    puu = -b * (c - 4 * al * (al - be)) / (4 * a * (al - be))
    pvv = -a * (c + 4 * be * (al - be)) / (4 * b * (al - be))
    w = c * (be - ga) / (4 * (al - be) ** 2) - c * (a * a - 2 * b * b) / (4 * (al - be))
    t = {}
    t[("U", "U")] = (0.0, 0.0, puu)
    t[("V", "U")] = (0.0, 0.0, q)
    t[("U", "V")] = (0.0, 0.0, q)
    t[("V", "V")] = (0.0, 0.0, pvv)
    t[("U", "A")] = (-puu, -q, 0.0)
    t[("V", "A")] = (-q, -pvv, 0.0)
    t[("A", "U")] = (0.0, w, 0.0)
    t[("A", "V")] = (-w, 0.0, 0.0)
    t[("A", "A")] = (0.0, 0.0, 0.0)
    return t


def _derivative_identities_generic(c, fr, s):
    """(lhs, rhs terms) per identity; residuals are scaled by the term sizes
    because several right-hand sides cancel heavily when b is small."""
    a, b = fr.a, fr.b
    al, be, ga = fr.alpha, fr.beta, fr.gamma
    out = {}
    out["Ua"] = (s["Ua"], [b * s["Valpha"] / (al - be)])
    out["Va"] = (s["Va"], [b * s["Ubeta"] / (al - be)])
    out["Aa"] = (s["Aa"], [-b * s["Ab"] / a])
    out["Ub"] = (s["Ub"], [-a * s["Valpha"] / (al - be)])
    out["Vb"] = (s["Vb"], [-a * s["Ubeta"] / (al - be)])
    out["Vgamma"] = (s["Vgamma"], [a * (ga - be) * s["Ugamma"] / (b * (al - ga))])
    aal = s["Aalpha"]
    out["Ab"] = (s["Ab"], [
        a * ga,
        a * c * (a * a - 2 * b * b) / (4 * (al - be)),
        -3 * a ** 3 * c * (be - ga) / (4 * (al - be) * (al - ga)),
        -al * a * (be - ga) / (al - be),
        a * a * (be - ga) / (b * (al - be) * (al - ga)) * aal,
    ])
    out["Abeta"] = (s["Abeta"], [
        -3 * a * b * c / 4,
        -a * be * (be - ga) / b,
        -a * c * (be - ga) / (4 * b * (al - ga)),
        -a * al * (be - ga) ** 2 / (b * (al - ga)),
        -3 * a ** 3 * c * (be - ga) ** 2 / (4 * b * (al - ga) ** 2),
        a * a * (be - ga) ** 2 / (b * b * (al - ga) ** 2) * aal,
    ])
    return out


def _derivative_identities_strong(c, fr, s):
    a, b = fr.a, fr.b
    al, be, ga = fr.alpha, fr.beta, fr.gamma
    out = {}
    out["Aalpha"] = (s["Aalpha"], [al * b * (al - ga) / a,
                                   b * c * (al - ga) / (4 * a * (be - al)),
                                   3 * a * b * c / 4])
    out["Abeta"] = (s["Abeta"], [-be * a * (be - ga) / b,
                                 -a * c * (be - ga) / (4 * b * (al - be)),
                                 -3 * a * b * c / 4])
    out["Ab"] = (s["Ab"], [a * c * (a * a - 2 * b * b) / (4 * (al - be)),
                           -a * c * (be - ga) / (4 * (al - be) ** 2),
                           a * ga])
    for name in ("Ualpha", "Valpha", "Ubeta", "Vbeta", "Ugamma", "Vgamma",
                 "Ua", "Va", "Ub", "Vb"):
        out[name] = (s[name], [0.0])
    return out


def verify_connection_formulas(patch: HypersurfacePatch, params, tol=1e-3,
                               step=1e-3, mode="auto",
                               tau_proj=TAU_PROJ, tau_mult=TAU_MULT) -> dict:
    """Compare the numeric Levi-Civita connection against the h = 2 tables.

    mode: "generic" (three distinct curvatures), "strong" (strongly 2-Hopf),
    or "auto" (strong if the D-derivatives of alpha, beta vanish at tol).
    """
    sd = shape_data(patch, np.atleast_2d(params)[:1])
    vals = sd.eigvals[0]
    spread = max(float(vals[0] - vals[2]), 1e-6)
    min_gap = min(vals[0] - vals[1], vals[1] - vals[2])
    report = {"params": np.atleast_2d(params)[0].tolist(), "mode": mode,
              "skipped_degenerate": False, "entries": {}, "identities": {},
              "max_entry_residual": 0.0, "max_identity_residual": 0.0}
    fr, scalars, nabla, _ = frame_derivative_data(patch, sd, 0, step=step,
                                                  tau_proj=tau_proj, tau_mult=tau_mult)
    s = dict(scalars)
    if mode == "auto":
        dmax = max(abs(s["Ualpha"]), abs(s["Valpha"]), abs(s["Ubeta"]), abs(s["Vbeta"]))
        mode = "strong" if dmax < 10 * tol else "generic"
        report["mode"] = mode
    c = patch.space.c
    if mode == "generic" and min_gap < 10 * tau_mult * spread:
        report["skipped_degenerate"] = True
        return report
    table = _nabla_table_strong(c, fr) if mode == "strong" else _nabla_table_generic(c, fr, s)
    sp = sd._sp
    basis = {"U": fr.U, "V": fr.V, "A": fr.A}
    worst = 0.0
    for (xn, yn), coeffs in table.items():
        rhs = coeffs[0] * basis["U"] + coeffs[1] * basis["V"] + coeffs[2] * basis["A"]
        lhs = nabla[(xn, yn)]
        scale = max(1.0, float(sp.norm(rhs)))
        resid = float(sp.norm(lhs - rhs)) / scale
        report["entries"][f"nabla_{xn}{yn}"] = resid
        worst = max(worst, resid)
    report["max_entry_residual"] = worst
    idents = (_derivative_identities_strong(c, fr, s) if mode == "strong"
              else _derivative_identities_generic(c, fr, s))
    worst_i = 0.0
    for name, (lhs, terms) in idents.items():
        rhs = sum(terms)
        scale = max(1.0, sum(abs(t) for t in terms))
        resid = abs(lhs - rhs) / scale
        report["identities"][name] = resid
        worst_i = max(worst_i, resid)
    report["max_identity_residual"] = worst_i
    report["frame"] = {"a": fr.a, "b": fr.b, "alpha": fr.alpha, "beta": fr.beta,
                       "gamma": fr.gamma}
    return report


def bracket_by_flows(patch: HypersurfacePatch, params, x_fn, y_fn, h=1e-3,
                     rk_steps=2):
    """[X, Y] at params via the symmetrized commutator of coordinate flows.

    x_fn/y_fn map params -> ambient tangent vector of the field there.
    Independent of the covariant-derivative route; used as its cross-check.
    """
    sd = shape_data(patch, np.atleast_2d(params)[:1])
    p0 = sd.frames.params[0]

    def flow(p, fn, time):
        dt = time / rk_steps
        cur = p.copy()
        for _ in range(rk_steps):
            def vel(q):
                sdq = shape_data(patch, q[None])
                return tangent_param_coords(sdq, 0, fn(q))
            k1 = vel(cur)
            k2 = vel(cur + 0.5 * dt * k1)
            k3 = vel(cur + 0.5 * dt * k2)
            k4 = vel(cur + dt * k3)
            cur = cur + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        return cur

    def loop(sign):
        s = sign * h
        q = flow(p0, x_fn, s)
        q = flow(q, y_fn, s)
        q = flow(q, x_fn, -s)
        q = flow(q, y_fn, -s)
        return q

    disp = 0.5 * (loop(+1.0) + loop(-1.0)) - p0
    coords = disp / (h * h)
    v = sd.frames.v[0]
    vec = coords[0] * v[0] + coords[1] * v[1] + coords[2] * v[2]
    sp = sd._sp
    return sp.project_horizontal(sd.frames.z[0], vec)


def verify_gauss_codazzi(patch: HypersurfacePatch, params, rng=None, n_random=20,
                         step=None, shape_perturbation=None) -> dict:
    """Residuals of the Gauss and Codazzi equations at one parameter point.

    The intrinsic curvature R(X,Y)Z and the covariant derivative of S are
    computed by nested central differences on coordinate fields; the ambient
    curvature uses the closed form. ``shape_perturbation`` (a 3x3 symmetric
    array added to S in the E basis) exists for negative controls in tests.
    """
    sp = patch.space
    rng = np.random.default_rng(0) if rng is None else rng
    params = np.atleast_2d(np.asarray(params, dtype=float))[0]
    h = step if step is not None else max(patch.diff_step * 10, 5e-4)
    sd0 = shape_data(patch, params[None])

    def perturbed_S(sd, n=0):
        s = sd.S[n]
        if shape_perturbation is not None:
            s = s + np.asarray(shape_perturbation)
        return s

    def tangents_at(p):
        return frames_at(patch, p[None])

    def nabla_coord_field(p, i, k):
        """nabla_{v_i} v_k at p (tangential), via covariant FD."""
        fz = tangents_at(p)
        z0, v0, xi0 = fz.z[0], fz.v[0], fz.xi[0]
        pp = p.copy(); pp[i] += h
        pm = p.copy(); pm[i] -= h
        fp = tangents_at(pp)
        fm = tangents_at(pm)
        up = _phases(sp, z0, fp.z[0])
        um = _phases(sp, z0, fm.z[0])
        wdot = (up * fp.v[0, k] - um * fm.v[0, k]) / (2 * h)
        zdot = (up * fp.z[0] - um * fm.z[0]) / (2 * h)
        vec = sp.project_horizontal(z0, wdot) - (sp.herm(z0, zdot) / sp.kappa) * v0[k]
        vec = sp.project_horizontal(z0, vec)
        return vec - sp.g(vec, xi0) * xi0, fz

    # second covariant derivatives of coordinate fields: R(v_i, v_j)v_k
    def curv_coord(i, j, k):
        def F(p, a, b):
            return nabla_coord_field(p, a, b)[0]

        z0 = sd0.frames.z[0]
        xi0 = sd0.frames.xi[0]

        def outer(a, bfun_idx):
            pp = params.copy(); pp[a] += h
            pm = params.copy(); pm[a] -= h
            wp = F(pp, *bfun_idx)
            wm = F(pm, *bfun_idx)
            zp = patch.eval(pp[None])[0]
            zm = patch.eval(pm[None])[0]
            up = _phases(sp, z0, zp)
            um = _phases(sp, z0, zm)
            wdot = (up * wp - um * wm) / (2 * h)
            zdot = (up * zp - um * zm) / (2 * h)
            w0 = F(params, *bfun_idx)
            vec = sp.project_horizontal(z0, wdot) - (sp.herm(z0, zdot) / sp.kappa) * w0
            vec = sp.project_horizontal(z0, vec)
            return vec - sp.g(vec, xi0) * xi0

        return outer(i, (j, k)) - outer(j, (i, k))

    v = sd0.frames.v[0]
    xi = sd0.frames.xi[0]
    E = sd0.E[0]
    curv = {}
    for i in range(3):
        for j in range(i + 1, 3):
            for k in range(3):
                curv[(i, j, k)] = curv_coord(i, j, k)

    def r_intrinsic(ci, cj, ck):
        out = np.zeros(3, dtype=complex)
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                sgn = 1.0 if i < j else -1.0
                key = (min(i, j), max(i, j))
                for k in range(3):
                    out = out + sgn * ci[i] * cj[j] * ck[k] * curv[(key[0], key[1], k)]
        return out

    # Codazzi pieces: nabla_{v_i}(S v_j) fields
    def shape_apply_at(p, j):
        sd = shape_data(patch, p[None])
        coords = np.array([sp.g(sd.frames.v[0, j], sd.E[0, a]) for a in range(3)])
        out = perturbed_S(sd) @ coords
        return np.einsum("a,ak->k", out, sd.E[0])

    def nabla_S_field(i, j):
        z0 = sd0.frames.z[0]
        xi0 = sd0.frames.xi[0]
        pp = params.copy(); pp[i] += h
        pm = params.copy(); pm[i] -= h
        wp = shape_apply_at(pp, j)
        wm = shape_apply_at(pm, j)
        zp = patch.eval(pp[None])[0]
        zm = patch.eval(pm[None])[0]
        up = _phases(sp, z0, zp)
        um = _phases(sp, z0, zm)
        wdot = (up * wp - um * wm) / (2 * h)
        zdot = (up * zp - um * zm) / (2 * h)
        w0 = shape_apply_at(params, j)
        vec = sp.project_horizontal(z0, wdot) - (sp.herm(z0, zdot) / sp.kappa) * w0
        vec = sp.project_horizontal(z0, vec)
        return vec - sp.g(vec, xi0) * xi0

    def s_apply(u):
        coords = np.array([sp.g(u, E[a]) for a in range(3)])
        return np.einsum("a,ak->k", perturbed_S(sd0) @ coords, E)

    nabla_sv = {}
    nabla_vv = {}
    for i in range(3):
        for j in range(3):
            nabla_sv[(i, j)] = nabla_S_field(i, j)
            nabla_vv[(i, j)] = nabla_coord_field(params, i, j)[0]

    def nabla_S(i, j):
        """(nabla_{v_i} S) v_j."""
        return nabla_sv[(i, j)] - s_apply(nabla_vv[(i, j)])

    gauss_worst = 0.0
    codazzi_worst = 0.0
    for _ in range(n_random):
        ci, cj, ck, cl = rng.standard_normal((4, 3))
        X = ci @ v; Y = cj @ v; Z = ck @ v; Wv = cl @ E
        nx = max(sp.norm(X), 1e-9); ny = max(sp.norm(Y), 1e-9)
        nz = max(sp.norm(Z), 1e-9); nw = max(sp.norm(Wv), 1e-9)
        rbar = sp.curvature(X, Y, Z)
        # Codazzi: <Rbar(X,Y)Z, xi> = <(nabla_X S)Y - (nabla_Y S)X, Z>
        lhs = sp.g(rbar, xi)
        nsx = np.zeros(3, dtype=complex)
        nsy = np.zeros(3, dtype=complex)
        for i in range(3):
            for j in range(3):
                nsx = nsx + ci[i] * cj[j] * nabla_S(i, j)
                nsy = nsy + cj[i] * ci[j] * nabla_S(i, j)
        rhs = sp.g(nsx - nsy, Z)
        codazzi_worst = max(codazzi_worst, abs(lhs - rhs) / (nx * ny * nz))
        # Gauss: <Rbar(X,Y)Z, W> = <R(X,Y)Z, W> + <SX,Z><SY,W> - <SX,W><SY,Z>
        rint = r_intrinsic(ci, cj, ck)
        sx, sy = s_apply(X), s_apply(Y)
        grhs = (sp.g(rint, Wv) + sp.g(sx, Z) * sp.g(sy, Wv)
                - sp.g(sx, Wv) * sp.g(sy, Z))
        glhs = sp.g(rbar, Wv)
        gauss_worst = max(gauss_worst, abs(glhs - grhs) / (nx * ny * nz * nw))
    return {"gauss": float(gauss_worst), "codazzi": float(codazzi_worst),
            "params": params.tolist(), "step": h}
