"""Periodic billiard trajectories on embedded curves and surfaces.

A p-periodic trajectory is a critical point of the closed-polygon length
``l(x_1..x_p) = sum |x_i - x_{i+1}|`` on M^p minus the diagonal.  The search
is a batched damped Newton iteration on the chart gradient of ``l``, started
from a scrambled Halton sequence, followed by deduplication modulo the
dihedral action on the index cycle.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np
from scipy.stats import qmc

TWO_PI = 2.0 * math.pi


class BilliardError(ValueError):
    pass


# ---------------------------------------------------------------------------
# shapes


class Shape:
    """A closed m-manifold in R^n given by one or more overlapping charts.

    ``point(u, c)`` and ``jacobian(u, c)`` take parameters of shape (..., m)
    and chart ids of shape (...).
    """

    name = "shape"
    m = 1
    n = 2

    def point(self, u, c):
        raise NotImplementedError

    def jacobian(self, u, c):
        raise NotImplementedError

    def sample(self, q):
        """Map points of the unit cube (..., m) to (params, chart ids)."""
        return TWO_PI * q, np.zeros(q.shape[:-1], dtype=int)

    def rechart(self, u, c):
        """Move parameters away from chart singularities; identity by default."""
        return np.mod(u, TWO_PI), c

    @property
    def scale(self) -> float:
        """Diameter estimate used to normalize tolerances."""
        q = np.stack(np.meshgrid(*[np.linspace(0, 1, 64, endpoint=False)] * self.m, indexing="ij"), -1)
        u, c = self.sample(q.reshape(-1, self.m))
        x = self.point(u, c)
        d = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=-1)
        return float(d.max())

    def spec(self) -> str:
        return self.name


@dataclass(frozen=True)
class Ellipse(Shape):
    a: float = 2.0
    b: float = 1.0

    name = "ellipse"
    m, n = 1, 2

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise BilliardError("ellipse axes must be positive")

    def point(self, u, c=None):
        t = u[..., 0]
        return np.stack([self.a * np.cos(t), self.b * np.sin(t)], -1)

    def jacobian(self, u, c=None):
        t = u[..., 0]
        return np.stack([-self.a * np.sin(t), self.b * np.cos(t)], -1)[..., None]

    @property
    def scale(self) -> float:
        return 2.0 * max(self.a, self.b)

    def spec(self) -> str:
        return f"ellipse:{self.a:g},{self.b:g}"


@dataclass(frozen=True)
class PerturbedEllipse(Shape):
    """Polar radius of the ellipse times ``1 + sum eps_k cos(k t)``."""

    a: float = 2.0
    b: float = 1.0
    eps: tuple = ((3, 0.03),)

    name = "perturbed-ellipse"
    m, n = 1, 2

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise BilliardError("ellipse axes must be positive")
        if sum(abs(e) for _, e in self.eps) >= 1:
            raise BilliardError("perturbation must keep the radius positive")

    def _radius(self, t):
        a, b = self.a, self.b
        D = (b * np.cos(t)) ** 2 + (a * np.sin(t)) ** 2
        r = a * b / np.sqrt(D)
        dr = -a * b * (a * a - b * b) * np.sin(t) * np.cos(t) / D**1.5
        s = 1.0 + sum(e * np.cos(k * t) for k, e in self.eps)
        ds = -sum(k * e * np.sin(k * t) for k, e in self.eps)
        return r * s, dr * s + r * ds

    def point(self, u, c=None):
        t = u[..., 0]
        R, _ = self._radius(t)
        return np.stack([R * np.cos(t), R * np.sin(t)], -1)

    def jacobian(self, u, c=None):
        t = u[..., 0]
        R, dR = self._radius(t)
        return np.stack([dR * np.cos(t) - R * np.sin(t), dR * np.sin(t) + R * np.cos(t)], -1)[..., None]

    def spec(self) -> str:
        tail = "".join(f",{k}={e:g}" for k, e in self.eps)
        return f"perturbed-ellipse:{self.a:g},{self.b:g}{tail}"


@dataclass(frozen=True)
class Ellipsoid(Shape):
    """Two spherical charts with poles on the z-axis (chart 0) and x-axis (chart 1)."""

    a: float = 3.0
    b: float = 2.0
    c: float = 1.0

    name = "ellipsoid"
    m, n = 2, 3

    def __post_init__(self):
        if min(self.a, self.b, self.c) <= 0:
            raise BilliardError("ellipsoid axes must be positive")

    def _unit(self, u, c):
        th, ph = u[..., 0], u[..., 1]
        st, ct, sp, cp = np.sin(th), np.cos(th), np.sin(ph), np.cos(ph)
        s0 = np.stack([st * cp, st * sp, ct], -1)
        s1 = np.stack([ct, st * cp, st * sp], -1)
        d0 = np.stack([np.stack([ct * cp, ct * sp, -st], -1), np.stack([-st * sp, st * cp, 0 * st], -1)], -1)
        d1 = np.stack([np.stack([-st, ct * cp, ct * sp], -1), np.stack([0 * st, -st * sp, st * cp], -1)], -1)
        sel = (np.asarray(c) == 1)[..., None]
        return np.where(sel, s1, s0), np.where(sel[..., None], d1, d0)

    def _axes(self):
        return np.array([self.a, self.b, self.c])

    def point(self, u, c):
        s, _ = self._unit(u, c)
        return s * self._axes()

    def jacobian(self, u, c):
        _, d = self._unit(u, c)
        return d * self._axes()[:, None]

    def sample(self, q):
        th = np.arccos(1.0 - 2.0 * q[..., 0])
        ph = TWO_PI * q[..., 1]
        u = np.stack([th, ph], -1)
        return self.rechart(u, np.zeros(q.shape[:-1], dtype=int))

    def rechart(self, u, c):
        s, _ = self._unit(u, c)
        st2 = np.sin(u[..., 0]) ** 2
        c = np.where(st2 < 0.25, 1 - np.asarray(c), c)
        # recompute angles in the chosen chart from the unit-sphere point
        z0 = np.stack([np.arccos(np.clip(s[..., 2], -1, 1)), np.arctan2(s[..., 1], s[..., 0])], -1)
        z1 = np.stack([np.arccos(np.clip(s[..., 0], -1, 1)), np.arctan2(s[..., 2], s[..., 1])], -1)
        u = np.where((c == 1)[..., None], z1, z0)
        return u, c

    @property
    def scale(self) -> float:
        return 2.0 * max(self.a, self.b, self.c)

    def spec(self) -> str:
        return f"ellipsoid:{self.a:g},{self.b:g},{self.c:g}"


@dataclass(frozen=True)
class Torus(Shape):
    R: float = 2.0
    r: float = 1.0

    name = "torus"
    m, n = 2, 3

    def __post_init__(self):
        if not self.R > self.r > 0:
            raise BilliardError("torus needs R > r > 0")

    def point(self, u, c=None):
        th, ph = u[..., 0], u[..., 1]
        w = self.R + self.r * np.cos(ph)
        return np.stack([w * np.cos(th), w * np.sin(th), self.r * np.sin(ph)], -1)

    def jacobian(self, u, c=None):
        th, ph = u[..., 0], u[..., 1]
        w = self.R + self.r * np.cos(ph)
        dth = np.stack([-w * np.sin(th), w * np.cos(th), 0 * th], -1)
        dph = np.stack([-self.r * np.sin(ph) * np.cos(th), -self.r * np.sin(ph) * np.sin(th), self.r * np.cos(ph)], -1)
        return np.stack([dth, dph], -1)

    @property
    def scale(self) -> float:
        return 2.0 * (self.R + self.r)

    def spec(self) -> str:
        return f"torus:{self.R:g},{self.r:g}"


SHAPE_BETTI = {"ellipse": (1, 1), "perturbed-ellipse": (1, 1), "ellipsoid": (1, 0, 1), "torus": (1, 2, 1)}


def shape_betti(shape: Shape) -> tuple[int, ...]:
    return SHAPE_BETTI[shape.name]


def parse_shape(text: str) -> Shape:
    """``ellipse:2,1``, ``circle``, ``perturbed-ellipse:2,1,3=0.03``, ``ellipsoid:3,2,1``, ``torus:2,1``."""
    name, _, rest = text.strip().partition(":")
    args = [s for s in rest.split(",") if s.strip()] if rest else []
    try:
        if name == "circle":
            r = float(args[0]) if args else 1.0
            return Ellipse(r, r)
        if name == "ellipse":
            return Ellipse(*map(float, args))
        if name == "perturbed-ellipse":
            nums = [float(s) for s in args if "=" not in s]
            eps = tuple((int(k), float(v)) for k, v in (s.split("=") for s in args if "=" in s))
            return PerturbedEllipse(*nums, eps=eps or ((3, 0.03),))
        if name == "ellipsoid":
            return Ellipsoid(*map(float, args))
        if name == "torus":
            return Torus(*map(float, args))
    except (TypeError, ValueError) as exc:
        raise BilliardError(f"bad shape spec {text!r}: {exc}") from None
    raise BilliardError(f"unknown shape {name!r}")


SHIPPED_SHAPES = ("ellipse:2,1", "perturbed-ellipse:2,1,3=0.03", "ellipsoid:3,2,1", "torus:2,1")


# ---------------------------------------------------------------------------
# length and its gradient


def _charts(shape, u, c):
    if c is None:
        c = np.zeros(np.shape(u)[:-1], dtype=int)
    return np.asarray(u, dtype=float), np.asarray(c)


def _as_params(shape, params):
    u = np.asarray(params, dtype=float)
    if u.ndim == 1 and shape.m == 1:
        u = u[:, None]
    return u


def _edges(x):
    """Unit vectors x_i - x_{i+1} and x_i - x_{i-1}, and edge lengths."""
    fwd = x - np.roll(x, -1, axis=-2)
    bwd = x - np.roll(x, 1, axis=-2)
    lf = np.linalg.norm(fwd, axis=-1)
    lb = np.linalg.norm(bwd, axis=-1)
    return fwd, bwd, lf, lb


def perimeter(shape: Shape, params, charts=None, sep_min: float = 0.0) -> float:
    """Cyclic polygon length; raises on coincident consecutive points."""
    u, c = _charts(shape, _as_params(shape, params), charts)
    if u.shape[-2] < 2:
        raise BilliardError("need at least two points")
    x = shape.point(u, c)
    _, _, lf, _ = _edges(x)
    if np.any(lf <= max(sep_min, 1e-14 * shape.scale)):
        raise BilliardError("consecutive points coincide (diagonal input)")
    return float(lf.sum())


def _bisectors(x):
    fwd, bwd, lf, lb = _edges(x)
    return fwd / lf[..., None] + bwd / lb[..., None], np.minimum(lf, lb)


def chart_gradient(shape: Shape, u, c):
    """Gradient of the length in chart coordinates, shape (..., p, m)."""
    x = shape.point(u, c)
    v, _ = _bisectors(x)
    J = shape.jacobian(u, c)
    return np.einsum("...n,...nm->...m", v, J)


def _tangential_norms(shape, u, c, g):
    J = shape.jacobian(u, c)
    G = np.einsum("...nm,...nk->...mk", J, J)
    sol = np.linalg.solve(G, g[..., None])[..., 0]
    return np.sqrt(np.maximum(np.einsum("...m,...m->...", g, sol), 0.0))


def reflection_residual(shape: Shape, params, charts=None) -> np.ndarray:
    """Per-point chart gradient of the length, i.e. the bisector sum paired with the chart frame."""
    u, c = _charts(shape, _as_params(shape, params), charts)
    _, _, lf, _ = _edges(shape.point(u, c))
    if np.any(lf <= 1e-14 * shape.scale):
        raise BilliardError("consecutive points coincide (diagonal input)")
    return chart_gradient(shape, u, c)


def residual_norm(shape: Shape, params, charts=None) -> float:
    """Largest tangential norm of the bisector sums (chart independent)."""
    u, c = _charts(shape, _as_params(shape, params), charts)
    g = reflection_residual(shape, u, c)
    return float(_tangential_norms(shape, u, c, g).max())


def fd_gradient(shape: Shape, params, charts=None, h: float = 1e-6) -> np.ndarray:
    u, c = _charts(shape, _as_params(shape, params), charts)
    out = np.zeros_like(u)
    for i in range(u.shape[0]):
        for k in range(u.shape[1]):
            du = np.zeros_like(u)
            du[i, k] = h
            out[i, k] = (perimeter(shape, u + du, c) - perimeter(shape, u - du, c)) / (2 * h)
    return out


def gradient_check(shape: Shape, p: int, n: int = 100, seed: int = 0, h: float = 1e-6) -> float:
    """Worst relative gap between the residual and a central-difference gradient."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < n:
        u, c = shape.sample(rng.random((p, shape.m)))
        x = shape.point(u, c)
        _, sep = _bisectors(x)
        if sep.min() < 1e-3 * shape.scale:
            continue
        g = reflection_residual(shape, u, c)
        fd = fd_gradient(shape, u, c, h)
        worst = max(worst, float(np.linalg.norm(g - fd) / max(np.linalg.norm(g), 1e-300)))
        done += 1
    return worst


# ---------------------------------------------------------------------------
# search


@dataclass
class SearchConfig:
    starts: int | None = None
    density: float = 1.0
    max_iter: int = 60
    polish_iter: int = 10
    tol_residual: float = 1e-9
    tol_hess: float = 1e-6
    sep_rel: float = 1e-4
    cluster_rel: float = 1e-6
    fd_step: float = 1e-5
    seed: int = 0

    def n_starts(self, shape: Shape, p: int) -> int:
        if self.starts is not None:
            base = self.starts
        elif shape.m == 1:
            base = 32**p
        else:
            base = min(12 ** (2 * p), 200_000)
        return max(1, int(round(base * self.density)))


@dataclass
class BilliardOrbit:
    params: list
    charts: list
    points: list
    length: float
    residual: float
    hessian_spectrum: list
    generic: bool

    def as_dict(self) -> dict:
        return asdict(self)


def _hessian(shape, u, c, h):
    """Central differences of the chart gradient: (N, pm, pm), symmetrized."""
    N, p, m = u.shape
    H = np.empty((N, p * m, p * m))
    for i in range(p):
        for k in range(m):
            du = np.zeros_like(u)
            du[:, i, k] = h
            gp = chart_gradient(shape, u + du, c)
            gm = chart_gradient(shape, u - du, c)
            H[:, :, i * m + k] = ((gp - gm) / (2 * h)).reshape(N, p * m)
    return 0.5 * (H + np.swapaxes(H, 1, 2))


def _merit(shape, u, c):
    g = chart_gradient(shape, u, c)
    t = _tangential_norms(shape, u, c, g)
    return (t**2).sum(-1), t.max(-1)


def _separation(shape, u, c):
    x = shape.point(u, c)
    p = x.shape[-2]
    d = np.linalg.norm(x[..., :, None, :] - x[..., None, :, :], axis=-1)
    d = np.where(np.eye(p, dtype=bool), np.inf, d)
    return d.min(axis=(-1, -2))


def _newton(shape, u, c, iters, h, sep_min):
    N, p, m = u.shape
    alive = np.ones(N, dtype=bool)
    merit, _ = _merit(shape, u, c)
    for _ in range(iters):
        idx = np.flatnonzero(alive & (merit > 1e-30))
        if idx.size == 0:
            break
        uu, cc = u[idx], c[idx]
        g = chart_gradient(shape, uu, cc).reshape(idx.size, p * m)
        H = _hessian(shape, uu, cc, h)
        w, V = np.linalg.eigh(H)
        scale = np.abs(w).max(-1, keepdims=True)
        w = np.where(np.abs(w) < 1e-12 * scale, np.sign(w + 1e-300) * 1e-12 * scale, w)
        step = -np.einsum("nij,nj->ni", V, np.einsum("nji,nj->ni", V, g) / w).reshape(idx.size, p, m)
        accepted = np.zeros(idx.size, dtype=bool)
        new_u, new_c, new_merit = uu.copy(), cc.copy(), merit[idx].copy()
        alpha = 1.0
        for _ in range(16):
            todo = ~accepted
            if not todo.any():
                break
            tu, tc = shape.rechart(uu[todo] + alpha * step[todo], cc[todo])
            tm, _ = _merit(shape, tu, tc)
            ok = np.isfinite(tm) & (tm < merit[idx][todo])
            sub = np.flatnonzero(todo)[ok]
            new_u[sub], new_c[sub], new_merit[sub] = tu[ok], tc[ok], tm[ok]
            accepted[sub] = True
            alpha *= 0.5
        u[idx], c[idx], merit[idx] = new_u, new_c, new_merit
        # starts with no descent direction or that collapse onto the diagonal are dropped
        stuck = idx[~accepted]
        alive[stuck] = False
        alive &= _separation(shape, u, c) > sep_min
    return u, c, alive


def _dihedral_orders(p):
    out = []
    for r in range(p):
        rot = [(i + r) % p for i in range(p)]
        out.append(rot)
        out.append(rot[::-1])
    return out


def _canonical_index(x):
    """Index order (rotation/reflection of the cycle) giving the lexicographically least point list."""
    best = None
    for order in _dihedral_orders(len(x)):
        key = tuple(np.round(x[order], 9).ravel())
        if best is None or key < best[0]:
            best = (key, order)
    return best[1]


def hessian_spectrum(shape: Shape, u, c, h: float = 1e-5) -> np.ndarray:
    """Eigenvalues of the second variation in an orthonormal tangent frame, times the shape scale."""
    u = np.asarray(u, dtype=float)[None]
    c = np.asarray(c)[None]
    H = _hessian(shape, u, c, h)[0]
    J = shape.jacobian(u, c)[0]
    G = np.einsum("pnm,pnk->pmk", J, J)
    p, m = u.shape[1:]
    Ginv_half = np.zeros((p * m, p * m))
    for i in range(p):
        w, V = np.linalg.eigh(G[i])
        Ginv_half[i * m:(i + 1) * m, i * m:(i + 1) * m] = V @ np.diag(w**-0.5) @ V.T
    ev = np.linalg.eigvalsh(Ginv_half @ H @ Ginv_half)
    return ev * shape.scale


def find_orbits(shape: Shape, p: int, config: SearchConfig | None = None) -> list[BilliardOrbit]:
    """Multistart Newton search for p-periodic trajectories, deduplicated modulo D_p."""
    if p not in (2, 3):
        raise BilliardError("period must be 2 or 3")
    cfg = config or SearchConfig()
    scale = shape.scale
    sep_min = cfg.sep_rel * scale
    n = cfg.n_starts(shape, p)
    q = qmc.Halton(d=p * shape.m, scramble=True, seed=cfg.seed).random(n)
    u, c = shape.sample(q.reshape(n, p, shape.m))
    c = np.asarray(c).copy()
    keep = _separation(shape, u, c) > 10 * sep_min
    u, c = u[keep].copy(), c[keep].copy()
    u, c, alive = _newton(shape, u, c, cfg.max_iter, cfg.fd_step, sep_min)
    _, res = _merit(shape, u, c)
    conv = alive & (res <= cfg.tol_residual)
    u, c = u[conv], c[conv]
    # polish survivors and re-verify
    u, c, alive = _newton(shape, u, c, cfg.polish_iter, cfg.fd_step, sep_min)
    _, res = _merit(shape, u, c)
    ok = alive & (res <= cfg.tol_residual)
    u, c, res = u[ok], c[ok], res[ok]
    x = shape.point(u, c)
    lengths = np.linalg.norm(x - np.roll(x, -1, axis=-2), axis=-1).sum(-1)
    order = np.lexsort((res, np.round(lengths / scale, 9)))
    reps: list[int] = []
    tol = cfg.cluster_rel * scale
    images = _dihedral_orders(p)
    for i in order:
        if reps:
            R = x[reps]
            near = np.abs(lengths[reps] - lengths[i]) < tol * p
            if near.any():
                R = R[near]
                d = np.linalg.norm(x[i][images][:, None] - R[None], axis=-1).max(-1)
                if (d < tol).any():
                    continue
        reps.append(i)
    orbits = []
    for i in reps:
        idx = _canonical_index(x[i])
        ui, ci = u[i][idx], c[i][idx]
        spec = hessian_spectrum(shape, ui, ci, cfg.fd_step)
        orbits.append(
            BilliardOrbit(
                params=ui.tolist(),
                charts=np.asarray(ci).tolist(),
                points=x[i][idx].tolist(),
                length=float(lengths[i]),
                residual=float(res[i]),
                hessian_spectrum=spec.tolist(),
                generic=bool(np.abs(spec).min() >= cfg.tol_hess),
            )
        )
    orbits.sort(key=lambda o: (-o.length, o.points))
    return orbits


def compare_to_bound(orbits: list[BilliardOrbit], B: int, m: int, p: int) -> dict:
    from .bounds import bt2_lower_bound, bt3_lower_bound

    bound = {2: bt2_lower_bound, 3: bt3_lower_bound}[p](B, m)
    out = {"count": len(orbits), "bound": bound, "B": B, "m": m, "p": p}
    if not all(o.generic for o in orbits):
        out["status"] = "not applicable"
        out["reason"] = "non-generic embedding - bound not applicable"
    else:
        out["status"] = "pass" if len(orbits) >= bound else "fail"
    return out


def orbits_json(shape: Shape, p: int, orbits: list[BilliardOrbit], **extra) -> str:
    return json.dumps({"shape": shape.spec(), "period": p, "orbits": [o.as_dict() for o in orbits], **extra}, indent=2)
