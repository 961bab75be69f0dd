"""Empirical audits of projection geometry over exhaustive small balls.

Every audit here measures a constant that the theory only promises to
exist: the constriction constant of an axis, the quasi-convexity constant
of an orbit, the per-property constants of nearest-point projections.
Measured values are reported, never asserted against theoretical ones;
the test suite pins only the exactly-known tree values (delta = 0,
Lipschitz constant 1).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .axes import Axis, ProjectionMap
from .balls import ball_elements
from .errors import BudgetExceeded, FiniteOrderElement
from .groups import Word, all_geodesics, distance, geodesic, is_torsion

DEFAULT_PAIR_CAP = 2_000_000


def _ball_points(group, radius: int, cap: int) -> list[Word]:
    pts = list(ball_elements(group, radius, max_elements=cap))
    return pts


@dataclass(frozen=True)
class ConstrictionReport:
    """Outcome of the exhaustive CS1/CS2 scan for one axis."""

    delta_cs1: int
    delta_cs2: int
    samples: int
    violations: tuple = ()

    @property
    def delta(self) -> int:
        return max(self.delta_cs1, self.delta_cs2)

    @property
    def certified(self) -> bool:
        return not self.violations


def constriction_audit(pm: ProjectionMap, sample_radius: int,
                       delta_grid: range | None = None,
                       pair_cap: int = DEFAULT_PAIR_CAP) -> ConstrictionReport:
    """Minimal delta certifying CS1 and CS2 over all pairs in B(o, r).

    CS2 is checked against every geodesic between each pair (unique in a
    tree; finitely many around even cycles of a free product).  A pair
    with projections delta-close is a vacuous case, never a violation, so
    the minimal certifying delta for a pair is
    min(d_A(x, y), worst approach distance of its geodesics).
    """
    group = pm.group
    points = _ball_points(group, sample_radius, pair_cap)
    n = len(points)
    if n * n > pair_cap:
        raise BudgetExceeded(f"{n * n} pairs exceed cap {pair_cap}")

    # CS1: points of the axis must project to themselves.
    delta_cs1 = 0
    for _, v in pm.axis.vertices_in_ball(sample_radius):
        delta_cs1 = max(delta_cs1, pm.project(v).dist)

    proj = {x: pm.project(x) for x in points}
    dist_memo: dict[tuple[Word, Word], int] = {}

    def vertex_dist(v: Word, p: Word) -> int:
        key = (v, p)
        hit = dist_memo.get(key)
        if hit is None:
            hit = distance(v, p)
            dist_memo[key] = hit
        return hit

    needed = 0  # max over pairs of the minimal certifying delta
    worst_pair = None
    for x, y in itertools.combinations(points, 2):
        px, py = proj[x], proj[y]
        gap = abs(px.position - py.position)
        if gap <= needed:
            continue  # cannot raise the running maximum
        worst_approach = 0
        for path in all_geodesics(x, y):
            ax = min(vertex_dist(v, px.vertex) for v in path)
            ay = min(vertex_dist(v, py.vertex) for v in path)
            worst_approach = max(worst_approach, ax, ay)
        pair_delta = min(gap, worst_approach)
        if pair_delta > needed:
            needed = pair_delta
            worst_pair = (x, y)
    delta_cs2 = needed

    violations: tuple = ()
    if delta_grid is not None and needed > max(delta_grid, default=-1):
        violations = ((str(worst_pair[0]), str(worst_pair[1]), needed),)
    return ConstrictionReport(delta_cs1=delta_cs1, delta_cs2=delta_cs2,
                              samples=n * (n - 1) // 2, violations=violations)


def quasiconvexity_audit(orbit, sample_radius: int,
                         pair_cap: int = DEFAULT_PAIR_CAP) -> int:
    """Empirical quasi-convexity constant eta of an orbit.

    Max over endpoint pairs in Y & B(o, r) and over all geodesics between
    them of the distance from a geodesic vertex to Y (exact distances).
    """
    points = orbit.sample_in_ball(sample_radius)
    if len(points) ** 2 > pair_cap:
        raise BudgetExceeded(f"{len(points) ** 2} pairs exceed cap {pair_cap}")
    eta = 0
    seen: dict[Word, int] = {}
    for x, y in itertools.combinations(points, 2):
        for path in all_geodesics(x, y):
            for v in path:
                d = seen.get(v)
                if d is None:
                    d = orbit.distance_to(v)
                    seen[v] = d
                eta = max(eta, d)
    return eta


@dataclass(frozen=True)
class AuditTable:
    """Measured constants for the elementary projection properties."""

    radius: int
    samples: int
    theta_nearest_point: int          # (1) d(x, pi x) <= d(x, A) + theta
    theta_equivariance: int           # (2) d(pi(hx), h pi(x)) <= theta
    theta_lipschitz: int              # (3) d_A(x, y) <= d(x, y) + theta
    theta_intersection_image: int     # (4) |diam(A^{+d} & gamma) - diam_A(gamma)|
    theta_behrstock: int | None       # (5) min(d_A(x,B), d_B(x,A)) <= theta
    sigma_table: tuple = ()           # (6) ((kappa, lambda, sigma, accepted), ...)
    zeta_table: tuple = ()            # (7) ((epsilon, zeta, samples), ...)
    witnesses: tuple = ()             # ((property, witness string), ...) argmax samples

    def property_rows(self) -> list[dict]:
        """Flat records {property, theta_empirical, samples, worst_witness}."""
        wit = dict(self.witnesses)
        rows = [
            {"property": "nearest_point", "theta_empirical": self.theta_nearest_point},
            {"property": "equivariance", "theta_empirical": self.theta_equivariance},
            {"property": "lipschitz", "theta_empirical": self.theta_lipschitz},
            {"property": "intersection_image", "theta_empirical": self.theta_intersection_image},
        ]
        if self.theta_behrstock is not None:
            rows.append({"property": "behrstock", "theta_empirical": self.theta_behrstock})
        for kappa, lam, sigma, accepted in self.sigma_table:
            rows.append({"property": f"morse({kappa},{lam})", "theta_empirical": sigma,
                         "accepted": accepted})
        for eps, zeta, n in self.zeta_table:
            rows.append({"property": f"coarse_invariance({eps})", "theta_empirical": zeta})
        for row in rows:
            row.setdefault("samples", self.samples)
            row.setdefault("worst_witness", wit.get(row["property"], ""))
        return rows


class SetProjection:
    """Exact nearest-point map onto a finite vertex set (lex tie-break)."""

    def __init__(self, points: list[Word]):
        self.points = sorted(set(points), key=str)
        self._cache: dict[Word, tuple[Word, int]] = {}

    def project(self, x: Word) -> tuple[Word, int]:
        hit = self._cache.get(x)
        if hit is None:
            best = min(self.points, key=lambda p: (distance(p, x), str(p)))
            hit = (best, distance(best, x))
            self._cache[x] = hit
        return hit


def _quasi_geodesic_ok(path: list[Word], kappa: float, lam: float) -> bool:
    for i in range(len(path)):
        for j in range(i + 1, len(path)):
            if j - i > kappa * distance(path[i], path[j]) + lam:
                return False
    return True


def elementary_properties_audit(pm_a: ProjectionMap, pm_b: ProjectionMap | None,
                                sample_radius: int, delta: int = 0,
                                qg_grid: tuple = ((1, 0), (1, 2), (2, 2), (2, 4)),
                                qg_samples: int = 40,
                                perturbations: tuple = (0, 1),
                                seed: int = 0,
                                pair_cap: int = DEFAULT_PAIR_CAP) -> AuditTable:
    """Measure the seven elementary properties over an exhaustive ball.

    ``delta`` is the constriction constant used for the intersection-image
    thickening (0 on trees).  Property (5) needs ``pm_b``.  Properties (6)
    and (7) are sampled with a seeded generator: (6) over perturbed axis
    geodesics per (kappa, lambda) grid point, (7) over epsilon-perturbed
    copies of the axis vertex set.
    """
    group = pm_a.group
    points = _ball_points(group, sample_radius, pair_cap)
    rng = random.Random(seed)
    window = sample_radius + 2 * max(pm_a.axis.translation_length, 1) + \
        pm_a.axis.conjugator.length + 2

    # (1) exact nearest point: compare against an independent scan of the
    # axis vertices inside the window.
    theta1 = 0
    witnesses: dict[str, str] = {}
    axis_pts = [v for _, v in pm_a.axis.vertices_in_ball(window)]
    for x in points:
        d_proj = pm_a.project(x).dist
        d_set = min(distance(v, x) for v in axis_pts)
        if d_proj - d_set > theta1 or "nearest_point" not in witnesses:
            theta1 = max(theta1, d_proj - d_set)
            witnesses["nearest_point"] = str(x)

    # (2) coarse equivariance under the axis element and its powers
    g = pm_a.axis.element
    theta2 = 0
    for h in (g, g.inverse(), g * g, (g * g).inverse()):
        for x in points:
            lhs = pm_a.project(h * x).vertex
            rhs = h * pm_a.project(x).vertex
            if distance(lhs, rhs) > theta2 or "equivariance" not in witnesses:
                theta2 = max(theta2, distance(lhs, rhs))
                witnesses["equivariance"] = f"h={h}, x={x}"

    # (3) coarse Lipschitz and (4) intersection-image, per pair
    theta3 = 0
    theta4 = 0
    pos = {x: pm_a.position(x) for x in points}
    for x, y in itertools.combinations(points, 2):
        gap = abs(pos[x] - pos[y])
        if gap - distance(x, y) > theta3 or "lipschitz" not in witnesses:
            theta3 = max(theta3, gap - distance(x, y))
            witnesses["lipschitz"] = f"x={x}, y={y}"
        path = geodesic(x, y)
        on_axis = [i for i, v in enumerate(path) if pm_a.project(v).dist <= delta]
        diam_inter = (on_axis[-1] - on_axis[0]) if on_axis else 0
        positions = [pm_a.position(v) for v in path]
        diam_proj = max(positions) - min(positions)
        if abs(diam_inter - diam_proj) > theta4 or "intersection_image" not in witnesses:
            theta4 = max(theta4, abs(diam_inter - diam_proj))
            witnesses["intersection_image"] = f"x={x}, y={y}"

    # (5) Behrstock inequality for the pair of axes
    theta5 = None
    if pm_b is not None:
        b_pts = [v for _, v in pm_b.axis.vertices_in_ball(window)]
        a_pts = axis_pts
        proj_a_of_b = [pm_a.position(v) for v in b_pts]
        proj_b_of_a = [pm_b.position(v) for v in a_pts]
        theta5 = 0
        for x in points:
            da = min(abs(pm_a.position(x) - t) for t in proj_a_of_b)
            db = min(abs(pm_b.position(x) - t) for t in proj_b_of_a)
            if min(da, db) > theta5 or "behrstock" not in witnesses:
                theta5 = max(theta5, min(da, db))
                witnesses["behrstock"] = str(x)

    # (6) Morseness: spur-perturbed axis geodesics per (kappa, lambda)
    sigma_rows = []
    off_letters = list(range(1, group.rank + 1)) + [-i for i in range(1, group.rank + 1)]
    for kappa, lam in qg_grid:
        accepted = 0
        sigma = 0
        max_spur = int(lam // 2)
        for _ in range(qg_samples):
            t0 = rng.randint(-sample_radius, 0)
            t1 = rng.randint(1, sample_radius)
            path = [pm_a.axis.vertex(t) for t in range(t0, t1 + 1)]
            if max_spur > 0:
                out: list[Word] = []
                for v in path:
                    out.append(v)
                    if rng.random() < 0.4:
                        depth = rng.randint(1, max_spur)
                        spur = [v]
                        cur = v
                        for _ in range(depth):
                            l = rng.choice(off_letters)
                            nxt = cur * group.from_letters([l])
                            if nxt.length != cur.length + 1:
                                break
                            spur.append(nxt)
                            cur = nxt
                        out.extend(spur[1:])
                        out.extend(reversed(spur[:-1]))
                path = out
            if not _quasi_geodesic_ok(path, kappa, lam):
                continue
            accepted += 1
            sigma = max(sigma, max(pm_a.project(v).dist for v in path))
        sigma_rows.append((kappa, lam, sigma, accepted))

    # (7) coarse invariance: epsilon-perturbed axis sets stay constricting
    zeta_rows = []
    small_r = min(sample_radius, 3)
    small_points = _ball_points(group, small_r, pair_cap)
    for eps in perturbations:
        b_set = []
        for _, v in pm_a.axis.vertices_in_ball(window):
            w = v
            for _ in range(eps):
                l = rng.choice(off_letters)
                cand = w * group.from_letters([l])
                if cand.length == w.length + 1:
                    w = cand
            b_set.append(w)
        sp = SetProjection(b_set)
        needed = 0
        for x, y in itertools.combinations(small_points, 2):
            bx, _ = sp.project(x)
            by, _ = sp.project(y)
            gap = distance(bx, by)
            if gap <= needed:
                continue
            worst = 0
            for path in all_geodesics(x, y):
                ax = min(distance(v, bx) for v in path)
                ay = min(distance(v, by) for v in path)
                worst = max(worst, ax, ay)
            needed = max(needed, min(gap, worst))
        zeta_rows.append((eps, needed, len(small_points)))

    return AuditTable(radius=sample_radius, samples=len(points),
                      theta_nearest_point=theta1, theta_equivariance=theta2,
                      theta_lipschitz=max(theta3, 0),
                      theta_intersection_image=theta4,
                      theta_behrstock=theta5,
                      sigma_table=tuple(sigma_rows),
                      zeta_table=tuple(zeta_rows),
                      witnesses=tuple(sorted(witnesses.items())))


@dataclass(frozen=True)
class IntersectionImageRecord:
    diam_intersection: int
    diam_projection: int
    difference: int
    theta: int
    eps1: int
    eps2: int
    flagged: bool


def intersection_image_audit(pm: ProjectionMap, orbit, eps1: int, eps2: int,
                             sample_radius: int, theta: int = 1,
                             zeta_bound: int | None = None) -> IntersectionImageRecord:
    """Compare diam(A^{+theta+eps1} & Y^{+eps2}) with diam_A(Y) on a ball.

    Both diameters are exact over B(o, r); the empty intersection has
    diameter 0 by convention.  ``flagged`` is set when the difference
    exceeds ``zeta_bound`` (when given).
    """
    group = pm.group
    points = _ball_points(group, sample_radius, DEFAULT_PAIR_CAP)
    thick = theta + eps1
    qualifying = [x for x in points
                  if pm.project(x).dist <= thick and orbit.distance_to(x) <= eps2]
    diam_inter = 0
    for x, y in itertools.combinations(qualifying, 2):
        diam_inter = max(diam_inter, distance(x, y))
    y_sample = orbit.sample_in_ball(sample_radius)
    diam_proj = pm.projected_diameter(y_sample)
    diff = abs(diam_inter - diam_proj)
    return IntersectionImageRecord(
        diam_intersection=diam_inter, diam_projection=diam_proj, difference=diff,
        theta=theta, eps1=eps1, eps2=eps2,
        flagged=(zeta_bound is not None and diff > zeta_bound))


def projection_symmetry_audit(pm_a: ProjectionMap, pm_b: ProjectionMap,
                              sample_radius: int) -> dict:
    """|diam_A(B) - diam_B(A)| over axis vertices within the ball."""
    a_pts = [v for _, v in pm_a.axis.vertices_in_ball(sample_radius)]
    b_pts = [v for _, v in pm_b.axis.vertices_in_ball(sample_radius)]
    diam_a_of_b = pm_a.projected_diameter(b_pts)
    diam_b_of_a = pm_b.projected_diameter(a_pts)
    return {
        "diam_A_of_B": diam_a_of_b,
        "diam_B_of_A": diam_b_of_a,
        "difference": abs(diam_a_of_b - diam_b_of_a),
    }


@dataclass(frozen=True)
class TranslationLengthRecord:
    translation_length: int
    step_lengths: tuple[int, ...]
    increments_exact: bool
    lower_bound_ok: bool
    upper_bound_ok: bool
    inf_over_window: float


def translation_length_check(g: Word, m_max: int = 10) -> TranslationLengthRecord:
    """Verify the affine law d(o, g^m o) = m [g]^inf + C for m >= 1.

    [g]^inf equals the cyclically reduced core length; the check recomputes
    d(o, g^m o) by plain word arithmetic and confirms the exact unit
    increment, the two quasi-isometry bounds, and reports the finite-m
    infimum of d(o, g^m o)/m.
    """
    if is_torsion(g):
        raise FiniteOrderElement(f"{g} has finite order")
    ax = Axis(g)
    t = ax.translation_length
    lengths = []
    power = g.group.identity()
    for _ in range(1, m_max + 1):
        power = power * g
        lengths.append(power.length)
    increments_exact = all(lengths[i + 1] - lengths[i] == t for i in range(len(lengths) - 1))
    lower_ok = all(lengths[m - 1] >= t * m for m in range(1, m_max + 1))
    upper_ok = all(lengths[m - 1] <= lengths[0] * m for m in range(1, m_max + 1))
    inf_window = min(lengths[m - 1] / m for m in range(1, m_max + 1))
    return TranslationLengthRecord(
        translation_length=t, step_lengths=tuple(lengths),
        increments_exact=increments_exact, lower_bound_ok=lower_ok,
        upper_bound_ok=upper_ok, inf_over_window=inf_window)


def qi_embedding_check(subject, m_max_or_radius: int = 8) -> dict:
    """Fit (kappa, lambda) for an orbit map.

    For an element g: the map m -> g^m o over |m| <= m_max; for a
    free-group subgroup (core graph): the word metric of the spanning-tree
    basis against the ambient metric over the subgroup ball.
    """
    from .stallings import CoreGraph

    if isinstance(subject, Word):
        g = subject
        if is_torsion(g):
            raise FiniteOrderElement(f"{g} has finite order")
        kappa = 1.0
        for m in range(1, m_max_or_radius + 1):
            d = (g**m).length
            kappa = max(kappa, d / m, m / d)
        return {"kappa": kappa, "lambda": 0.0, "samples": m_max_or_radius}

    core: CoreGraph = subject
    tree_parent: dict[int, tuple[int, int, int] | None] = {core.base: None}
    order = [core.base]
    for v in order:
        for gidx in sorted(core.out[v]):
            w = core.out[v][gidx]
            if w not in tree_parent:
                tree_parent[w] = (v, gidx, +1)
                order.append(w)
        for gidx in sorted(core.into[v]):
            w = core.into[v][gidx]
            if w not in tree_parent:
                tree_parent[w] = (v, gidx, -1)
                order.append(w)
    tree_edges = set()
    for v, rec in tree_parent.items():
        if rec is not None:
            u, gidx, sign = rec
            tree_edges.add((u, gidx, v) if sign > 0 else (v, gidx, u))
    basis_ids = {e: i + 1 for i, e in enumerate(sorted(set(core.edges) - tree_edges))}

    def basis_word(h: Word) -> int:
        """Reduced length of h in the spanning-tree basis."""
        word: list[int] = []
        v = core.base
        for l in h.letters():
            if l > 0:
                e = (v, l - 1, core.out[v][l - 1])
                nxt = e[2]
                sign = 1
            else:
                e = (core.into[v][-l - 1], -l - 1, v)
                nxt = e[0]
                sign = -1
            bid = basis_ids.get(e)
            if bid is not None:
                s = sign * bid
                if word and word[-1] == -s:
                    word.pop()
                else:
                    word.append(s)
            v = nxt
        return len(word)

    kappa = 1.0
    samples = 0
    for h in core.elements_in_ball(m_max_or_radius):
        if h.is_identity:
            continue
        du = basis_word(h)
        if du == 0:
            continue
        samples += 1
        kappa = max(kappa, h.length / du, du / h.length)
    return {"kappa": kappa, "lambda": 0.0, "samples": samples}
