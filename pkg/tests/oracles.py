"""Independent reference implementations used to check the real ones.

Everything here is deliberately brute force: dense sampling instead of
supercover traversal, full graph search instead of Theta*, explicit
enumeration instead of counting tricks, tiny-step Euler instead of the
closed-form arc. Slow and obviously correct is the point.
"""

import itertools
import math

import numpy as np

from unwindsim.world import OccupancyGrid


def brute_wall_clearance(position, grid: OccupancyGrid) -> float:
    """Scan every occupied cell and take the nearest rectangle distance."""
    x, y = position
    res = grid.resolution
    ox, oy = grid.origin
    best = math.inf
    rows, cols = np.nonzero(grid.occupied)
    for r, c in zip(rows, cols):
        x0, x1 = ox + c * res, ox + (c + 1) * res
        y0, y1 = oy + r * res, oy + (r + 1) * res
        dx = max(x0 - x, 0.0, x - x1)
        dy = max(y0 - y, 0.0, y - y1)
        best = min(best, math.hypot(dx, dy))
    return best


def sampled_line_blocked(grid: OccupancyGrid, a, b, steps_per_cell: int = 100) -> bool:
    """Dense point sampling along the segment; True if any sample lands in
    an occupied cell. The supercover must block at least these."""
    ax, ay = a
    bx, by = b
    length_cells = math.hypot(bx - ax, by - ay) / grid.resolution
    n = max(2, int(length_cells * steps_per_cell) + 1)
    for i in range(n + 1):
        t = i / n
        x = ax + t * (bx - ax)
        y = ay + t * (by - ay)
        col, row = grid.cell_of(x, y)
        if grid.occupied[row, col]:
            return True
    return False


def segment_enters_open_cell(grid: OccupancyGrid, a, b) -> bool:
    """True if the open segment intersects the open interior of any
    occupied cell (boundary touching and corner grazing allowed). This is
    the admissibility rule for the shortest-path oracle below."""
    ax, ay = a
    bx, by = b
    res = grid.resolution
    ox, oy = grid.origin
    dx, dy = bx - ax, by - ay
    rows, cols = np.nonzero(grid.occupied)
    for r, c in zip(rows, cols):
        x0, x1 = ox + c * res, ox + (c + 1) * res
        y0, y1 = oy + r * res, oy + (r + 1) * res
        t0, t1 = 0.0, 1.0
        ok = True
        for p, q0, q1 in ((dx, x0 - ax, x1 - ax), (dy, y0 - ay, y1 - ay)):
            if p == 0.0:
                lo_ok = q0 <= 0.0 <= q1
                if not lo_ok:
                    ok = False
                    break
            else:
                ta, tb = q0 / p, q1 / p
                if ta > tb:
                    ta, tb = tb, ta
                t0, t1 = max(t0, ta), min(t1, tb)
                if t0 > t1:
                    ok = False
                    break
        if not ok or t1 - t0 <= 1e-12:
            continue
        tm = 0.5 * (t0 + t1)
        mx, my = ax + tm * dx, ay + tm * dy
        if x0 + 1e-12 < mx < x1 - 1e-12 and y0 + 1e-12 < my < y1 - 1e-12:
            return True
    return False


def _corner_vertices(grid: OccupancyGrid):
    """Lattice corners of the occupied region (candidate turn points for
    the true shortest path)."""
    occ = grid.occupied
    h, w = occ.shape
    res = grid.resolution
    ox, oy = grid.origin
    padded = np.zeros((h + 2, w + 2), dtype=bool)
    padded[1:-1, 1:-1] = occ
    verts = []
    for r in range(h + 1):
        for c in range(w + 1):
            block = padded[r : r + 2, c : c + 2]
            if 0 < block.sum() < 4:
                verts.append((ox + c * res, oy + r * res))
    return verts


def corner_graph_infimum(grid: OccupancyGrid, start, goal) -> float:
    """Infimum path length over obstacle-corner turn points (Dijkstra on a
    corner visibility graph). A true lower bound for any admissible path,
    but not attainable by a planner that turns at cell centers."""
    import heapq

    nodes = [tuple(start), tuple(goal)] + _corner_vertices(grid)
    n = len(nodes)
    pts = np.asarray(nodes)

    def visible(i, j):
        return not segment_enters_open_cell(grid, nodes[i], nodes[j])

    dist = [math.inf] * n
    dist[0] = 0.0
    heap = [(0.0, 0)]
    done = [False] * n
    while heap:
        d, i = heapq.heappop(heap)
        if done[i]:
            continue
        done[i] = True
        if i == 1:
            return d
        for j in range(n):
            if done[j] or not visible(i, j):
                continue
            nd = d + math.hypot(pts[j, 0] - pts[i, 0], pts[j, 1] - pts[i, 1])
            if nd < dist[j]:
                dist[j] = nd
                heapq.heappush(heap, (nd, j))
    return math.inf


def _occupied_rects(grid: OccupancyGrid):
    rows, cols = np.nonzero(grid.occupied)
    res = grid.resolution
    ox, oy = grid.origin
    x0 = ox + cols * res
    y0 = oy + rows * res
    return x0, x0 + res, y0, y0 + res


def _axis_clip_intervals(d, lo_edge, hi_edge, a):
    with np.errstate(divide="ignore", invalid="ignore"):
        ta = (lo_edge[None, :] - a) / d
        tb = (hi_edge[None, :] - a) / d
    lo = np.minimum(ta, tb)
    hi = np.maximum(ta, tb)
    parallel = np.broadcast_to(d == 0.0, lo.shape)
    inside = (lo_edge[None, :] <= a) & (a <= hi_edge[None, :])
    lo = np.where(parallel, np.where(inside, -np.inf, np.inf), lo)
    hi = np.where(parallel, np.where(inside, np.inf, -np.inf), hi)
    return lo, hi


def _segments_touch_cells(ax, ay, targets, rects) -> np.ndarray:
    """Vectorized closed-rectangle intersection: for one source point and T
    target points, does each segment touch any occupied cell at all (corner
    grazing and edge running included)? Matches the strict supercover
    admissibility rule by an independent construction (slab clipping)."""
    x0, x1, y0, y1 = rects
    dx = targets[:, 0:1] - ax  # (T, 1)
    dy = targets[:, 1:2] - ay
    lox, hix = _axis_clip_intervals(dx, x0, x1, ax)
    loy, hiy = _axis_clip_intervals(dy, y0, y1, ay)
    t0 = np.maximum(np.maximum(lox, loy), 0.0)
    t1 = np.minimum(np.minimum(hix, hiy), 1.0)
    with np.errstate(invalid="ignore"):
        touch = t1 >= t0 - 1e-12
    return touch.any(axis=1)


def center_visibility_shortest(grid: OccupancyGrid, start, goal) -> float:
    """Dijkstra over a visibility graph on the planner's own vertex set:
    exact start/goal plus the free cell centers bordering obstacles (the
    only centers an optimal center-turning path needs), with edges
    admissible under the same strict touch rule the planner uses."""
    import heapq

    occ = grid.occupied
    h, w = occ.shape
    res = grid.resolution
    ox, oy = grid.origin
    near = np.zeros_like(occ)
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            shifted = np.zeros_like(occ)
            r0, r1 = max(dr, 0), h + min(dr, 0)
            c0, c1 = max(dc, 0), w + min(dc, 0)
            shifted[r0:r1, c0:c1] = occ[r0 - dr : r1 - dr, c0 - dc : c1 - dc]
            near |= shifted
    rows, cols = np.nonzero(near & ~occ)
    centers = np.column_stack([ox + (cols + 0.5) * res, oy + (rows + 0.5) * res])
    nodes = np.vstack([[start], [goal], centers])
    rects = _occupied_rects(grid)

    n = len(nodes)
    dist = np.full(n, np.inf)
    dist[0] = 0.0
    done = np.zeros(n, dtype=bool)
    heap = [(0.0, 0)]
    while heap:
        d, i = heapq.heappop(heap)
        if done[i]:
            continue
        done[i] = True
        if i == 1:
            return d
        blocked = _segments_touch_cells(nodes[i, 0], nodes[i, 1], nodes, rects)
        lens = np.hypot(nodes[:, 0] - nodes[i, 0], nodes[:, 1] - nodes[i, 1])
        for j in np.flatnonzero(~blocked & ~done):
            nd = d + lens[j]
            if nd < dist[j]:
                dist[j] = nd
                heapq.heappush(heap, (nd, int(j)))
    return math.inf


def astar_8connected_length(grid: OccupancyGrid, start, goal) -> float:
    """Grid-constrained 8-connected A* path length between the cells
    containing start and goal (an upper bound for any-angle planning)."""
    import heapq

    occ = grid.occupied
    h, w = occ.shape
    res = grid.resolution
    sc = grid.cell_of(*start)
    gc = grid.cell_of(*goal)
    g = np.full((h, w), np.inf)
    g[sc[1], sc[0]] = 0.0
    heap = [(0.0, sc[0], sc[1])]
    while heap:
        f, x, y = heapq.heappop(heap)
        if (x, y) == gc:
            return g[y, x] * res
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                nx, ny = x + dx, y + dy
                if not (0 <= nx < w and 0 <= ny < h) or occ[ny, nx]:
                    continue
                if dx != 0 and dy != 0 and (occ[y, nx] or occ[ny, x]):
                    continue
                ng = g[y, x] + math.hypot(dx, dy)
                if ng < g[ny, nx]:
                    g[ny, nx] = ng
                    hx = math.hypot(gc[0] - nx, gc[1] - ny)
                    heapq.heappush(heap, (ng + hx, nx, ny))
    return math.inf


def euler_unicycle(x, y, theta, v, omega, dt, n_micro=100000):
    """Tiny-step Euler integration of the unicycle over one control step."""
    h = dt / n_micro
    for _ in range(n_micro):
        x += v * math.cos(theta) * h
        y += v * math.sin(theta) * h
        theta += omega * h
    return x, y, theta


def wilcoxon_enumerate(diffs):
    """Exact two-sided and upper one-sided p by full sign-flip enumeration.

    diffs must be tie-free in |d| and zero-free.
    """
    absd = np.abs(np.asarray(diffs, dtype=float))
    n = len(absd)
    order = np.argsort(absd)
    ranks = np.empty(n)
    ranks[order] = np.arange(1, n + 1)
    w_plus = ranks[np.asarray(diffs) > 0].sum()
    w_minus = ranks[np.asarray(diffs) < 0].sum()
    lo, hi = min(w_plus, w_minus), max(w_plus, w_minus)
    count_two = 0
    count_ge = 0
    for signs in itertools.product((0, 1), repeat=n):
        w = sum(r for r, s in zip(ranks, signs) if s)
        if w <= lo or w >= hi:
            count_two += 1
        if w >= w_plus:
            count_ge += 1
    total = 2**n
    return count_two / total, count_ge / total


def mwu_enumerate(a, b):
    """Exact two-sided p for Mann-Whitney U by enumerating every way the
    pooled ranks could be split between the groups (tie-free input)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na, nb = len(a), len(b)
    pooled = np.concatenate([a, b])
    order = np.argsort(pooled)
    ranks = np.empty(len(pooled))
    ranks[order] = np.arange(1, len(pooled) + 1)
    u_a = ranks[:na].sum() - na * (na + 1) / 2.0
    u_b = na * nb - u_a
    lo, hi = min(u_a, u_b), max(u_a, u_b)
    count = 0
    total = 0
    all_ranks = np.arange(1, na + nb + 1)
    base = na * (na + 1) / 2.0
    for combo in itertools.combinations(all_ranks, na):
        u = sum(combo) - base
        if u <= lo or u >= hi:
            count += 1
        total += 1
    return count / total
