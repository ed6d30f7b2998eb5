"""Kernel implementations shared by the numba and pure-numpy backends.

Everything here is written in nopython-compatible style: ``build()`` returns
the functions either as plain Python (the fallback backend) or wrapped with
``numba.njit`` (see ``mixsim.kernels``). Both backends execute the identical
source with identical operation order, so results are bit-equal.
"""

import math
from types import SimpleNamespace

import numpy as np

SQRT2 = math.sqrt(2.0)

# 8-connected neighbourhood in fixed expansion order E, NE, N, NW, W, SW, S, SE.
# Rows grow southward (map text top line = row 0), so "north" is row - 1.
NEIGHBOR_DR = np.array([0, -1, -1, -1, 0, 1, 1, 1], dtype=np.int64)
NEIGHBOR_DC = np.array([1, 1, 0, -1, -1, -1, 0, 1], dtype=np.int64)


def build(jit=None):
    """Construct the kernel set, optionally wrapping each with *jit*."""
    deco = jit if jit is not None else (lambda f: f)

    @deco
    def raycast(occ, x, y, angle, max_range, resolution):
        """Distance from (x, y) along *angle* to the first occupied cell.

        Uses exact grid traversal (Amanatides-Woo); the returned distance is
        the ray parameter at which the occupied cell is entered, capped at
        max_range. Starting inside an occupied or out-of-bounds cell gives 0.
        """
        h, w = occ.shape
        c = int(x / resolution)
        r = int(y / resolution)
        if r < 0 or r >= h or c < 0 or c >= w:
            return 0.0
        if occ[r, c] != 0:
            return 0.0
        dx = math.cos(angle)
        dy = math.sin(angle)
        if dx > 0.0:
            step_c = 1
            t_max_x = ((c + 1) * resolution - x) / dx
            t_delta_x = resolution / dx
        elif dx < 0.0:
            step_c = -1
            t_max_x = (c * resolution - x) / dx
            t_delta_x = -resolution / dx
        else:
            step_c = 0
            t_max_x = math.inf
            t_delta_x = math.inf
        if dy > 0.0:
            step_r = 1
            t_max_y = ((r + 1) * resolution - y) / dy
            t_delta_y = resolution / dy
        elif dy < 0.0:
            step_r = -1
            t_max_y = (r * resolution - y) / dy
            t_delta_y = -resolution / dy
        else:
            step_r = 0
            t_max_y = math.inf
            t_delta_y = math.inf
        while True:
            if t_max_x < t_max_y:
                t = t_max_x
                c += step_c
                t_max_x += t_delta_x
            else:
                t = t_max_y
                r += step_r
                t_max_y += t_delta_y
            if t >= max_range:
                return max_range
            if r < 0 or r >= h or c < 0 or c >= w:
                return max_range
            if occ[r, c] != 0:
                return t

    @deco
    def scan_ranges(occ, x, y, heading, bearings, max_range, resolution):
        """Ray-cast one range per bearing (bearings are robot-relative)."""
        n = bearings.shape[0]
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            out[i] = raycast(occ, x, y, heading + bearings[i], max_range, resolution)
        return out

    @deco
    def astar(occ, sr, sc, gr, gc, resolution):
        """Cost-optimal 8-connected path on an occupancy grid.

        Straight steps cost resolution, diagonals resolution*sqrt(2); the
        octile heuristic is consistent, so every node is expanded at most
        once. Diagonal moves are disallowed when either adjacent orthogonal
        cell is occupied (no corner cutting). Ties in f are broken by push
        order, which together with the fixed neighbour order makes the
        result fully deterministic.

        Returns (path, cost): path is an (N, 2) int32 array of (row, col)
        from start to goal inclusive; an empty path with cost -1.0 means
        unreachable (or an occupied endpoint).
        """
        h, w = occ.shape
        empty = np.empty((0, 2), dtype=np.int32)
        if sr < 0 or sr >= h or sc < 0 or sc >= w:
            return empty, -1.0
        if gr < 0 or gr >= h or gc < 0 or gc >= w:
            return empty, -1.0
        if occ[sr, sc] != 0 or occ[gr, gc] != 0:
            return empty, -1.0
        if sr == gr and sc == gc:
            single = np.empty((1, 2), dtype=np.int32)
            single[0, 0] = sr
            single[0, 1] = sc
            return single, 0.0

        n = h * w
        g = np.full(n, np.inf, dtype=np.float64)
        parent = np.full(n, -1, dtype=np.int64)
        closed = np.zeros(n, dtype=np.uint8)
        cap = 8 * n + 8
        heap_f = np.empty(cap, dtype=np.float64)
        heap_tie = np.empty(cap, dtype=np.int64)
        heap_idx = np.empty(cap, dtype=np.int64)
        size = 0
        counter = 0

        start = sr * w + sc
        goal = gr * w + gc
        g[start] = 0.0
        ddc = abs(gc - sc)
        ddr = abs(gr - sr)
        if ddc > ddr:
            h0 = (ddc + (SQRT2 - 1.0) * ddr) * resolution
        else:
            h0 = (ddr + (SQRT2 - 1.0) * ddc) * resolution
        heap_f[0] = h0
        heap_tie[0] = counter
        heap_idx[0] = start
        counter += 1
        size = 1

        while size > 0:
            # pop-min on (f, tie)
            cur = heap_idx[0]
            size -= 1
            heap_f[0] = heap_f[size]
            heap_tie[0] = heap_tie[size]
            heap_idx[0] = heap_idx[size]
            i = 0
            while True:
                left = 2 * i + 1
                right = left + 1
                m = i
                if left < size and (
                    heap_f[left] < heap_f[m]
                    or (heap_f[left] == heap_f[m] and heap_tie[left] < heap_tie[m])
                ):
                    m = left
                if right < size and (
                    heap_f[right] < heap_f[m]
                    or (heap_f[right] == heap_f[m] and heap_tie[right] < heap_tie[m])
                ):
                    m = right
                if m == i:
                    break
                tf = heap_f[i]
                tt = heap_tie[i]
                ti = heap_idx[i]
                heap_f[i] = heap_f[m]
                heap_tie[i] = heap_tie[m]
                heap_idx[i] = heap_idx[m]
                heap_f[m] = tf
                heap_tie[m] = tt
                heap_idx[m] = ti
                i = m

            if closed[cur] != 0:
                continue
            closed[cur] = 1
            if cur == goal:
                break
            r = cur // w
            c = cur % w
            gc_cur = g[cur]
            for k in range(8):
                dr = NEIGHBOR_DR[k]
                dc = NEIGHBOR_DC[k]
                nr = r + dr
                nc = c + dc
                if nr < 0 or nr >= h or nc < 0 or nc >= w:
                    continue
                if occ[nr, nc] != 0:
                    continue
                if dr != 0 and dc != 0:
                    if occ[r, nc] != 0 or occ[nr, c] != 0:
                        continue
                    step = SQRT2 * resolution
                else:
                    step = resolution
                j = nr * w + nc
                if closed[j] != 0:
                    continue
                ng = gc_cur + step
                if ng < g[j]:
                    g[j] = ng
                    parent[j] = cur
                    ddc = abs(gc - nc)
                    ddr = abs(gr - nr)
                    if ddc > ddr:
                        hco = (ddc + (SQRT2 - 1.0) * ddr) * resolution
                    else:
                        hco = (ddr + (SQRT2 - 1.0) * ddc) * resolution
                    # sift-up push
                    heap_f[size] = ng + hco
                    heap_tie[size] = counter
                    heap_idx[size] = j
                    counter += 1
                    i = size
                    size += 1
                    while i > 0:
                        p = (i - 1) // 2
                        if heap_f[p] > heap_f[i] or (
                            heap_f[p] == heap_f[i] and heap_tie[p] > heap_tie[i]
                        ):
                            tf = heap_f[i]
                            tt = heap_tie[i]
                            ti = heap_idx[i]
                            heap_f[i] = heap_f[p]
                            heap_tie[i] = heap_tie[p]
                            heap_idx[i] = heap_idx[p]
                            heap_f[p] = tf
                            heap_tie[p] = tt
                            heap_idx[p] = ti
                            i = p
                        else:
                            break

        if closed[goal] == 0:
            return empty, -1.0
        depth = 1
        node = goal
        while parent[node] >= 0:
            node = parent[node]
            depth += 1
        path = np.empty((depth, 2), dtype=np.int32)
        node = goal
        for i in range(depth - 1, -1, -1):
            path[i, 0] = node // w
            path[i, 1] = node % w
            node = parent[node]
        return path, g[goal]

    @deco
    def polyline_progress(xs, ys, cum, px, py):
        """Project a point onto a polyline.

        Returns (arc length at the projection, distance to the polyline).
        Ties go to the earliest segment so progress never jumps backward
        between equal-distance candidates.
        """
        m = xs.shape[0]
        if m == 1:
            ddx = px - xs[0]
            ddy = py - ys[0]
            return 0.0, math.sqrt(ddx * ddx + ddy * ddy)
        best_d2 = math.inf
        best_s = 0.0
        for i in range(m - 1):
            ax = xs[i]
            ay = ys[i]
            vx = xs[i + 1] - ax
            vy = ys[i + 1] - ay
            seg2 = vx * vx + vy * vy
            if seg2 > 0.0:
                u = ((px - ax) * vx + (py - ay) * vy) / seg2
                if u < 0.0:
                    u = 0.0
                elif u > 1.0:
                    u = 1.0
            else:
                u = 0.0
            qx = ax + u * vx
            qy = ay + u * vy
            ddx = px - qx
            ddy = py - qy
            d2 = ddx * ddx + ddy * ddy
            if d2 < best_d2:
                best_d2 = d2
                best_s = cum[i] + u * math.sqrt(seg2)
        return best_s, math.sqrt(best_d2)

    @deco
    def integrate_scan(
        static,
        phantom,
        first_free,
        t_now,
        x,
        y,
        heading,
        bearings,
        ranges,
        hits,
        decay_s,
        resolution,
    ):
        """Fold one scan into the belief layers (in place).

        A hit endpoint on a statically-free cell becomes a phantom obstacle.
        Cells fully traversed by a beam are observed free: first_free holds
        the start of the current uninterrupted run of free observations
        (-1 = none), and a phantom reverts once a free observation arrives
        decay_s or more after that run started. An occupied observation
        restarts the run. The robot's own cell is never marked.
        """
        h, w = static.shape
        rob_c = int(x / resolution)
        rob_r = int(y / resolution)
        n = bearings.shape[0]
        for i in range(n):
            angle = heading + bearings[i]
            rng = ranges[i]
            c = rob_c
            r = rob_r
            dx = math.cos(angle)
            dy = math.sin(angle)
            if dx > 0.0:
                step_c = 1
                t_max_x = ((c + 1) * resolution - x) / dx
                t_delta_x = resolution / dx
            elif dx < 0.0:
                step_c = -1
                t_max_x = (c * resolution - x) / dx
                t_delta_x = -resolution / dx
            else:
                step_c = 0
                t_max_x = math.inf
                t_delta_x = math.inf
            if dy > 0.0:
                step_r = 1
                t_max_y = ((r + 1) * resolution - y) / dy
                t_delta_y = resolution / dy
            elif dy < 0.0:
                step_r = -1
                t_max_y = (r * resolution - y) / dy
                t_delta_y = -resolution / dy
            else:
                step_r = 0
                t_max_y = math.inf
                t_delta_y = math.inf
            while True:
                if t_max_x < t_max_y:
                    t_next = t_max_x
                else:
                    t_next = t_max_y
                if t_next <= rng:
                    # cell fully behind the endpoint: observed free
                    ff = first_free[r, c]
                    if ff < 0.0:
                        first_free[r, c] = t_now
                    elif phantom[r, c] != 0 and (t_now - ff) >= decay_s:
                        phantom[r, c] = 0
                    if t_max_x < t_max_y:
                        c += step_c
                        t_max_x += t_delta_x
                    else:
                        r += step_r
                        t_max_y += t_delta_y
                    if r < 0 or r >= h or c < 0 or c >= w:
                        break
                else:
                    if hits[i] != 0 and not (r == rob_r and c == rob_c):
                        if static[r, c] == 0:
                            phantom[r, c] = 1
                        first_free[r, c] = -1.0
                    break

    return SimpleNamespace(
        raycast=raycast,
        scan_ranges=scan_ranges,
        astar=astar,
        polyline_progress=polyline_progress,
        integrate_scan=integrate_scan,
    )
