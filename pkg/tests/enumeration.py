"""Independent brute-force oracle for the forward s-t search.

Re-derives the expansion rules (speed-dependent sampling distance, admissible
control grid, constant-acceleration kinematics, jerk feasibility, terminal
conditions, running and terminal costs) directly from their definitions and
enumerates every control sequence without pruning. Used to cross-check the
engine's selected optimum on small instances.
"""

import math


def enumerate_optimum(cfg, path_length, v_bar, root, checker_pairs, horizon):
    """Minimum terminal-shaped cost over all feasible CAM control sequences.

    checker_pairs is a list of (s_k, t_n) collision-band constraints; an edge
    is infeasible when any pair with s_k in (parent.s, child.s] is passed
    within c_t of t_n. Returns None when no terminal state exists.
    """
    s_limit = min(cfg.c_s, path_length - cfg.ds_max)
    best = [None]

    def is_leaf(t, s, v):
        return t > horizon or v < cfg.c_v or s > s_limit

    def terminal(cost, t, v):
        return cost + cfg.w_v * abs(v_bar - v) * max(0.0, horizon - t)

    def recurse(t, s, v, a, cost):
        ds = min(max(v * cfg.expand_tau + 0.5 * cfg.a_max * cfg.expand_tau ** 2,
                     cfg.ds_min), cfg.ds_max)
        s_c = s + ds
        if s_c > path_length - 1e-6:
            return
        lo = max(cfg.a_min, -(v * v) / (2.0 * ds))
        hi = cfg.a_max
        if hi <= lo:
            controls = [hi]
        else:
            n = cfg.control_count
            controls = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
        for u in controls:
            v2 = v * v + 2.0 * u * ds
            if v2 < -1e-9:
                continue
            v_c = math.sqrt(max(v2, 0.0))
            if v_c + v <= 1e-9:
                continue
            if v_c > v_bar + 1e-9:
                continue
            t_c = t + 2.0 * ds / (v_c + v)
            jerk = (u - a) / (t_c - t)
            if jerk < cfg.j_min - 1e-9 or jerk > cfg.j_max + 1e-9:
                continue
            # collision-band check at every pair on this edge
            bad = False
            for s_k, t_n in checker_pairs:
                if s < s_k <= s_c:
                    vk2 = v * v + 2.0 * u * (s_k - s)
                    v_k = math.sqrt(max(vk2, 0.0))
                    if v_k + v <= 1e-9:
                        t_k = t
                    else:
                        t_k = t + 2.0 * (s_k - s) / (v_k + v)
                    if abs(t_k - t_n) < cfg.c_t:
                        bad = True
                        break
            if bad:
                continue
            dt = t_c - t
            cost_c = (cost + cfg.w_v * abs(v_bar - v_c) * dt
                      + cfg.w_a * u * u * dt
                      + cfg.w_j * jerk * jerk * dt)
            if is_leaf(t_c, s_c, v_c):
                score = terminal(cost_c, t_c, v_c)
                if best[0] is None or score < best[0]:
                    best[0] = score
            else:
                recurse(t_c, s_c, v_c, u, cost_c)

    recurse(root.t, root.s, root.v, root.a, 0.0)
    return best[0]
