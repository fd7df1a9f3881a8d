"""Direct-summation reference for the link metrics.

Written from the model formulas with plain loops and ``math``; it shares no
code with the package beyond reading the raw deployment arrays.
"""

import math


def _dist(a, b):
    return math.hypot(float(a[0]) - float(b[0]), float(a[1]) - float(b[1]))


def _members(bands, q):
    return [i for i, b in enumerate(bands) if int(b) == q]


def d2d_powers(cfg, dep, scenario):
    if scenario == "free":
        return [cfg.p_tx_d2d_fixed] * len(dep.tx_xy)
    cap = cfg.eh_a3 - cfg.eh_a2 ** 2 / (4 * cfg.eh_a1)
    out = []
    for b in range(len(dep.tx_xy)):
        if cfg.l_min_override is not None:
            l_min = cfg.l_min_override
        else:
            l_min = min(_dist(c, dep.tx_xy[b]) for c in dep.cell_xy)
        incident = cfg.p_tx_cellular * float(dep.fading.harvest[b]) * l_min ** (-cfg.alpha_g)
        x = (1 - cfg.delta_pseh) * incident
        p = cfg.eh_a1 * x * x + cfg.eh_a2 * x + cfg.eh_a3
        p = min(max(p, 0.0), cap)
        out.append(p * cfg.t_eh / cfg.t_d2d)
    return out


def los(theta, cfg):
    return 1.0 / (1.0 + cfg.env_c * math.exp(-cfg.env_b * (theta - cfg.env_c)))


def evaluate(cfg, dep, scenario):
    """Per-band dicts plus totals, all as Python floats."""
    p = d2d_powers(cfg, dep, scenario)
    H = float(dep.uav_position[2])
    bands = []
    for q in range(cfg.q_bands):
        cells = _members(dep.cell_band, q)
        pairs = _members(dep.d2d_band, q)

        i_uav = 0.0
        for i in pairs:
            h = math.hypot(*dep.tx_xy[i])
            if h > cfg.interference_radius:
                continue
            D = math.sqrt(h * h + H * H)
            i_uav += p[i] * float(dep.fading.to_uav[i]) * D ** (-cfg.alpha_a)

        up = []
        for j in cells:
            D = math.sqrt(float(dep.cell_xy[j][0]) ** 2 + float(dep.cell_xy[j][1]) ** 2 + H * H)
            theta = math.degrees(math.asin(H / D))
            pl = los(theta, cfg)
            s = (pl + cfg.eta_nlos * (1 - pl)) * cfg.p_tx_cellular * D ** (-cfg.alpha_a)
            sinr = s / (i_uav + cfg.noise_a)
            up.append(dict(signal=s, sinr=sinr, rate=cfg.bandwidth_hz * math.log2(1 + sinr)))

        dd = []
        for lb, b in enumerate(pairs):
            sig = p[b] * float(dep.fading.direct[b]) * _dist(dep.tx_xy[b], dep.rx_xy[b]) ** (-cfg.alpha_g)
            i_d = 0.0
            for li, i in enumerate(pairs):
                if i == b:
                    continue
                d = _dist(dep.tx_xy[i], dep.rx_xy[b])
                if d <= cfg.interference_radius:
                    i_d += p[i] * float(dep.fading.d2d[q][li, lb]) * d ** (-cfg.alpha_g)
            i_c = 0.0
            for lj, j in enumerate(cells):
                d = _dist(dep.cell_xy[j], dep.rx_xy[b])
                if d <= cfg.interference_radius:
                    i_c += cfg.p_tx_cellular * float(dep.fading.cell[q][lj, lb]) * d ** (-cfg.alpha_g)
            sinr = sig / (i_d + i_c + cfg.noise_g)
            dd.append(dict(power=p[b], signal=sig, i_d=i_d, i_c=i_c, sinr=sinr,
                           rate=cfg.bandwidth_hz * math.log2(1 + sinr)))

        num = sum(u["rate"] for u in up) + sum(d["rate"] for d in dd)
        den = (cfg.t_uplink + cfg.t_eh) * cfg.p_tx_cellular * len(cells)
        bands.append(dict(i_uav=i_uav, uplink=up, d2d=dd, num=num, den=den,
                          ee=num / den if den else None))
    total = sum(b["num"] for b in bands) / sum(b["den"] for b in bands)
    return bands, total
