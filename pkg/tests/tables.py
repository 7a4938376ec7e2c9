"""Published fit parameters used as round-trip fixtures (SI units)."""

# A, t0 (s), T (s), n
RELOAD_ROWS = {
    "mot": {"A": 0.49, "t0": 0.114, "T": 0.020, "n": 0.49},
    "pgc": {"A": 0.32, "t0": 0.078, "T": 0.008, "n": 0.55},
}

# A, tau (s), B, n
COHERENCE_ROWS = {
    "no_mcr_xy8": {"A": 0.97, "tau": 0.650, "B": 0.00, "n": 1.71},
    "mcr_xy8": {"A": 0.935, "tau": 0.678, "B": 0.00, "n": 1.82},
    "mcr_xy4_spectator": {"A": 0.947, "tau": 0.136, "B": 0.00, "n": 1.08},
    "pgc_reload_xy8": {"A": 0.954, "tau": 0.640, "B": -0.01, "n": 1.8},
    "no_reload_xy4": {"A": 0.989, "tau": 0.445, "B": 0.00, "n": 1.79},
    "mot_reload_xy4": {"A": 1.00, "tau": 0.420, "B": -0.04, "n": 1.3},
}


def perturb(params, signs, frac=0.2, zero_step=0.02):
    """Scale each parameter by ``1 + s*frac``; zeros are shifted by ``s*zero_step``."""
    out = {}
    for (k, v), s in zip(params.items(), signs):
        out[k] = v * (1 + s * frac) if v != 0 else s * zero_step
    return out
