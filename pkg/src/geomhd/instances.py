"""Shipped example instances: one config dict per verified solution instance.

These are the instances the acceptance suite runs end to end; every entry in
``SHIPPED`` must verify on its declared grid at its declared tolerance.  Grids
are chosen with margin inside each family's domain so that every grid point is
admissible (at least 625 points each).
"""

from __future__ import annotations

import math

SHIPPED: dict[str, dict] = {
    "geo_A_basic": {
        "equation": "geo",
        "family": "geo_A",
        "constants": {"k": 1.0, "c": 1.0, "d": 0.0, "c0": 0.0},
        "params": {"theta": "0"},
        "modes": [[1.0, 0.0, math.pi / 2, 1.0]],
        "grid": {"t": [-1, 1, 9], "x": [-1, 1, 9], "y": [-1, 1, 9]},
        "tolerance": 1e-7,
    },
    "geo_A_full": {
        "equation": "geo",
        "family": "geo_A",
        "constants": {"k": 1.2, "c": 0.8, "d": 0.5, "c0": 0.3},
        "params": {"theta": "sin(t)"},
        "modes": [[0.6, 1.1, 0.4, 1.0], [1.0, -0.7, 0.0, 0.5]],
        "grid": {"t": [-1, 1, 9], "x": [-1, 1, 9], "y": [-1, 1, 9]},
        "tolerance": 1e-7,
    },
    "geo_A_axis_modes": {
        # c = 0 is legal as long as d != 0; the integral factors drop out.
        "equation": "geo",
        "family": "geo_A",
        "constants": {"k": 2.0, "c": 0.0, "d": 1.5, "c0": 0.7},
        "params": {"theta": "t^2"},
        "modes": [[0.8, 0.5, 0.3, 1.0]],
        "grid": {"t": [-1, 1, 9], "x": [-1, 1, 9], "y": [-1, 1, 9]},
        "tolerance": 1e-7,
    },
    "geo_B_bessel": {
        "equation": "geo",
        "family": "geo_B",
        "constants": {"k": 4.0, "b": 1.0, "c": 0.0},
        "grid": {"t": [-1, 1, 9], "x": [0.1, 1.0, 9], "y": [0.1, 1.0, 9]},
        "tolerance": 1e-8,
    },
    "geo_B_log": {
        "equation": "geo",
        "family": "geo_B",
        "constants": {"k": 1.0, "b": 0.5, "c": 0.8},
        "grid": {"t": [-1, 1, 9], "x": [0.1, 1.5, 9], "y": [0.1, 1.5, 9]},
        "tolerance": 1e-8,
    },
    "geo_B_shifted": {
        # the non-steady gauge-shifted variant
        "equation": "geo",
        "family": "geo_B",
        "constants": {"k": 1.0, "b": 0.5, "c": 0.8},
        "params": {"alpha": "0.2*sin(t)", "beta": "t^2"},
        "grid": {"t": [-1, 1, 9], "x": [0.3, 1.5, 9], "y": [0.3, 1.5, 9]},
        "tolerance": 1e-8,
    },
    "mhd_A_poly": {
        "equation": "mhd",
        "family": "mhd_A",
        "params": {"sigma": "t*z", "theta": "t+z", "tau": "z^2"},
        "grid": {"t": [-1, 1, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [-1, 1, 5]},
        "tolerance": 1e-8,
    },
    "mhd_A_smooth": {
        "equation": "mhd",
        "family": "mhd_A",
        "params": {"sigma": "0.3*sin(t)*z", "theta": "t^2", "tau": "cos(z)"},
        "grid": {"t": [-1, 1, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [-1, 1, 5]},
        "tolerance": 1e-8,
    },
    "mhd_B_case1_plus": {
        "equation": "mhd",
        "family": "mhd_B",
        "constants": {"case": 1, "a1": 1.0, "a2": 0.0, "c": 0.1, "branch": "plus"},
        "params": {"lambda": "0"},
        "modes": {"alpha1": ["0", "sin(varpi)"]},
        "grid": {"t": [1, 2, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [0, 1, 5]},
        "tolerance": 1e-8,
    },
    "mhd_B_case1_minus": {
        "equation": "mhd",
        "family": "mhd_B",
        "constants": {"case": 1, "a1": 1.0, "a2": 0.0, "c": 0.1, "branch": "minus"},
        "params": {"lambda": "0"},
        "modes": {"alpha1": ["0", "sin(varpi)"]},
        "grid": {"t": [1, 2, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [0, 1, 5]},
        "tolerance": 1e-8,
    },
    "mhd_B_case1_rich": {
        "equation": "mhd",
        "family": "mhd_B",
        "constants": {"case": 1, "a1": 0.5, "a2": 0.7, "c": 0.2, "branch": "plus"},
        "params": {"lambda": "t*z"},
        "modes": {"alpha1": ["0", "sin(varpi)", "0", "varpi"], "beta2": ["cos(varpi)"]},
        "grid": {"t": [0, 1, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [0, 1, 5]},
        "tolerance": 1e-8,
    },
    "mhd_B_case2_plus": {
        "equation": "mhd",
        "family": "mhd_B",
        "constants": {"case": 2, "a1": 1.0, "a2": 2.0, "c": 0.1, "branch": "plus"},
        "params": {"lambda": "t+z"},
        "modes": {"alpha1": ["0", "sin(varpi)"], "beta1": ["varpi"]},
        "grid": {"t": [0, 1, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [0.5, 1.5, 5]},
        "tolerance": 1e-8,
    },
    "mhd_B_case2_minus": {
        "equation": "mhd",
        "family": "mhd_B",
        "constants": {"case": 2, "a1": 1.0, "a2": 2.0, "c": 0.1, "branch": "minus"},
        "params": {"lambda": "t+z"},
        "modes": {"alpha1": ["0", "sin(varpi)"], "beta1": ["varpi"]},
        "grid": {"t": [0, 1, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [0.5, 1.5, 5]},
        "tolerance": 1e-8,
    },
    "mhd_B_case3_plus": {
        "equation": "mhd",
        "family": "mhd_B",
        "constants": {"case": 3, "a1": 2.0, "a2": 2.0, "c": 0.05, "branch": "plus"},
        "params": {"lambda": "z^2"},
        "modes": {"alpha1": ["varpi^2", "0", "cos(varpi)"], "beta2": ["varpi"]},
        "grid": {"t": [0.6, 1.4, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [0.6, 1.4, 5]},
        "tolerance": 1e-8,
    },
    "mhd_B_case3_minus": {
        "equation": "mhd",
        "family": "mhd_B",
        "constants": {"case": 3, "a1": 2.0, "a2": 2.0, "c": 0.05, "branch": "minus"},
        "params": {"lambda": "z^2"},
        "modes": {"alpha1": ["varpi^2", "0", "cos(varpi)"], "beta2": ["varpi"]},
        "grid": {"t": [0.6, 1.4, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [0.6, 1.4, 5]},
        "tolerance": 1e-8,
    },
    "mhd_C_planar": {
        "equation": "mhd",
        "family": "mhd_C",
        "constants": {"variant": "planar"},
        "params": {"F": "w^2 + w*varpi", "G": "cos(w)*varpi"},
        "grid": {"t": [-1, 1, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [-1, 1, 5]},
        "tolerance": 1e-8,
    },
    "mhd_C_radial": {
        "equation": "mhd",
        "family": "mhd_C",
        "constants": {"variant": "radial"},
        "params": {"F": "w^3", "G": "w*varpi"},
        "grid": {"t": [-1, 1, 5], "x": [-1, 1, 5], "y": [-1, 1, 5], "z": [-1, 1, 5]},
        "tolerance": 1e-8,
    },
}


# Probe configs for the printed transformed family; their verdicts are
# documented findings, not exactness claims (see the acceptance suite).
PRINTED_FORM_PROBES: dict[str, dict] = {
    "mhd_D_identity": {
        # all gauge profiles zero: must coincide with mhd_C planar and verify
        "equation": "mhd",
        "family": "mhd_D",
        "params": {"F": "w^2", "G": "0"},
        "grid": {"t": [-1, 1, 4], "x": [-1, 1, 4], "y": [-1, 1, 4], "z": [-1, 1, 4]},
        "tolerance": 1e-8,
    },
    "mhd_D_lambda_probe": {
        # probes the printed lambda_t term in the psi component
        "equation": "mhd",
        "family": "mhd_D",
        "params": {"F": "0", "G": "0", "lambda": "t*z"},
        "grid": {"t": [-1, 1, 4], "x": [-1, 1, 4], "y": [-1, 1, 4], "z": [-1, 1, 4]},
        "tolerance": 1e-8,
    },
    "mhd_D_full": {
        "equation": "mhd",
        "family": "mhd_D",
        "constants": {"epsilon": 1},
        "params": {
            "F": "w^2",
            "G": "w*varpi",
            "alpha": "0.3*w",
            "sigma": "t*z",
            "tau": "z^2",
            "lambda": "t+z",
        },
        "grid": {"t": [-1, 1, 4], "x": [-1, 1, 4], "y": [-1, 1, 4], "z": [-1, 1, 4]},
        "tolerance": 1e-8,
    },
}
