"""
Output column layouts for every command.

Column lists are ordered; the CSV header is emitted in exactly this order.
Mappings translate schema field names into column names where the two differ.
"""

# Parameter columns leading every steady-state row
PARAMETER_COLUMNS: list[str] = ["eta", "theta", "phi", "Omega", "kappa"]

# NonclassicalityReport field -> steady-state column
REPORT_COLUMN_MAPPINGS: dict[str, str] = {
    "var_minus": "var_minus",
    "var_plus": "var_plus",
    "dgcz": "S_dgcz",
    "log_neg": "log_neg",
    "g2_cross": "g2_cross",
    "cs_ratio": "cs_ratio",
}

# Steady-state row: one per `steady` call or sweep grid point
STEADY_COLUMNS: list[str] = [
    *PARAMETER_COLUMNS,
    "n_a",
    "n_b",
    "re_m",
    "im_m",
    *REPORT_COLUMN_MAPPINGS.values(),
    "margin",
    "dD_ba_dtheta",
    "extrapolated",
    "status",
]

# Moment quantities compared across routes
MOMENT_QUANTITIES: list[str] = ["n_a", "n_b", "re_m", "im_m"]

# Mean-field quantities
FIRST_QUANTITIES: list[str] = ["re_a", "im_a", "re_b", "im_b"]

# Time series of `transient`; each route gets a suffixed copy of the quantities
TRANSIENT_ROUTES: list[str] = ["ode", "analytic"]
TRANSIENT_COLUMNS: list[str] = [
    "t",
    *[
        f"{q}_{route}"
        for route in TRANSIENT_ROUTES
        for q in (*FIRST_QUANTITIES, *MOMENT_QUANTITIES)
    ],
]
FOCK_COLUMNS: list[str] = [
    *[f"{q}_fock" for q in MOMENT_QUANTITIES],
    "trace_dev",
    "min_eig",
    "boundary_pop",
]

# Monte-Carlo comparison, long format: one row per (time, quantity)
MC_COLUMNS: list[str] = ["t", "quantity", "mc", "stderr", "ode", "z"]

# Fock oracle comparison against the deterministic routes
ORACLE_COLUMNS: list[str] = [
    "t",
    *[
        f"{q}_{route}"
        for q in MOMENT_QUANTITIES
        for route in ("fock", "ode", "analytic")
    ],
    "max_abs_dev",
    "tolerance",
    "trace_dev",
    "min_eig",
    "boundary_pop",
    "ok",
]

# FockDiagnostics field -> diagnostic column
DIAGNOSTIC_COLUMN_MAPPINGS: dict[str, str] = {
    "trace_dev": "trace_dev",
    "min_eigenvalue": "min_eig",
    "boundary_pop": "boundary_pop",
}

# Row status markers
STATUS_OK = "ok"
STATUS_UNSTABLE = "unstable"
