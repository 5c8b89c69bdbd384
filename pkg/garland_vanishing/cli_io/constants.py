EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONSISTENT = 2

VALID_FORMATS = {"human", "json", "csv"}
VALID_REPRESENTATION_KINDS = {"trivial", "sign", "permutation"}

ENV_PREFIX = "GARLAND_VANISHING_"
TRUTHY = {"1", "true", "yes", "on"}

# Exponents exercised by the projection-algebra suite
PROJECTION_EXPONENTS = (1.5, 2.0, 3.0)

# Columns of the per-link spectral table (csv output)
SPECTRUM_COLUMNS = (
    "vertex",
    "orbit_size",
    "vertex_count",
    "edge_count",
    "connected",
    "lambda1",
    "kappa2",
    "threshold",
)
