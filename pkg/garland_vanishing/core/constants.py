# Closure guard for permutation groups
DEFAULT_GROUP_CAP = 10000

# Relation consistency when closing a representation along the BFS tree
RELATION_TOL = 1e-8
# Homomorphism / orthogonality / pairing compatibility
HOMOMORPHISM_TOL = 1e-10
SINGULAR_TOL = 1e-10

# Zero/positive eigenvalue separation and eigensolver residual
EIGEN_ZERO_TOL = 1e-8
EIGEN_RESIDUAL_TOL = 1e-10

# Singular values below RANK_TOL * sigma_max count as zero
RANK_TOL = 1e-8

# |C - threshold| below this is reported as a boundary case (always FAIL)
BOUNDARY_TOL = 1e-9

# Local-to-global identities (relative)
IDENTITY_TOL = 1e-9
SWITCHING_TOL = 1e-10
ADJOINT_TOL = 1e-10
CHAIN_TOL = 1e-12

# Brute-force Poincaré search is only meant for tiny links
MAX_BRUTEFORCE_VERTICES = 6

VERDICT_PASS = "PASS"
VERDICT_FAIL = "FAIL"
VERDICT_HYPOTHESIS_FAILED = "HYPOTHESIS_FAILED"

CROSSCHECK_CONSISTENT = "consistent"
CROSSCHECK_UNINFORMATIVE = "uninformative"
CROSSCHECK_INCONSISTENT = "inconsistent"
