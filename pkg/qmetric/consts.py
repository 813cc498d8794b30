import math

# Inputs with |q - 1| below this are evaluated on the Shannon branch.
SHANNON_Q_TOLERANCE = 1e-9

# Distribution validation.
SUM_TOLERANCE = 1e-9
NEGATIVE_TOLERANCE = 1e-12

# Density matrix validation.
HERMITIAN_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-12
EIGENVALUE_TOLERANCE = 1e-10

THETA_MAX = math.pi

DICHOTOMIC_LABELS = (+1, -1)
TRICHOTOMIC_LABELS = (+1, 0, -1)

# Environment variable naming the default directory for relative output paths.
OUT_DIR_ENV = "QMETRIC_OUT_DIR"

# Significant digits of every number written by the CLI.
OUTPUT_DIGITS = 12
