"""Certified upper and lower bounds on the largest singular value of a matrix."""

from .blocks import (BlockPartition, CompressionMatrix, block_partin_bound,
                     block_sigma_bound, compress)
from .bounds import (BoundValue, SandwichResult, degeneracy_check, refined_bound,
                     sandwich_estimate, schur_bound, support_bound, walk_lower_bound,
                     walk_upper_bound)
from .errors import (ConfigError, DegenerateInputError, MatrixMarketError, PartitionError,
                     ShapeError, SigmaBoundsError, TheoremInapplicableError)
from .generators import generate
from .matrix import (MarginSums, Matrix, entry_sum_gram, gram_apply, margin_sums,
                     modulus_matrix)
from .mmio import read_matrix_market, write_matrix_market
from .oracle import OracleResult, exact_small_sigma, reference_sigma
from .report import BoundReport, ReportDocument, compute_bounds
from .walks import (WalkLedger, WalkState, build_ledger, walk_init, walk_row_values,
                    walk_step, walk_total)

__version__ = "0.1.0"
