"""Mine all item pairs whose phi correlation reaches a threshold.

Three miners share one result contract: :func:`mine_tcp` (FP-tree, no
candidate generation), :func:`mine_taper` (upper-bound filter, then refine)
and :func:`mine_brute` (dense reference).
"""

from .corrmath import ConstantItemError, PairSupports, phi, phi_upper_bound
from .datagen import GenParams, generate, preset
from .fptree import FPTree, build_fptree, conditional_pattern_base, cooccurrence_counts
from .miners import (
    MiningQuery,
    MiningReport,
    PairResult,
    mine,
    mine_brute,
    mine_taper,
    mine_tcp,
    verify_equivalence,
)
from .txdb import (
    CategoricalSchema,
    SupportTable,
    TransactionDatabase,
    convert_categorical,
    count_supports,
    load_basket_file,
    save_basket_file,
)

__version__ = "0.1.0"
