"""Frequent hypercyclicity experiments for multiples of weighted shifts.

Modules:

* ``densities``: weighted lower/upper densities of integer sets;
* ``shift_analysis``: weight sequences and the spectral-type quantities of ``B_w``;
* ``operators``: sparse vectors, shift words and C-type operators;
* ``construction``: common frequently hypercyclic vectors, built and checked;
* ``lab_cli``: the ``freqdyn`` experiment driver.
"""

from .errors import (ConfigError, DivergingTailError, DomainError, EstimateOverflowError,
                     FreqdynError, HorizonError, PreconditionError, TruncationError,
                     ValidationError)
from .densities import (DensitySeq, IndexSet, delta2_verdict, emp_lower_density,
                        emp_upper_density, nk_f, precedes, shift_union)
from .shift_analysis import (ConstantWeight, CostakisSambarinoWeight, FourBlockWeight,
                             LambdaSet, Rational2Weight, TabulatedWeight, common_fhc_verdict,
                             fhc_verdict, parse_weight, shift_quantities)
from .operators import SparseVec, apply_backward, apply_forward, shift_word
from .construction import (EpsilonBudget, assemble_common_vector, build_gmm_hit_sets,
                           build_index_sets, tail_threshold_table, verify_frequent_hits)

__version__ = "0.1.0"
