"""Verification lab for with/without-replacement matrix norm mean
inequalities over PSD matrices, with a Kaczmarz sampling benchmark."""

from .amgm import (MatrixFamily, amgm_gap, enumerate_tuples, equiv_form_check,
                   maclaurin_gap, recht_gap, wor_mean, wr_mean)
from .checks import (DEFAULT_EPS, GapReport, alt4_check, alt_norm_check,
                     alt_trace_check, eig_product_check, gap_report,
                     holder_triple_check, majorization_bridge_check,
                     pair_check, psd_order_check, sandwich_check,
                     weakly_majorizes)
from .densecore import (matrix_abs, matrix_from_text, matrix_to_text,
                        psd_power, random_orthogonal, random_psd,
                        singular_values, sym_eigen)
from .kaczmarz import (BenchConfig, LinearSystem, Schedule, bench_compare,
                       expected_product_norm, kaczmarz_step, make_schedule,
                       random_system, row_projector, run_trajectory)
from .norms import (CATALOG, FROBENIUS, OPERATOR, TRACE, NormSpec, gauge_eval,
                    kyfan, parse_norm, schatten, ui_norm)
from .rng import Rng, derive, mix64
from .search import SearchConfig, SearchReport, search_counterexample
from .wedge import PropertyReport, compound, det_lu, subset_index, \
    verify_wedge_properties

__version__ = "0.1.0"
