"""Favard length and Favard curve length of planar sets, with the multiscale
tools used to study their decay on four-corner Cantor generations."""

__version__ = "0.1.0"

from .curves import (DELTA, CurveError, ExtendedGraphCurve, Frame, GraphCurve, TranslatedCurve, extend_curve,
                     frame_at, make_circle_arc, make_parabola)
from .estimators import (DecayFit, McResult, McSpec, QuadratureResult, QuadratureSpec, ReferenceBounds,
                         buffon_curve_mc, favard_curve_length, favard_length, fit_decay, log_star,
                         reference_bounds)
from .fractals import (SegmentSet, SquareSet, WeightedPointCloud, boundary, cantor_generation,
                       corner_ifs_generation, sample_points, unit_segment)
from .intervals import IntervalUnion, dilate, intersect, measure, normalize
from .multiscale import (PreconditionError, RectSearch, ScaleSequence, SectorSpec, curve_sector_member,
                         detect_curve_pair, detect_high_density_strip, detect_high_multiplicity,
                         detect_positive_multiplicity, hausdorff_content_cover, rectifiability_constant_lower,
                         sliding_pigeonhole, straight_sector_member, verify_sector_comparability,
                         verify_strip_containment)
from .projection import (ProjectionQuery, multiplicity_at, parameter_domain, project_linear, project_point,
                         project_set, project_square)
