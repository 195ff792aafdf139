"""contourseg: interactive segmentation from unconstrained contour clicks.

Core pieces: exact smallest-enclosing-circle RoI extraction, binary mask
algorithms, simulated click strategies (initial pair / geometric /
corrective), a pluggable predictor pipeline, an NoC / mIoU evaluation
harness, and an interactive HTTP refinement service.
"""

from . import click_sim, evaluation, fixtures, geometry, mask_ops, predictor
from .click_sim import (Click, ClickSet, PairSamplingParams, SimulationParams,
                        next_click_geometric, next_clicks_corrective,
                        perturb_click, sample_initial_pair,
                        simulate_training_sequence)
from .errors import (ContourSegError, CorruptInstance, DatasetNotFound,
                     DegenerateCrop, EmptyMask, EmptyPointSet, EmptySeedSet,
                     OracleSizeExceeded, PredictorTimeout, ProtocolError,
                     ShapeMismatch, TooFewClicks, TooFewPoints, TooSmallTarget)
from .evaluation import (Dataset, EvalConfig, EvalReport, crop_loss_analysis,
                         evaluate_miou_curve, evaluate_noc, load_dataset,
                         write_report)
from .geometry import (Circle, CropParams, CropRect, brute_force_sec,
                       expand_to_crop, map_point, smallest_enclosing_circle)
from .mask_ops import (Contour, ContourSet, connected_components,
                       crop_resize_mask, distance_transform, extract_contours,
                       fill_convex_hull, iou, load_mask, paste_mask,
                       rasterize_polyline, save_mask)
from .predictor import (BaselinePredictor, EncodingParams, ExternalPredictor,
                        ModelInput, Prediction, assemble_input, binarize,
                        encode_clicks, external_predict, full_pipeline)

__version__ = "0.1.0"
