"""Edge-preserving image smoothing by least-squares reconstruction from
edge-aware filtered gradients (BLF-LS, NC-LS), with LS/WLS baselines."""
from .applications import (EnhanceParams, TonemapParams, clipart_cleanup, detail_enhance,
                           flash_no_flash, texture_removal, tonemap_hdr)
from .bilateral import GridParams, RangeSpatialParams, blf_brute, blf_grid
from .domain_transform import DtParams, nc_filter
from .errors import EpslsError, InvalidInputError, ParameterError, ResourceError
from .image import (GradientField, NormalizationRecord, denormalize, forward_gradients,
                    gaussian_blur, normalize_to_unit, to_log_luminance)
from .pipelines import Kind, RollingParams, SmootherSpec, rolling_nc_ls, smooth
from .solver import (SolveParams, WlsParams, difference_otf, ls_solve_dense_oracle, ls_solve_fft,
                     lsgrad_solve_fft, wls_solve)

__version__ = "0.1.0"
