"""Exact checks of local inner derivations on matrix rings and symmetric Jordan rings."""

__version__ = "0.1.0"

from .scalars import Ring, RingSpec, parse_ring, ring_make  # noqa: E402
from .matrices import Matrix, sym_unit, unit  # noqa: E402
from .derivations import canonicalize, inner_apply, inner_equal, joint_solve, sylvester_solve  # noqa: E402
from .engine import PointSet  # noqa: E402
from .localcheck import (AdditiveMap, Verdict, check_local_inner, is_derivation,  # noqa: E402
                         map_from_basis_images, map_from_inner)
from .globalize import NotLocalInner, globalize_direct, globalize_stitch, reconstruct_and_verify  # noqa: E402
from .jordan import (check_local_inner_jordan, globalize_jordan, globalize_jordan_corners, jordan_is_derivation,  # noqa: E402
                     map_from_skew, pairs_to_skew, skew_to_pairs)
