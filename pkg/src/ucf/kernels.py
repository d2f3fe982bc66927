"""Kernel selection: compiled extension when available, pure Python otherwise.

Set UCF_PURE_PYTHON=1 to force the fallback (used by tests and benchmarks).
"""

import os
from functools import lru_cache

from ucf import _kernels_py

if os.environ.get("UCF_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from ucf import _kernels_c as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND

mask_bits = _kernels_py.mask_bits
subset_expand = _kernels_py.subset_expand
subset_index = _kernels_py.subset_index

union_close = _impl.union_close
closed_subsets = _impl.closed_subsets
count_supersets = _impl.count_supersets
pi_union = _impl.pi_union
join_masks = _impl.join_masks
meet_masks = _impl.meet_masks
masks_without = _impl.masks_without
is_union_closed = _impl.is_union_closed
is_intersection_closed = _impl.is_intersection_closed
eset_mask = _impl.eset_mask
eset_sizes_many = _impl.eset_sizes_many
eset_masks_powerset = _impl.eset_masks_powerset
eset_sizes_powerset = _impl.eset_sizes_powerset


@lru_cache(maxsize=8)
def powerset_filters(k: int) -> tuple:
    """Cached non-empty filters of 2^[k]; see the kernel docstring."""
    if k > 6:
        raise ValueError("filter enumeration capped at 6 ground elements")
    return tuple(_impl.powerset_filters(k))


@lru_cache(maxsize=8)
def union_closed_masks(k: int) -> tuple:
    """Cached union-closed subfamily masks of 2^[k]; see the kernel docstring."""
    if k > 4:
        raise ValueError("subfamily enumeration capped at 4 ground elements")
    return tuple(_impl.union_closed_masks(k))
