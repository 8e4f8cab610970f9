"""Brute-force reference counts, for equivalence testing and benchmarking.

For every subgroup this filters the whole dataset by the subgroup's fixed
attributes and counts the survivors, O(n_rows * m * 3**m) by construction.
It deliberately shares no logic with the propagation engine beyond the
table layout, so engine bugs cannot cancel out.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset
from .errors import CapacityError
from .lattice import Lattice
from .tally import CountTable

#: Cap on 3**m * n_rows filter work before refusing to run.
DEFAULT_MAX_WORK = 10 ** 11


def brute_force_counts(data: Dataset, max_m: int | None = None,
                       max_work: int | None = None) -> CountTable:
    """Count every subgroup by filtering the dataset per subgroup."""
    limit = DEFAULT_MAX_WORK if max_work is None else int(max_work)
    size = 3 ** data.m
    if size * data.n > limit:
        raise CapacityError(
            f"brute force needs 3**{data.m} * {data.n} = {size * data.n} filter ops, "
            f"over the cap {limit}"
        )
    lattice = Lattice(data.m, max_m=max_m)

    # own matching logic: per-column equality masks, combined per subgroup
    col_is = [
        (data.attrs[:, c] == 0, data.attrs[:, c] == 1) for c in range(data.m)
    ]
    y_pos = data.y_true == 1
    confusion = data.has_predictions
    if confusion:
        pred_pos = data.y_pred == 1
        m_tp = y_pos & pred_pos
        m_fp = ~y_pos & pred_pos
        m_tn = ~y_pos & ~pred_pos
        m_fn = y_pos & ~pred_pos

    n = np.zeros(size, dtype=np.int64)
    n_pos = np.zeros(size, dtype=np.int64)
    if confusion:
        tp = np.zeros(size, dtype=np.int64)
        fp = np.zeros(size, dtype=np.int64)
        tn = np.zeros(size, dtype=np.int64)
        fn = np.zeros(size, dtype=np.int64)

    mask = np.empty(data.n, dtype=bool)
    scratch = np.empty(data.n, dtype=bool)
    ops = 0
    for index in range(size):
        # decode base-3 digits, most significant digit = attribute 0
        rest = index
        fixed: list[tuple[int, int]] = []
        for col in range(data.m - 1, -1, -1):
            rest, digit = divmod(rest, 3)
            if digit != 2:
                fixed.append((col, digit))
        if fixed:
            first_col, first_val = fixed[0]
            np.copyto(mask, col_is[first_col][first_val])
            for col, val in fixed[1:]:
                np.logical_and(mask, col_is[col][val], out=mask)
            count = int(np.count_nonzero(mask))
            np.logical_and(mask, y_pos, out=scratch)
            pos = int(np.count_nonzero(scratch))
        else:
            count = data.n
            pos = int(np.count_nonzero(y_pos))
        ops += data.n * (len(fixed) + 1)
        n[index] = count
        n_pos[index] = pos
        if confusion:
            if fixed:
                for arr, cell in ((tp, m_tp), (fp, m_fp), (tn, m_tn), (fn, m_fn)):
                    np.logical_and(mask, cell, out=scratch)
                    arr[index] = np.count_nonzero(scratch)
            else:
                tp[index] = np.count_nonzero(m_tp)
                fp[index] = np.count_nonzero(m_fp)
                tn[index] = np.count_nonzero(m_tn)
                fn[index] = np.count_nonzero(m_fn)

    table = CountTable(
        lattice=lattice,
        n=n,
        n_pos=n_pos,
        tp=tp if confusion else None,
        fp=fp if confusion else None,
        tn=tn if confusion else None,
        fn=fn if confusion else None,
        propagated=True,
        op_count=ops,
    )
    table._freeze()
    return table
