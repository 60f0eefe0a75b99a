# Copyright 2023 The JaxGaussianProcesses Contributors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Parameter sweeps over independent grid cells."""

from concurrent.futures import ThreadPoolExecutor
import logging

from beartype.typing import (
    Callable,
    List,
    Optional,
    Sequence,
    TypeVar,
)
from tqdm.auto import tqdm

logger = logging.getLogger(__name__)

Cell = TypeVar("Cell")
Result = TypeVar("Result")


def run_sweep(
    fn: Callable[[Cell], Result],
    cells: Sequence[Cell],
    parallel: bool = False,
    progress: bool = True,
    desc: str = "sweep",
    max_workers: Optional[int] = None,
) -> List[Result]:
    """Evaluate `fn` on every cell.

    Results are returned in the order of `cells`, whether or not the cells are
    evaluated concurrently.

    Args:
        fn (Callable): the per-cell computation; must not mutate shared state.
        cells (Sequence): the grid cells.
        parallel (bool): evaluate cells on a thread pool.
        progress (bool): show a progress bar.
        desc (str): progress bar label.
        max_workers (Optional[int]): thread pool size.

    Returns:
        List: one result per cell.
    """
    logger.info("%s: %d cells%s", desc, len(cells), " in parallel" if parallel else "")
    bar = tqdm(total=len(cells), desc=desc, disable=not progress)
    try:
        if not parallel:
            results = []
            for cell in cells:
                results.append(fn(cell))
                bar.update()
            return results
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = []
            for result in pool.map(fn, cells):
                results.append(result)
                bar.update()
            return results
    finally:
        bar.close()
        logger.info("%s: done", desc)


__all__ = ["run_sweep"]
