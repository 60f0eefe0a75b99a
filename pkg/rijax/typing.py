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

from beartype.typing import (
    Callable,
    Literal,
    Union,
)
from jaxtyping import (
    Array as JAXArray,
    Bool,
    Float,
    Int,
    UInt32,
)
from numpy import ndarray as NumpyArray

OldKeyArray = UInt32[JAXArray, "2"]
KeyArray = Union[OldKeyArray, JAXArray]  # raw uint32 keys and typed keys

Array = Union[JAXArray, NumpyArray]

ScalarBool = Union[bool, Bool[Array, ""]]
ScalarInt = Union[int, Int[Array, ""]]
ScalarFloat = Union[float, Float[Array, ""]]

VectorOrScalar = Union[ScalarFloat, Float[Array, "..."]]

TieRule = Literal["fair", "first", "second"]
r"""How the receiver orders two senders whose visit values coincide. `"fair"`
visits each sender first with probability $`1/2`$."""

PosteriorTie = Literal["first", "second"]
"""Which sender is selected when the posterior of the first-visited sender
equals the prior of the other one and no further learning takes place."""

Verdict = Literal["equilibrium", "refuted", "inconclusive"]

Objective = Callable[[Float[Array, "N D"]], Float[Array, " N"]]
r"""Type alias for batched objectives evaluated at $`N`$ points of a
$`D`$-dimensional box."""

__all__ = [
    "Array",
    "KeyArray",
    "ScalarBool",
    "ScalarInt",
    "ScalarFloat",
    "VectorOrScalar",
    "TieRule",
    "PosteriorTie",
    "Verdict",
    "Objective",
    "Bool",
    "Float",
    "Int",
]
