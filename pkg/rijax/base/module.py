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
"""Validated parameter containers shared by the receiver and equilibrium code."""

import dataclasses

from beartype.typing import (
    Any,
    Dict,
    Mapping,
    Optional,
    TypeVar,
    Union,
)
from simple_pytree import Pytree

from rijax.typing import (
    ScalarFloat,
    ScalarInt,
)

Self = TypeVar("Self")


def static_field(
    default: Any = dataclasses.MISSING,
    *,
    repr: bool = True,
    metadata: Optional[Mapping[str, Any]] = None,
):
    """A dataclass field that is kept out of the pytree leaves.

    Static fields hold discrete switches (tie rules, cost modes, grid sizes).
    Two modules that differ only in a static field flatten to different tree
    definitions, so `jax.jit` traces them separately.
    """
    metadata = dict(metadata or {})
    if "pytree_node" in metadata:
        raise ValueError("static_field sets `pytree_node` itself.")
    metadata["pytree_node"] = False
    return dataclasses.field(default=default, repr=repr, metadata=metadata)


def check_positive(
    name: str, value: Union[ScalarInt, ScalarFloat], allow_zero: bool = False
) -> None:
    """Raise a `ValueError` unless `value` is positive (or zero, if allowed)."""
    if allow_zero and not value >= 0.0:
        raise ValueError(f"{name} must be nonnegative, got {value}.")
    if not allow_zero and not value > 0.0:
        raise ValueError(f"{name} must be positive, got {value}.")


def check_open_unit(name: str, value: Union[ScalarInt, ScalarFloat]) -> None:
    """Raise a `ValueError` unless `value` is a prior or threshold in (0, 1)."""
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {value}.")


class Module(Pytree):
    r"""Immutable parameter container.

    Subclasses are dataclasses whose `__post_init__` validates the model
    parameters, usually with `check_positive` and `check_open_unit`.
    Numerical fields are pytree leaves so that a `Module` can be passed
    straight through `jax.jit` and `jax.vmap`; discrete switches are declared
    with `static_field`.
    """

    def replace(self: Self, **kwargs: Any) -> Self:
        """Copy with some fields changed.

        The copy goes through `__post_init__` again, so an inadmissible value
        raises the same error as the constructor.

        Raises:
            ValueError: if a keyword is not a field of the module.
        """
        names = {f.name for f in dataclasses.fields(self)}
        unknown = sorted(set(kwargs) - names)
        if unknown:
            raise ValueError(f"'{unknown[0]}' is not a field of {type(self).__name__}")
        return dataclasses.replace(self, **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        """Plain mapping of the fields, with array leaves converted to floats."""
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Module):
                value = value.to_dict()
            elif getattr(value, "shape", None) == ():
                value = float(value)
            out[f.name] = value
        return out


__all__ = ["Module", "static_field", "check_positive", "check_open_unit"]
