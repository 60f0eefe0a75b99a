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
from dataclasses import (
    dataclass,
    field,
)

import jax
import jax.numpy as jnp
import jax.tree_util as jtu
import pytest
from simple_pytree import Pytree

from rijax.base.module import (
    Module,
    check_open_unit,
    check_positive,
    static_field,
)


@dataclass
class Costs(Module):
    k: float = 1.0
    mu: float = 0.5
    mode: str = static_field("constant")

    def __post_init__(self) -> None:
        check_positive("k", self.k)


@dataclass
class Nested(Module):
    costs: Costs = field(default_factory=Costs)
    scale: float = 2.0


def test_module_is_pytree():
    tree = Costs(k=2.0, mu=0.25)
    assert isinstance(tree, Module)
    assert isinstance(tree, Pytree)
    assert sorted(jtu.tree_leaves(tree)) == [0.25, 2.0]


def test_static_field_is_not_a_leaf():
    tree = Costs(mode="experiment")
    leaves, treedef = jtu.tree_flatten(tree)
    assert "experiment" not in leaves
    rebuilt = jtu.tree_unflatten(treedef, leaves)
    assert rebuilt.mode == "experiment"


def test_static_field_keeps_metadata():
    f = static_field(3, metadata={"unit": "nodes"})
    assert f.default == 3
    assert f.metadata == {"unit": "nodes", "pytree_node": False}
    with pytest.raises(ValueError):
        static_field(1.0, metadata={"pytree_node": True})


@pytest.mark.parametrize("value", [0.0, 1.0, -0.5, 1.5])
def test_check_open_unit(value: float):
    with pytest.raises(ValueError, match=r"mu must lie in \(0, 1\)"):
        check_open_unit("mu", value)
    check_open_unit("mu", 0.5)


def test_check_positive():
    check_positive("k", 2)
    check_positive("k", 0.0, allow_zero=True)
    with pytest.raises(ValueError, match="k must be positive"):
        check_positive("k", 0.0)
    with pytest.raises(ValueError, match="k must be nonnegative"):
        check_positive("k", -1.0, allow_zero=True)


def test_replace_revalidates():
    tree = Costs(k=2.0)
    new = tree.replace(mu=0.75)
    assert (new.k, new.mu, new.mode) == (2.0, 0.75, "constant")
    assert tree.mu == 0.5

    with pytest.raises(ValueError, match="k must be positive"):
        tree.replace(k=-1.0)
    with pytest.raises(ValueError, match="not a field"):
        tree.replace(lam=0.5)


def test_modules_are_immutable():
    tree = Costs()
    with pytest.raises(AttributeError):
        tree.k = 3.0


def test_to_dict():
    tree = Nested(costs=Costs(k=jnp.array(3.0)), scale=1.5)
    assert tree.to_dict() == {
        "costs": {"k": 3.0, "mu": 0.5, "mode": "constant"},
        "scale": 1.5,
    }


def test_modules_pass_through_jit():
    @jax.jit
    def cost(tree: Costs, x):
        return tree.k * (x - tree.mu) ** 2

    assert float(cost(Costs(k=4.0), 1.0)) == pytest.approx(1.0)
    # static fields select distinct traces
    assert float(cost(Costs(k=4.0, mode="experiment"), 0.0)) == pytest.approx(1.0)
