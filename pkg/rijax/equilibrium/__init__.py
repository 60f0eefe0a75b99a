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
from rijax.equilibrium.benchmarks import (
    kzero_atom_check,
    kzero_atom_gain_formula,
    kzero_fullinfo_lhs,
    kzero_fullinfo_refute,
    kzero_uniform_check,
    kzero_uniform_payoff,
    kzero_uninformative_check,
)
from rijax.equilibrium.checks import (
    check_binary_symmetric,
    check_full_info,
    check_outcome_equivalent,
    check_uninformative,
)
from rijax.equilibrium.deviation import (
    DeviationSearchResult,
    check_profile,
    deviation_lattice,
    deviation_search,
    first_visit_tables,
    lattice_nodes,
)
from rijax.equilibrium.report import (
    DeviationCertificate,
    DeviationSearchConfig,
    EquilibriumReport,
    OutOfRegionError,
    decide,
    out_of_region_report,
)
from rijax.equilibrium.selection import (
    binary_symmetric_region,
    first_visit_value,
    full_info_region,
    in_multiplicity_region,
    min_cost_for_full_info,
    selection_probability,
)
from rijax.equilibrium.single_sender import (
    SingleSenderParams,
    SingleSenderSolution,
    acceptance_probability,
    single_sender_response,
    single_sender_solve,
)

__all__ = [
    "EquilibriumReport",
    "DeviationCertificate",
    "DeviationSearchConfig",
    "DeviationSearchResult",
    "OutOfRegionError",
    "decide",
    "out_of_region_report",
    "full_info_region",
    "binary_symmetric_region",
    "min_cost_for_full_info",
    "in_multiplicity_region",
    "selection_probability",
    "first_visit_value",
    "lattice_nodes",
    "deviation_lattice",
    "first_visit_tables",
    "deviation_search",
    "check_profile",
    "check_full_info",
    "check_binary_symmetric",
    "check_uninformative",
    "check_outcome_equivalent",
    "kzero_uniform_payoff",
    "kzero_uniform_check",
    "kzero_atom_gain_formula",
    "kzero_atom_check",
    "kzero_fullinfo_lhs",
    "kzero_fullinfo_refute",
    "kzero_uninformative_check",
    "SingleSenderParams",
    "SingleSenderSolution",
    "acceptance_probability",
    "single_sender_response",
    "single_sender_solve",
]
