# Copyright 2026 qfern contributors
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:
#
# 1. Redistributions of source code must retain the above copyright notice, this
# list of conditions and the following disclaimer.
#
# 2. Redistributions in binary form must reproduce the above copyright notice,
# this list of conditions and the following disclaimer in the documentation
# and/or other materials provided with the distribution.
#
# 3. Neither the name of the copyright holder nor the names of its contributors
# may be used to endorse or promote products derived from this software without
# specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

from ._version import __version__
from .core import (  # noqa: F401
    ConvergenceError,
    DirectedGraphError,
    DisconnectedGraphError,
    Edge,
    EdgeList,
    EmptyReportError,
    GraphParseError,
    GraphStructureError,
    GraphTooLargeError,
    InvalidNodeError,
    InvalidParameterError,
    NoCandidateEdgesError,
    NonFiniteStateError,
    NonSymmetricError,
    UncenteredFrequencyError,
    WeightedGraph,
)
from .cuts import (  # noqa: F401
    CheegerCheck,
    CutResult,
    Normalization,
    cheeger,
    cheeger_after_addition,
    cheeger_exact,
    check_cheeger_inequality,
    cut_ratio,
    fiedler_bipartition,
    fiedler_sweep,
)
from .graph import (  # noqa: F401
    add_node,
    barbell_graph,
    complete_graph,
    connected_components,
    cycle_graph,
    edge_list,
    export_dot,
    from_edge_list,
    is_connected,
    load_graph,
    path_graph,
    random_dag,
    random_tree,
    save_graph,
    star_graph,
    symmetrize,
)
from .output import RunManifest  # noqa: F401
from .rewire import (  # noqa: F401
    CandidatePolicy,
    GradientMode,
    RewiringConfig,
    RewiringReport,
    asoft_update,
    fiedler_gradient,
    qfern_once,
    rewire_optimize,
)
from .spectral import (  # noqa: F401
    ResistanceMatrix,
    SpectralDecomposition,
    decompose,
    effective_resistance,
    eig_sym,
    laplacian,
    laplacian_of,
    pseudoinverse,
    resistance_matrix,
    total_effective_resistance,
)
from .sync import (  # noqa: F401
    DesyncReport,
    FrequencyVector,
    SimulationConfig,
    StabilizerConfig,
    SyncAnalysis,
    TargetPolicy,
    ThresholdPolicy,
    detect_desync_regions,
    einf_norm_condition,
    kuramoto_simulate,
    place_stabilizer,
    verify_synchronization,
)


def minor_version():
    return ".".join(__version__.split(".")[:2])
