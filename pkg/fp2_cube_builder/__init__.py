from fp2_cube_builder import util
from fp2_cube_builder.blowup import (
    Cube,
    CubeComplex,
    CubeVertex,
    branch_locus,
    build_blowup,
    vertex_link,
)
from fp2_cube_builder.branch import (
    MonodromyRep,
    branched_link_cover,
    build_monodromy,
    find_int4cycles_ordering,
    label_graph,
    make_perm_pair,
    project_graphs,
)
from fp2_cube_builder.errors import (
    BudgetExhausted,
    Fp2Error,
    InputError,
    PreconditionError,
    VerificationError,
)
from fp2_cube_builder.homology import homology
from fp2_cube_builder.morse import MorseOrientation, default_orientation
from fp2_cube_builder.pipeline import Pipeline, PipelineConfig, run_pipeline
from fp2_cube_builder.presentation import Presentation, fundamental_group_presentation
from fp2_cube_builder.simplicial import (
    SimplicialComplex,
    barycentric_subdivision,
    link,
    octahedralise,
    read_complex,
)

__all__ = [
    "util",
    "Cube",
    "CubeComplex",
    "CubeVertex",
    "branch_locus",
    "build_blowup",
    "vertex_link",
    "MonodromyRep",
    "branched_link_cover",
    "build_monodromy",
    "find_int4cycles_ordering",
    "label_graph",
    "make_perm_pair",
    "project_graphs",
    "BudgetExhausted",
    "Fp2Error",
    "InputError",
    "PreconditionError",
    "VerificationError",
    "homology",
    "MorseOrientation",
    "default_orientation",
    "Pipeline",
    "PipelineConfig",
    "run_pipeline",
    "Presentation",
    "fundamental_group_presentation",
    "SimplicialComplex",
    "barycentric_subdivision",
    "link",
    "octahedralise",
    "read_complex",
]
