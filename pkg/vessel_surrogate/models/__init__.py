from .design import (  # noqa: F401
    AL6061_T6,
    DESIGN_VARIABLES,
    Bounds,
    DesignPoint,
    DesignSpace,
    Material,
    SamplingMethod,
    StressResult,
)
from .dataset import Dataset, FoldAssignment, Provenance, Scaler  # noqa: F401
from .network import (  # noqa: F401
    AdamState,
    Architecture,
    Gradients,
    NetworkParameters,
    TrainConfig,
    TrainHistory,
)
from .ensemble import EnsembleMetadata, EnsembleModel, SplitRecord  # noqa: F401
from .trees import (  # noqa: F401
    BoostModel,
    ForestModel,
    SplitCriterion,
    TreeFamily,
    TreeHyperParams,
    TreeNode,
)
from .metrics import BenchmarkRow, MetricsReport  # noqa: F401
