"""Static default parameters of BASE-PC runs and experiments."""

# expansion factor for problems of a few dimensions and moderate orders
GAMMA_LOW_D = 1.5


# expansion factor for the stiff, high-order surface adsorption problem
GAMMA_ADSORPTION = 1.3


# expansion factor for problems of many dimensions and low orders
GAMMA_HIGH_D = 1.01


# problems above this dimension use the high-dimensional expansion factor
HIGH_D_THRESHOLD = 20


# the number of new dimensions basis expansion may open at order 1
DIM_ADD = 20


# the smallest correction sample, relative to the current pool
MIN_SAMPLE_RATIO = 0.25


# the largest correction sample, relative to the current pool
MAX_SAMPLE_RATIO = 1.0


# accepted range of the smallest correction ratio
MIN_SAMPLE_RATIO_RANGE = (0.1, 0.3)


# consecutive non-improving candidates ending basis validation
MAX_STRIKES = 6


# the number of outer iterations of a run
MAX_ITERATIONS = 10


# the initial total order of the basis
INITIAL_ORDER = 1


# the initial pool holds this many samples per basis function
INITIAL_OVERSAMPLING = 2


# the number of hold-out partitions of cross-validation
CV_FOLDS = 24


# the share of samples held out in each partition
CV_HOLDOUT_FRACTION = 0.2


# the number of positive candidate tolerances
CV_TOLERANCES = 20


# reference error draws for problems of up to HIGH_D_THRESHOLD dimensions
N_REF_LOW_D = 100000


# reference error draws for higher-dimensional problems
N_REF_HIGH_D = 10000


# sample modes of a BASE-PC run
SAMPLE_ADAPTIVE = "sample_adaptive"
ORTHOGONALITY = "orthogonality"


# methods an experiment can run
BASE_PC_SA = "base_pc_sa"
BASE_PC_NO_SA = "base_pc_no_sa"
TOTAL_ORDER = "total_order"


def suggested_gamma(dim):
    """Return the default expansion factor for a problem dimension."""
    return GAMMA_HIGH_D if dim > HIGH_D_THRESHOLD else GAMMA_LOW_D


def suggested_n_ref(dim):
    """Return the default number of reference error draws."""
    return N_REF_HIGH_D if dim > HIGH_D_THRESHOLD else N_REF_LOW_D
