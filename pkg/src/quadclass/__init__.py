"""quadclass: exact class groups of quadratic fields via binary quadratic
forms, plus density experiments on 3-indivisibility of class numbers."""

from .arith import (
    Discriminant,
    NotFundamental,
    SquarefreeAPCount,
    classify_discriminant,
    count_squarefree_in_ap,
    is_fundamental_discriminant,
    is_squarefree,
    kronecker,
    mobius,
    sieve_squarefree,
)
from .families import CongruenceFamily, FamilyRejection, suggest, validate
from .forms import (
    ClassGroupInfo,
    ClassRep,
    Form,
    analytic_h_imaginary,
    class_group_info,
    compose,
    enumerate_classes,
    is_reduced,
    principal_class,
    reduce_form,
    rho,
    three_torsion_count,
    unit_norm,
)
from .experiments import (
    DensityReport,
    DiscriminantSets,
    Lambda3Certificate,
    enumerate_s_plus,
    imaginary_density,
    indivisibility_density,
    lambda_survey,
    nh_average,
    pair_experiment,
)

__version__ = "0.1.0"
